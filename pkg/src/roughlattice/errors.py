"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class RieszError(Exception):
    """Base class for all errors raised by roughlattice."""


class SpaceMismatchError(RieszError, TypeError):
    """Two operands live in different Riesz spaces."""


class UnsupportedSpaceError(RieszError):
    """The operation is not defined for this space (e.g. diameter in lex)."""


class UndecidableError(RieszError):
    """The net class is outside what the exact decision procedures cover."""


class UnsupportedCombinationError(RieszError):
    """A combinator would leave the closed classes of nets."""


class UnboundedError(RieszError):
    """A supremum that was needed is +infinity."""


class PreconditionError(RieszError, ValueError):
    """A documented precondition does not hold.

    ``index`` carries the least violating index when one is known.
    """

    def __init__(self, message: str, index=None):
        super().__init__(message)
        self.index = index


class CapabilityError(RieszError):
    """A convergence structure lacks a property a theorem relies on."""
