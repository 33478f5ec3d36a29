"""Concrete Riesz spaces with exact lattice operations.

Three spaces are provided:

* :class:`QVec` -- Q^d with the coordinatewise order (Dedekind complete model),
* :class:`LexVec` -- Q^2 with the lexicographic order (totally ordered,
  non-Archimedean),
* :class:`PwLin` -- continuous piecewise-linear functions on [0, 1] with
  rational breakpoints, ordered pointwise.

All elements are immutable.  ``a <= b`` is the partial order of the space, so
``not a <= b`` does not imply ``b <= a`` (except in ``LexVec``).  Mixing spaces
raises :class:`~roughlattice.errors.SpaceMismatchError`.
"""

from __future__ import annotations

import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import SpaceMismatchError, UnsupportedSpaceError
from .exact import as_fraction, parse_rational


@dataclass(frozen=True)
class Space:
    kind: str  # "qvec" | "lex" | "pwlin"
    dim: int = 1

    def zero(self) -> Element:
        if self.kind == "qvec":
            return QVec((0,) * self.dim)
        if self.kind == "lex":
            return LexVec(0, 0)
        return PwLin.constant(0)

    @property
    def coordinate_count(self) -> int:
        """Number of rational coordinates, or 0 for function spaces."""
        return {"qvec": self.dim, "lex": 2}.get(self.kind, 0)

    def from_coords(self, coords) -> Element:
        coords = tuple(coords)
        if len(coords) != self.coordinate_count:
            raise SpaceMismatchError(f"{self} takes {self.coordinate_count} coordinates, got {len(coords)}")
        if self.kind == "qvec":
            return QVec(coords)
        if self.kind == "lex":
            return LexVec(*coords)
        raise UnsupportedSpaceError("pwlin elements have no coordinate form")

    def __str__(self):
        return f"qvec {self.dim}" if self.kind == "qvec" else self.kind


QVEC1 = Space("qvec", 1)


@lru_cache(maxsize=None)
def _qvec_space(dim: int) -> Space:
    return Space("qvec", dim)
LEX = Space("lex", 2)
PWLIN = Space("pwlin", 0)


class Element(ABC):
    """Common surface of lattice elements."""

    space: Space

    def _check(self, other) -> None:
        if not isinstance(other, Element) or other.space != self.space:
            raise SpaceMismatchError(
                f"cannot combine {self.space} with "
                f"{getattr(other, 'space', type(other).__name__)}"
            )

    @abstractmethod
    def __add__(self, other): ...

    @abstractmethod
    def __neg__(self): ...

    @abstractmethod
    def scale(self, t): ...

    @abstractmethod
    def __le__(self, other) -> bool: ...

    @abstractmethod
    def join(self, other): ...

    @abstractmethod
    def meet(self, other): ...

    def __sub__(self, other):
        self._check(other)
        return self + (-other)

    def __mul__(self, t):
        return self.scale(t)

    __rmul__ = __mul__

    def __ge__(self, other) -> bool:
        self._check(other)
        return other <= self

    def __lt__(self, other) -> bool:
        return self <= other and self != other

    def __gt__(self, other) -> bool:
        return self >= other and self != other

    def zero(self):
        return self.space.zero()

    def abs(self):
        return self.join(-self)

    def pos(self):
        return self.join(self.zero())

    def neg_part(self):
        return (-self).join(self.zero())

    def is_positive(self) -> bool:
        return self.zero() <= self


def join(a: Element, b: Element) -> Element:
    return a.join(b)


def meet(a: Element, b: Element) -> Element:
    return a.meet(b)


def leq(a: Element, b: Element) -> bool:
    a._check(b)
    return a <= b


# ---------------------------------------------------------------------------


def _fmt(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True)
class QVec(Element):
    coords: tuple

    def __post_init__(self):
        coords = tuple(as_fraction(c) for c in self.coords)
        if not coords:
            raise ValueError("QVec needs at least one coordinate")
        object.__setattr__(self, "coords", coords)

    @property
    def space(self) -> Space:
        return _qvec_space(len(self.coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __add__(self, other):
        self._check(other)
        return QVec(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return QVec(tuple(-a for a in self.coords))

    def __sub__(self, other):
        self._check(other)
        return QVec(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, t):
        t = as_fraction(t)
        return QVec(tuple(t * a for a in self.coords))

    def __le__(self, other) -> bool:
        self._check(other)
        return all(a <= b for a, b in zip(self.coords, other.coords))

    def join(self, other):
        self._check(other)
        return QVec(tuple(max(a, b) for a, b in zip(self.coords, other.coords)))

    def meet(self, other):
        self._check(other)
        return QVec(tuple(min(a, b) for a, b in zip(self.coords, other.coords)))

    def __str__(self):
        return "(" + ", ".join(_fmt(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class LexVec(Element):
    first: Fraction
    second: Fraction

    def __post_init__(self):
        object.__setattr__(self, "first", as_fraction(self.first))
        object.__setattr__(self, "second", as_fraction(self.second))

    space = LEX

    @property
    def coords(self) -> tuple:
        return (self.first, self.second)

    def __add__(self, other):
        self._check(other)
        return LexVec(self.first + other.first, self.second + other.second)

    def __neg__(self):
        return LexVec(-self.first, -self.second)

    def scale(self, t):
        t = as_fraction(t)
        return LexVec(t * self.first, t * self.second)

    def __le__(self, other) -> bool:
        self._check(other)
        return self.first < other.first or (
            self.first == other.first and self.second <= other.second
        )

    def join(self, other):
        return other if self <= other else self

    def meet(self, other):
        return self if self <= other else other

    def __str__(self):
        return f"lex({_fmt(self.first)}, {_fmt(self.second)})"


# ---------------------------------------------------------------------------
# Piecewise-linear functions on [0, 1]
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PwLin(Element):
    """Continuous piecewise-linear function given by its values at breakpoints.

    Stored in canonical form (no collinear interior breakpoints), so two
    instances are equal exactly when they are the same function.
    """

    breakpoints: tuple
    values: tuple

    space = PWLIN

    def __post_init__(self):
        ts = tuple(as_fraction(t) for t in self.breakpoints)
        vs = tuple(as_fraction(v) for v in self.values)
        if len(ts) != len(vs) or len(ts) < 2:
            raise ValueError("need matching breakpoints/values, at least two of each")
        if ts[0] != 0 or ts[-1] != 1:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        ts, vs = _canonical(ts, vs)
        object.__setattr__(self, "breakpoints", ts)
        object.__setattr__(self, "values", vs)

    @classmethod
    def constant(cls, c) -> PwLin:
        return cls((0, 1), (c, c))

    @classmethod
    def from_points(cls, points: dict) -> PwLin:
        items = sorted((as_fraction(t), as_fraction(v)) for t, v in points.items())
        return cls(tuple(t for t, _ in items), tuple(v for _, v in items))

    def __call__(self, t) -> Fraction:
        t = as_fraction(t)
        if not 0 <= t <= 1:
            raise ValueError("PwLin is defined on [0, 1]")
        ts, vs = self.breakpoints, self.values
        for i in range(len(ts) - 1):
            if ts[i] <= t <= ts[i + 1]:
                a, b = ts[i], ts[i + 1]
                return vs[i] + (vs[i + 1] - vs[i]) * (t - a) / (b - a)
        raise AssertionError("unreachable")

    def slopes(self) -> tuple:
        ts, vs = self.breakpoints, self.values
        return tuple((vs[i + 1] - vs[i]) / (ts[i + 1] - ts[i]) for i in range(len(ts) - 1))

    def _merged(self, other) -> tuple:
        self._check(other)
        return tuple(sorted(set(self.breakpoints) | set(other.breakpoints)))

    def __add__(self, other):
        ts = self._merged(other)
        return PwLin(ts, tuple(self(t) + other(t) for t in ts))

    def __neg__(self):
        return PwLin(self.breakpoints, tuple(-v for v in self.values))

    def scale(self, t):
        t = as_fraction(t)
        return PwLin(self.breakpoints, tuple(t * v for v in self.values))

    def __le__(self, other) -> bool:
        ts = self._merged(other)
        return all(self(t) <= other(t) for t in ts)

    def _envelope(self, other, pick) -> PwLin:
        ts = list(self._merged(other))
        # insert crossings of the two linear pieces on each merged interval
        out = []
        for a, b in zip(ts, ts[1:]):
            out.append(a)
            da, db = self(a) - other(a), self(b) - other(b)
            if da * db < 0:
                out.append(a + (b - a) * da / (da - db))
        out.append(ts[-1])
        return PwLin(tuple(out), tuple(pick(self(t), other(t)) for t in out))

    def join(self, other):
        return self._envelope(other, max)

    def meet(self, other):
        return self._envelope(other, min)

    def sup_norm(self) -> Fraction:
        return max(abs(v) for v in self.values)

    def __str__(self):
        body = ", ".join(f"{_fmt(t)}:{_fmt(v)}" for t, v in zip(self.breakpoints, self.values))
        return "pwlin{" + body + "}"


def _canonical(ts: tuple, vs: tuple) -> tuple[tuple, tuple]:
    keep_t, keep_v = [ts[0]], [vs[0]]
    for i in range(1, len(ts) - 1):
        s_left = (vs[i] - keep_v[-1]) / (ts[i] - keep_t[-1])
        s_right = (vs[i + 1] - vs[i]) / (ts[i + 1] - ts[i])
        if s_left != s_right:
            keep_t.append(ts[i])
            keep_v.append(vs[i])
    keep_t.append(ts[-1])
    keep_v.append(vs[-1])
    return tuple(keep_t), tuple(keep_v)


def pwlin_norm(f: PwLin) -> Fraction:
    """Sup norm plus the largest absolute slope."""
    return f.sup_norm() + max(abs(s) for s in f.slopes())


# ---------------------------------------------------------------------------
# Order intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Box:
    """Order interval ``[lower, upper]``; an empty box carries no bounds."""

    space: Space
    lower: Element | None = None
    upper: Element | None = None
    empty: bool = False

    def __post_init__(self):
        if self.empty:
            object.__setattr__(self, "lower", None)
            object.__setattr__(self, "upper", None)
        elif not self.lower <= self.upper:
            raise ValueError("nonempty box needs lower <= upper")

    @classmethod
    def make(cls, lower: Element, upper: Element) -> Box:
        lower._check(upper)
        if lower <= upper:
            return cls(lower.space, lower, upper)
        return cls(lower.space, empty=True)

    @classmethod
    def empty_of(cls, space: Space) -> Box:
        return cls(space, empty=True)

    def contains(self, x: Element) -> bool:
        if self.empty:
            x._check(self.space.zero())
            return False
        return self.lower <= x <= self.upper

    __contains__ = contains

    def issubset(self, other: Box) -> bool:
        if self.space != other.space:
            raise SpaceMismatchError(f"{self.space} vs {other.space}")
        if self.empty:
            return True
        if other.empty:
            return False
        return other.lower <= self.lower and self.upper <= other.upper

    def diameter(self) -> Element:
        """``sup{|x - y| : x, y in box}``; only computed in Q^d."""
        if self.space.kind != "qvec":
            raise UnsupportedSpaceError(f"box diameter is only supported in qvec, not {self.space}")
        if self.empty:
            return self.space.zero()
        return self.upper - self.lower

    def corners(self) -> list:
        if self.empty:
            return []
        if self.space.kind != "qvec":
            return [self.lower, self.upper]
        out = [()]
        for lo, hi in zip(self.lower.coords, self.upper.coords):
            out = [c + (v,) for c in out for v in ({lo, hi})]
        return [QVec(c) for c in out]

    def __str__(self):
        return "empty" if self.empty else f"[{self.lower}, {self.upper}]"


def box_make(lower: Element, upper: Element) -> Box:
    return Box.make(lower, upper)


def box_contains(box: Box, x: Element) -> bool:
    return box.contains(x)


def box_diameter(box: Box) -> Element:
    return box.diameter()


# ---------------------------------------------------------------------------
# Text forms
# ---------------------------------------------------------------------------

_RAT = r"[-+]?\d+(?:/\d+)?"


def parse_element(text: str, space: Space | None = None) -> Element:
    """Parse ``(p/q, ...)``, ``lex(a, b)`` or ``pwlin{t:v, ...}``.

    A bare rational is accepted for one-dimensional ``qvec`` spaces.
    """
    s = text.strip()
    if s.startswith("lex"):
        m = re.fullmatch(rf"lex\(\s*({_RAT})\s*,\s*({_RAT})\s*\)", s)
        if not m:
            raise ValueError(f"malformed lex element {text!r}")
        elem = LexVec(parse_rational(m[1]), parse_rational(m[2]))
    elif s.startswith("pwlin"):
        m = re.fullmatch(r"pwlin\{(.*)\}", s)
        if not m:
            raise ValueError(f"malformed pwlin element {text!r}")
        points = {}
        for item in m[1].split(","):
            t, _, v = item.partition(":")
            points[parse_rational(t)] = parse_rational(v)
        elem = PwLin.from_points(points)
    elif s.startswith("("):
        if not s.endswith(")"):
            raise ValueError(f"malformed vector {text!r}")
        elem = QVec(tuple(parse_rational(c) for c in s[1:-1].split(",")))
    elif re.fullmatch(_RAT, s):
        elem = QVec((parse_rational(s),))
    else:
        raise ValueError(f"cannot parse element {text!r}")
    if space is not None and elem.space != space:
        raise SpaceMismatchError(f"{text!r} is not an element of {space}")
    return elem
