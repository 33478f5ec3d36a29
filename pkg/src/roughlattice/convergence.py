"""Concrete convergence structures and their verdicts.

Three structures are provided: order convergence (qvec and lex), monotone
decreasing convergence (qvec and lex) and norm convergence for pwlin.  Each
declares which theorem hypotheses it satisfies (``linear``, ``full``,
``lattice``, ``additive``) so that certificate transformers can refuse
silently invalid uses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import (
    PreconditionError,
    SpaceMismatchError,
    UnboundedError,
    UndecidableError,
    UnsupportedSpaceError,
)
from .exact import RationalFunction, rf_limit
from .lattice import PWLIN, Element, PwLin, Space, pwlin_norm
from .nets import (
    EventuallyPeriodic,
    FiniteList,
    Net,
    ProductNet,
    forall_leq,
    infimum,
    is_decreasing,
    limsup_abs_dev,
    net_abs,
    net_sub,
    tail_sup,
)

LINEAR, FULL, LATTICE, ADDITIVE = "linear", "full", "lattice", "additive"
VERIFY, DECIDE = "verify", "decide"


@dataclass(frozen=True)
class ConvergenceStructure:
    name: str
    space: Space
    capabilities: frozenset

    def has(self, *caps: str) -> bool:
        return all(c in self.capabilities for c in caps)

    def require(self, *caps: str, what: str = "this construction") -> None:
        from .errors import CapabilityError

        missing = [c for c in caps if c not in self.capabilities]
        if missing:
            raise CapabilityError(f"{what} needs a {'/'.join(missing)} convergence; {self} is not")

    def __str__(self):
        return f"{self.name} convergence on {self.space}"


def order_conv(space: Space) -> ConvergenceStructure:
    if space.kind not in ("qvec", "lex"):
        raise UnsupportedSpaceError(f"order convergence is offered on qvec and lex, not {space}")
    caps = {LINEAR, FULL, LATTICE, ADDITIVE, VERIFY}
    if space.kind == "qvec":
        caps.add(DECIDE)
    return ConvergenceStructure("order", space, frozenset(caps))


def monotone_conv(space: Space) -> ConvergenceStructure:
    if space.kind not in ("qvec", "lex"):
        raise UnsupportedSpaceError(f"monotone convergence is offered on qvec and lex, not {space}")
    return ConvergenceStructure("monotone", space, frozenset({ADDITIVE, VERIFY}))


def pwlin_norm_conv() -> ConvergenceStructure:
    return ConvergenceStructure("pwlin-norm", PWLIN, frozenset({LINEAR, ADDITIVE, VERIFY}))


def convergence(name: str, space: Space) -> ConvergenceStructure:
    """Look a structure up by its scenario-file name."""
    makers = {"order": order_conv, "monotone": monotone_conv}
    if name == "pwlin-norm":
        if space != PWLIN:
            raise UnsupportedSpaceError("pwlin-norm convergence lives on pwlin")
        return pwlin_norm_conv()
    if name not in makers:
        raise ValueError(f"unknown convergence {name!r}")
    return makers[name](space)


@dataclass(frozen=True)
class Verdict:
    """``accept``, ``reject`` or ``undecidable``.

    An accept carrying ``horizon`` was established for indices up to that
    horizon only.
    """

    status: str
    reason: str = ""
    index: object = None
    horizon: int | None = None

    @classmethod
    def accept(cls, horizon: int | None = None) -> Verdict:
        return cls("accept", horizon=horizon)

    @classmethod
    def reject(cls, reason: str, index=None) -> Verdict:
        return cls("reject", reason, index)

    @classmethod
    def undecidable(cls, reason: str) -> Verdict:
        return cls("undecidable", reason)

    @property
    def accepted(self) -> bool:
        return self.status == "accept"

    def __bool__(self):
        return self.accepted

    def __str__(self):
        if self.status == "accept":
            return "accept" if self.horizon is None else f"accept (up to n={self.horizon})"
        return f"{self.status}: {self.reason}"


def _finite(net: Net) -> bool:
    if isinstance(net, ProductNet):
        return _finite(net.left) or _finite(net.right)
    return isinstance(net, FiniteList)


def canonical_witness(net: Net, x: Element) -> Net:
    """Least decreasing dominator of ``|x_n - x|``: its tail suprema (qvec)."""
    return tail_sup(net_abs(net_sub(net, x)))


def conv_verify(c: ConvergenceStructure, net: Net, x: Element, w: Net | None = None) -> Verdict:
    """Check ``net -> x`` in ``c``; for order convergence ``w`` is the dominating net."""
    if net.space != c.space or x.space != c.space:
        raise SpaceMismatchError(f"{c} cannot judge a {net.space} net with limit in {x.space}")
    try:
        if c.name == "monotone":
            return _verify_monotone(net, x)
        if c.name == "order":
            return _verify_order(c, net, x, w)
        return _verify_pwlin(net, x)
    except UndecidableError as exc:
        return Verdict.undecidable(str(exc))


def _verify_monotone(net: Net, x: Element) -> Verdict:
    dec = is_decreasing(net)
    if not dec:
        return Verdict.reject(f"net is not decreasing (step {dec.index})", dec.index)
    inf = infimum(net)
    if not inf.exists:
        return Verdict.reject("infimum does not exist")
    if inf.value != x:
        return Verdict.reject(f"infimum is {inf.value}, not {x}")
    return Verdict.accept()


def _verify_order(c, net: Net, x: Element, w: Net | None) -> Verdict:
    zero = c.space.zero()
    if isinstance(net, ProductNet):
        # a product sum converges to x when each factor converges and the
        # limits add up; witness sums are checked factor by factor against θ
        if net.op != "add" or x != zero:
            raise UndecidableError("order convergence of product nets: only sums tending to θ")
        wl = wr = None
        if w is not None:
            if not (isinstance(w, ProductNet) and w.op == "add"):
                raise UndecidableError("product witnesses must be product sums")
            wl, wr = w.left, w.right
        for part, ev in ((net.left, wl), (net.right, wr)):
            v = _verify_order(c, part, zero, ev)
            if not v:
                return Verdict(v.status, f"product factor: {v.reason}", v.index, v.horizon)
        return Verdict.accept()
    if w is None:
        if c.space.kind != "qvec":
            raise PreconditionError("order convergence outside qvec needs a dominating net")
        if isinstance(net, FiniteList):
            raise UndecidableError("FiniteList: limits are not determined")
        try:
            w = canonical_witness(net, x)
        except UnboundedError:
            return Verdict.reject("deviations are unbounded")
    if w.space != c.space:
        raise SpaceMismatchError("dominating net lives in another space")
    if isinstance(w, FiniteList):
        raise UndecidableError("FiniteList: a dominating net must be infinite")
    dec = is_decreasing(w)
    if not dec:
        return Verdict.reject(f"dominating net is not decreasing (step {dec.index})", dec.index)
    inf = infimum(w)
    if not inf.exists or inf.value != zero:
        return Verdict.reject("dominating net does not decrease to θ")
    bounded = _finite(net)
    dom = forall_leq(net_abs(net_sub(net, x)), w, bounded=bounded)
    if not dom:
        return Verdict.reject(f"domination fails at n={dom.index}", dom.index)
    return Verdict.accept(horizon=net.horizon if bounded else None)


def _verify_pwlin(net: Net, x: Element) -> Verdict:
    if isinstance(net, EventuallyPeriodic):
        for k, e in enumerate(net.cycle):
            if e != x:
                return Verdict.reject(
                    f"cycle term at n={len(net.prefix) + k + 1} stays at norm distance "
                    f"{pwlin_norm(e - x)}",
                    len(net.prefix) + k + 1,
                )
        return Verdict.accept()
    raise UndecidableError(f"{net.kind}: norm limits of pwlin nets need a formula check")


def conv_decide(c: ConvergenceStructure, net: Net, x: Element) -> bool:
    """Class-based decision of order convergence in qvec."""
    if not c.has(DECIDE):
        raise UnsupportedSpaceError(f"{c} offers verification only")
    bound = limsup_abs_dev(net, x)
    return all(v == 0 for v in bound.limsup)


# -- norm convergence on pwlin, bounded horizon --------------------------------


@dataclass(frozen=True)
class ConsistentUpTo:
    horizon: int

    def __bool__(self):
        return True

    def __str__(self):
        return f"consistent up to n={self.horizon}"


@dataclass(frozen=True)
class Inconsistent:
    index: int
    expected: object
    actual: object

    def __bool__(self):
        return False

    def __str__(self):
        return f"inconsistent at n={self.index}: norm {self.actual}, formula gives {self.expected}"


def pwlin_norm_conv_check(
    nets: Callable[[int], PwLin] | Sequence[PwLin] | FiniteList,
    x: PwLin,
    formula: RationalFunction,
    horizon: int,
) -> ConsistentUpTo | Inconsistent:
    """Check ``||f_n - x|| == formula(n)`` exactly for n = 1..horizon."""
    if isinstance(nets, FiniteList):
        get = nets.term
    elif callable(nets):
        get = nets
    else:
        get = lambda n: nets[n - 1]  # noqa: E731
    for n in range(1, horizon + 1):
        got = pwlin_norm(get(n) - x)
        want = formula(n)
        if got != want:
            return Inconsistent(n, want, got)
    return ConsistentUpTo(horizon)


def norm_converges(formula: RationalFunction) -> bool:
    """Whether a norm-distance formula tends to 0."""
    return rf_limit(formula) == 0


def fullification_verify(c: ConvergenceStructure, net: Net, x: Element, cert) -> Verdict:
    """Fullification convergence: a rough certificate with zero roughness."""
    from .rough import RcCertificate, verify_rc

    if cert.roughness != c.space.zero():
        raise PreconditionError("fullification certificates carry zero roughness")
    if cert.target != x:
        raise PreconditionError(f"certificate targets {cert.target}, not {x}")
    return verify_rc(net, RcCertificate(cert.witness, cert.evidence, cert.roughness, x, c))
