"""Rough convergence: certificates, decisions, transformers and limit sets.

A net ``x_n`` converges roughly to ``x`` with roughness ``r >= θ`` when some
witness net ``y_n`` converging to θ satisfies ``|x_n - x| <= y_n + r`` for all
indices.  Certificates bundle the witness with the evidence that it
converges (the dominating net for order convergence).

In qvec under order convergence the statement is equivalent to
``limsup |x_n - x| <= r`` coordinatewise, so the rough limit set is an
order interval computed exactly from the cluster points of the net.

Transformers build the witnesses that the standard proofs use (sums of
witnesses over product indices, joins of witnesses, spliced witnesses);
they never search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .convergence import (
    ADDITIVE,
    FULL,
    LATTICE,
    LINEAR,
    ConvergenceStructure,
    Verdict,
    canonical_witness,
    conv_decide,
    conv_verify,
    order_conv,
)
from .errors import (
    CapabilityError,
    PreconditionError,
    RieszError,
    SpaceMismatchError,
    UnboundedError,
    UndecidableError,
    UnsupportedSpaceError,
)
from .exact import MINUS_INF, PLUS_INF, as_fraction, format_rational
from .lattice import Box, Element, QVec, Space
from .nets import (
    EventuallyPeriodic,
    FiniteList,
    Net,
    ProductNet,
    cluster_points,
    constant,
    coordinate_sup,
    forall_leq,
    is_decreasing,
    limsup_abs_dev,
    net_abs,
    net_add,
    net_join,
    net_linear_map,
    net_meet,
    net_pos,
    net_scale,
    net_sub,
    splice,
    subseq_arith,
    tail,
    tail_sup,
)

PRODUCT_HORIZON = 40


@dataclass(frozen=True)
class RcCertificate:
    """Claim ``|x_n - target| <= witness_n + roughness`` with ``witness -> θ`` in ``conv``.

    ``evidence`` is the dominating net for order convergence (None lets qvec
    use the canonical one) and is ignored by the other structures.
    """

    witness: Net
    evidence: Net | None
    roughness: Element
    target: Element
    conv: ConvergenceStructure

    def __post_init__(self):
        space = self.conv.space
        for name in ("roughness", "target"):
            if getattr(self, name).space != space:
                raise SpaceMismatchError(f"{name} is not in {space}")
        if self.witness.space != space:
            raise SpaceMismatchError(f"witness is not in {space}")
        if not space.zero() <= self.roughness:
            raise PreconditionError("roughness must be ≥ θ")

    @property
    def space(self) -> Space:
        return self.conv.space


def certificate(witness: Net, roughness: Element, target: Element, conv=None, evidence=None):
    """Convenience constructor defaulting to order convergence."""
    conv = conv or order_conv(target.space)
    return RcCertificate(witness, evidence, roughness, target, conv)


def _contains_finite(net: Net) -> int | None:
    if isinstance(net, ProductNet):
        hs = [h for h in (_contains_finite(net.left), _contains_finite(net.right)) if h]
        return min(hs) if hs else None
    return net.horizon if isinstance(net, FiniteList) else None


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


def verify_rc(net: Net, cert: RcCertificate, *, horizon: int = PRODUCT_HORIZON) -> Verdict:
    """Check a rough-convergence certificate for ``net``.

    Single-index nets of the rational classes are decided exactly.  Product
    nets are decided exactly when one side is eventually periodic or when the
    inequality separates into suprema; otherwise indices up to ``horizon`` in
    each factor are enumerated and the accept records that horizon.
    """
    if net.space != cert.space:
        raise SpaceMismatchError(f"net in {net.space}, certificate in {cert.space}")
    zero = cert.space.zero()
    try:
        ev = conv_verify(cert.conv, cert.witness, zero, cert.evidence)
        if not ev:
            return replace(ev, reason=f"witness: {ev.reason}")
        if net.is_product or cert.witness.is_product:
            dom = _product_domination(net, cert, horizon)
        else:
            dom = _single_domination(net, cert)
    except UndecidableError as exc:
        return Verdict.undecidable(str(exc))
    if not dom:
        return dom
    bounds = [h for h in (ev.horizon, dom.horizon) if h is not None]
    return Verdict.accept(horizon=min(bounds) if bounds else None)


def _single_domination(net: Net, cert: RcCertificate) -> Verdict:
    lhs = net_abs(net_sub(net, cert.target))
    rhs = net_add(cert.witness, cert.roughness)
    h = _contains_finite(net) or _contains_finite(cert.witness)
    res = forall_leq(lhs, rhs, bounded=h is not None)
    if not res:
        return Verdict.reject(f"inequality fails at n={res.index}", res.index)
    return Verdict.accept(horizon=h)


def _combine_fixed(op: str, fixed: Element, varying: Net, fixed_left: bool) -> Net:
    """Single-index slice of a product net with one index frozen."""
    if op == "add":
        return net_add(varying, fixed)
    if op == "join":
        return net_join(varying, fixed)
    if op == "meet":
        return net_meet(varying, fixed)
    if fixed_left:
        return net_scale(fixed.coords[0], varying)
    return net_scale(varying, constant(fixed))


def _as_product_witness(w: Net, space: Space) -> ProductNet:
    if isinstance(w, ProductNet):
        if w.op != "add":
            raise UndecidableError("product witnesses must be sums")
        return w
    if isinstance(w, EventuallyPeriodic) and len(set(w.values())) == 1:
        return ProductNet(w, constant(space.zero()), "add")
    raise UndecidableError("a product net needs a product-indexed witness")


def _product_domination(net: Net, cert: RcCertificate, horizon: int) -> Verdict:
    if not isinstance(net, ProductNet):
        raise UndecidableError("product witness for a single-index net")
    w = _as_product_witness(cert.witness, cert.space)
    x, r = cert.target, cert.roughness
    sides = (
        (net.left, w.left, net.right, w.right, True),
        (net.right, w.right, net.left, w.left, False),
    )
    for A, WA, B, WB, fixed_left in sides:
        if isinstance(A, EventuallyPeriodic) and isinstance(WA, EventuallyPeriodic):
            span = max(len(A.prefix), len(WA.prefix)) + math.lcm(len(A.cycle), len(WA.cycle))
            h = _contains_finite(B) or _contains_finite(WB)
            for g in range(1, span + 1):
                a, wa = A.term(g), WA.term(g)
                sl = _combine_fixed(net.op, a, B, fixed_left)
                res = forall_leq(net_abs(net_sub(sl, x)), net_add(WB, wa + r), bounded=h is not None)
                if not res:
                    idx = (g, res.index) if fixed_left else (res.index, g)
                    return Verdict.reject(f"inequality fails at index {idx}", idx)
            return Verdict.accept(horizon=h)
    if net.op == "add" and cert.space.kind == "qvec" and not _contains_finite(net):
        return _separable_sum(net, w, x, r, horizon)
    return _bounded_product(net, w, x, r, horizon)


def _separable_sum(net: ProductNet, w: ProductNet, x: QVec, r: QVec, horizon: int) -> Verdict:
    # |a + b - x| <= c + d + r for all pairs splits into two sums of suprema
    up_a = coordinate_sup(net_sub(net.left, w.left))
    up_b = coordinate_sup(net_sub(net.right, w.right))
    lo_a = coordinate_sup(net_sub(net_scale(-1, net.left), w.left))
    lo_b = coordinate_sup(net_sub(net_scale(-1, net.right), w.right))
    for i in range(x.dim):
        if up_a[i] + up_b[i] > x[i] + r[i] or lo_a[i] + lo_b[i] > r[i] - x[i]:
            found = _bounded_product(net, w, x, r, horizon)
            idx = found.index if not found else None
            return Verdict.reject(f"inequality fails in coordinate {i + 1}", idx)
    return Verdict.accept()


def _bounded_product(net: ProductNet, w: ProductNet, x, r, horizon: int) -> Verdict:
    h = min(horizon, _contains_finite(net) or horizon, _contains_finite(w) or horizon)
    for i in range(1, h + 1):
        for j in range(1, h + 1):
            if not (net.term((i, j)) - x).abs() <= w.term((i, j)) + r:
                return Verdict.reject(f"inequality fails at index {(i, j)}", (i, j))
    return Verdict.accept(horizon=h)


# ---------------------------------------------------------------------------
# Decision and limit sets (qvec, order convergence)
# ---------------------------------------------------------------------------


def _check_qvec(net: Net, *elems: Element) -> None:
    if net.space.kind != "qvec":
        raise UnsupportedSpaceError(
            f"rough limits are decided in qvec only; use verify_rc for {net.space}"
        )
    for e in elems:
        if e.space != net.space:
            raise SpaceMismatchError(f"{e.space} vs {net.space}")


def decide_rc(net: Net, x: Element, r: Element) -> bool:
    """``limsup |x_n - x| <= r`` coordinatewise (qvec, order convergence)."""
    _check_qvec(net, x, r)
    if not r.is_positive():
        raise PreconditionError("roughness must be ≥ θ")
    bound = limsup_abs_dev(net, x)
    return all(v <= ri for v, ri in zip(bound.limsup, r.coords))


@dataclass(frozen=True)
class RoughLimitSet:
    """The set of all points a net converges to with a given roughness."""

    box: Box
    basis: str
    reason: str = ""

    @property
    def empty(self) -> bool:
        return self.box.empty

    def __contains__(self, x: Element) -> bool:
        return self.box.contains(x)

    def diameter(self) -> Element:
        return self.box.diameter()

    def __str__(self):
        if self.box.empty:
            return "box empty" + (f" ({self.reason})" if self.reason else "")
        return f"box {self.box} diameter {self.box.diameter()}"


def limit_set(net: Net, r: Element) -> RoughLimitSet:
    """Exact rough limit set: ``[max L - r, min L + r]`` over cluster points L."""
    _check_qvec(net, r)
    if not r.is_positive():
        raise PreconditionError("roughness must be ≥ θ")
    points = cluster_points(net)
    dim = net.space.dim
    hi_pt = [max(p[i] for p in points) for i in range(dim)]
    lo_pt = [min(p[i] for p in points) for i in range(dim)]
    basis = f"limsup criterion over {len(points)} cluster point(s)"
    if any(v in (PLUS_INF, MINUS_INF) for v in hi_pt + lo_pt):
        return RoughLimitSet(Box.empty_of(net.space), basis, "unbounded")
    lower = QVec(tuple(h - ri for h, ri in zip(hi_pt, r.coords)))
    upper = QVec(tuple(lo + ri for lo, ri in zip(lo_pt, r.coords)))
    box = Box.make(lower, upper)
    return RoughLimitSet(box, basis, "bounds cross" if box.empty else "")


def canonical_certificate(net: Net, x: Element, r: Element) -> RcCertificate:
    """Certificate with the least decreasing witness ``(sup_{m>=n}|x_m - x| - r)^+``."""
    _check_qvec(net, x, r)
    w = net_pos(net_sub(tail_sup(net_abs(net_sub(net, x))), r))
    return RcCertificate(w, w, r, x, order_conv(net.space))


# ---------------------------------------------------------------------------
# Certificate transformers
# ---------------------------------------------------------------------------


def _evidence(cert: RcCertificate) -> Net | None:
    """Dominating net for the witness, made explicit where possible."""
    if cert.evidence is not None or cert.conv.name != "order":
        return cert.evidence if cert.conv.name == "order" else cert.witness
    if cert.space.kind == "qvec" and not cert.witness.is_product:
        return canonical_witness(cert.witness, cert.space.zero())
    return None


def _same_conv(*certs: RcCertificate) -> ConvergenceStructure:
    convs = {c.conv for c in certs}
    if len(convs) != 1:
        raise SpaceMismatchError("certificates use different convergence structures")
    return convs.pop()


def _product_evidence(a: RcCertificate, b: RcCertificate) -> Net | None:
    ea, eb = _evidence(a), _evidence(b)
    if a.conv.name != "order" or ea is None or eb is None:
        return None
    return ProductNet(ea, eb, "add")


def cert_sum(c1: RcCertificate, c2: RcCertificate) -> RcCertificate:
    """Certificate for ``(x_a + y_b)`` over pairs, roughness ``r + s``."""
    conv = _same_conv(c1, c2)
    conv.require(LINEAR, what="summing certificates")
    return RcCertificate(
        ProductNet(c1.witness, c2.witness, "add"),
        _product_evidence(c1, c2),
        c1.roughness + c2.roughness,
        c1.target + c2.target,
        conv,
    )


def scalar_limit(t_net: Net) -> Fraction:
    points = cluster_points(t_net)
    if len(points) != 1 or not math.isfinite(points[0][0]):
        raise PreconditionError("the scalar net does not converge")
    return points[0][0]


def cert_scale(cert: RcCertificate, t_net: Net, rho=None) -> RcCertificate:
    """Certificate for ``(t_g x_a)`` over pairs, target ``t x``, roughness ``m r``.

    ``m = |t| + rho`` must bound every ``|t_g|``; by default ``rho`` is the
    least such value.
    """
    cert.conv.require(LINEAR, what="scaling certificates")
    if t_net.space != Space("qvec", 1):
        raise SpaceMismatchError("scalars form a qvec 1 net")
    t = scalar_limit(t_net)
    abs_t = net_abs(t_net)
    if rho is None:
        sup = coordinate_sup(abs_t)[0]
        rho = max(Fraction(0), sup - abs(t))
    rho = as_fraction(rho)
    m = abs(t) + rho
    ok = forall_leq(abs_t, constant(QVec((m,))))
    if not ok:
        raise PreconditionError(f"|t_n| exceeds |t| + rho = {m} at n={ok.index}", index=ok.index)
    x_abs = cert.target.abs()
    dev = net_abs(net_sub(t_net, QVec((t,))))
    dev_sup = tail_sup(dev)
    left = net_scale(dev, constant(x_abs))
    left_ev = net_scale(dev_sup, constant(x_abs))
    if cert.conv.name != "order":
        left = left_ev
    right = net_scale(m, cert.witness)
    ev = _evidence(cert)
    evidence = None
    if cert.conv.name == "order" and ev is not None:
        evidence = ProductNet(left_ev, net_scale(m, ev), "add")
    return RcCertificate(
        ProductNet(left, right, "add"),
        evidence,
        cert.roughness.scale(m),
        cert.target.scale(t),
        cert.conv,
    )


def cert_from_c(
    net: Net, x: Element, r: Element, conv: ConvergenceStructure, evidence: Net | None = None
) -> RcCertificate:
    """Promote ``net -> x`` in ``conv`` to rough convergence with any ``r >= θ``.

    The witness is ``|x_n - x|``.  For a linear lattice convergence the
    original evidence carries over; otherwise the witness's own convergence
    is checked directly.
    """
    v = conv_verify(conv, net, x, evidence)
    if not v:
        raise PreconditionError(f"the net does not converge: {v}")
    dev = net_abs(net_sub(net, x))
    if conv.has(LINEAR, LATTICE):
        return RcCertificate(dev, evidence, r, x, conv)
    direct = conv_verify(conv, dev, conv.space.zero(), None if conv.name != "order" else evidence)
    if not direct:
        raise CapabilityError(
            f"{conv} is not a linear lattice convergence and |x_n - x| does not converge: {direct}"
        )
    return RcCertificate(dev, evidence, r, x, conv)


def cert_perturb(cert: RcCertificate, z_net: Net, x_net: Net, t: Element) -> RcCertificate:
    """From ``z -> x`` with roughness r and ``|x_n - z_n| <= t``: ``x_n`` with roughness r + t."""
    ok = forall_leq(net_abs(net_sub(x_net, z_net)), constant(t))
    if not ok:
        raise PreconditionError(f"perturbation exceeds {t} at n={ok.index}", index=ok.index)
    return replace(cert, roughness=cert.roughness + t)


def _lattice_pair(c1: RcCertificate, c2: RcCertificate, target: Element) -> RcCertificate:
    conv = _same_conv(c1, c2)
    conv.require(ADDITIVE, what="lattice operations over pairs")
    return RcCertificate(
        ProductNet(c1.witness, c2.witness, "add"),
        _product_evidence(c1, c2),
        c1.roughness + c2.roughness,
        target,
        conv,
    )


def cert_join(c1: RcCertificate, c2: RcCertificate) -> RcCertificate:
    """Certificate for ``(x_a ∨ y_b)`` over pairs, target ``x ∨ y``, roughness ``r + t``."""
    return _lattice_pair(c1, c2, c1.target.join(c2.target))


def cert_meet(c1: RcCertificate, c2: RcCertificate) -> RcCertificate:
    return _lattice_pair(c1, c2, c1.target.meet(c2.target))


def cert_abs(cert: RcCertificate) -> RcCertificate:
    """``||x_n| - |x|| <= |x_n - x|``: same witness works for ``|x_n| -> |x|``."""
    return replace(cert, target=cert.target.abs())


def _same_witness(cert: RcCertificate, target: Element, what: str) -> RcCertificate:
    cert.conv.require(LINEAR, what=what)
    return replace(cert, target=target)


def cert_pos(cert: RcCertificate) -> RcCertificate:
    return _same_witness(cert, cert.target.pos(), "positive parts")


def cert_neg(cert: RcCertificate) -> RcCertificate:
    return _same_witness(cert, cert.target.neg_part(), "negative parts")


def cert_join_const(cert: RcCertificate, y: Element) -> RcCertificate:
    return _same_witness(cert, cert.target.join(y), "joins with a constant")


def cert_meet_const(cert: RcCertificate, y: Element) -> RcCertificate:
    return _same_witness(cert, cert.target.meet(y), "meets with a constant")


def cert_interleave(c1: RcCertificate, c2: RcCertificate) -> RcCertificate:
    """Certificate for any net taking each term from one of two nets.

    Both certificates must share target and roughness; the witness is
    ``u_n ∨ v_n``.
    """
    conv = _same_conv(c1, c2)
    conv.require(FULL, LATTICE, what="interleaving")
    if c1.target != c2.target or c1.roughness != c2.roughness:
        raise PreconditionError("interleaved certificates need the same target and roughness")
    e1, e2 = _evidence(c1), _evidence(c2)
    evidence = net_join(e1, e2) if e1 is not None and e2 is not None else None
    return RcCertificate(net_join(c1.witness, c2.witness), evidence, c1.roughness, c1.target, conv)


def cert_subnet(cert: RcCertificate, stride: int, offset: int = 0) -> RcCertificate:
    """Certificate for ``n -> x_{stride n + offset}``."""
    ev = _evidence(cert)
    return replace(
        cert,
        witness=subseq_arith(cert.witness, stride, offset),
        evidence=subseq_arith(ev, stride, offset) if ev is not None else None,
    )


def _running_max(prefix: list, first_rest: Element) -> tuple:
    out, acc = [], first_rest
    for e in reversed(prefix):
        acc = e.join(acc)
        out.append(acc)
    return tuple(reversed(out))


def cert_from_tail(net: Net, n0: int, tail_cert: RcCertificate) -> RcCertificate:
    """Extend a certificate for ``tail(net, n0)`` to the whole net.

    The witness is ``|x_n - x|`` before ``n0`` and the tail witness after.
    Its dominating net replaces the prefix by running maxima so that it is
    still decreasing; for monotone convergence that dominating net is the
    witness itself.
    """
    v = verify_rc(tail(net, n0), tail_cert)
    if not v:
        raise PreconditionError(f"tail certificate does not hold: {v}")
    x = tail_cert.target
    head = [(net.term(n) - x).abs() for n in range(1, n0)]
    ev = _evidence(tail_cert)
    if tail_cert.conv.name == "order":
        if ev is None:
            raise UndecidableError("order witness without a dominating net")
        witness = splice(head, tail_cert.witness)
        evidence = splice(_running_max(head, ev.term(1)), ev) if head else ev
        return replace(tail_cert, witness=witness, evidence=evidence)
    w = tail_cert.witness
    witness = splice(_running_max(head, w.term(1)), w) if head else w
    return replace(tail_cert, witness=witness, evidence=None)


# ---------------------------------------------------------------------------
# Limit-set theorems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Inclusion:
    """Outcome of an inclusion test; ``counterexample`` lies in the left set only."""

    included: bool
    counterexample: Element | None = None

    def __bool__(self):
        return self.included

    def __str__(self):
        return "included" if self.included else f"counterexample {self.counterexample}"


def _box_inclusion(a: Box, b: Box) -> Inclusion:
    if a.issubset(b):
        return Inclusion(True)
    witness = next(c for c in a.corners() if not b.contains(c))
    return Inclusion(False, witness)


def inclusion_check(net: Net, r1: Element, r2: Element) -> Inclusion:
    """Larger roughness gives a larger limit set."""
    if not r1 <= r2:
        raise PreconditionError(f"need r1 <= r2, got {r1} and {r2}")
    return _box_inclusion(limit_set(net, r1).box, limit_set(net, r2).box)


@dataclass(frozen=True)
class DiameterReport:
    diameter: Element
    bound: Element
    bound_ok: bool
    tight: bool

    def __str__(self):
        verdict = "within" if self.bound_ok else "EXCEEDS"
        return f"diameter {self.diameter} {verdict} {self.bound}" + (" (tight)" if self.tight else "")


def diameter_check(net: Net, r: Element) -> DiameterReport:
    """The limit set has diameter at most ``2r``."""
    d = limit_set(net, r).diameter()
    bound = r.scale(2)
    return DiameterReport(d, bound, d <= bound, d == bound)


def subnet_inclusion_check(net: Net, stride: int, offset: int, r: Element) -> Inclusion:
    """Limit sets only grow when passing to a subnet."""
    sub = subseq_arith(net, stride, offset)
    return _box_inclusion(limit_set(net, r).box, limit_set(sub, r).box)


@dataclass(frozen=True)
class Nonempty:
    roughness: Element
    member: Element
    verified: bool


def bounded_to_nonempty(net: Net) -> Nonempty:
    """For a bounded net, ``r = sup |x_n|`` makes θ a rough limit."""
    _check_qvec(net)
    sup = coordinate_sup(net_abs(net))
    if any(v == PLUS_INF for v in sup):
        raise UnboundedError("the net is not order bounded, so no roughness works")
    r = QVec(tuple(sup))
    zero = net.space.zero()
    return Nonempty(r, zero, decide_rc(net, zero, r))


def nonempty_to_bounded(net: Net, cert: RcCertificate) -> Element:
    """Order bound ``y_1 + r + |x|`` from a certificate with decreasing witness."""
    v = verify_rc(net, cert)
    if not v:
        raise PreconditionError(f"certificate does not hold: {v}")
    dec = is_decreasing(cert.witness)
    if not dec:
        raise PreconditionError(f"witness is not decreasing (step {dec.index})", index=dec.index)
    b = cert.witness.term(1) + cert.roughness + cert.target.abs()
    ok = forall_leq(net_abs(net), constant(b))
    if not ok:
        raise RieszError(f"internal inconsistency: |x_n| exceeds {b} at n={ok.index}")
    return b


def convex_combine(net: Net, w1: Element, r1: Element, w2: Element, r2: Element, gamma) -> bool:
    """Membership of ``g w1 + (1-g) w2`` in the limit set for ``g r1 + (1-g) r2``."""
    gamma = as_fraction(gamma)
    if not 0 <= gamma <= 1:
        raise PreconditionError(f"gamma must lie in [0, 1], got {gamma}")
    if not decide_rc(net, w1, r1):
        raise PreconditionError(f"{w1} is not a limit with roughness {r1}")
    if not decide_rc(net, w2, r2):
        raise PreconditionError(f"{w2} is not a limit with roughness {r2}")
    point = w1.scale(gamma) + w2.scale(1 - gamma)
    rough = r1.scale(gamma) + r2.scale(1 - gamma)
    return decide_rc(net, point, rough)


@dataclass(frozen=True)
class Closedness:
    limit: Element
    member: bool

    def __bool__(self):
        return self.member

    def __str__(self):
        return f"limit {self.limit} {'is' if self.member else 'is NOT'} a member"


def closedness_check(net: Net, r: Element, approach: Net) -> Closedness:
    """A limit of rough limit points is itself a rough limit point."""
    ls = limit_set(net, r)
    if ls.empty:
        raise PreconditionError("the limit set is empty, so nothing can approach it")
    inside = forall_leq(constant(ls.box.lower), approach)
    if inside:
        inside = forall_leq(approach, constant(ls.box.upper))
    if not inside:
        raise PreconditionError(f"approach term {inside.index} is not a member", index=inside.index)
    (point,) = cluster_points(approach)
    if any(not math.isfinite(v) for v in point):
        raise PreconditionError("the approach net diverges")
    z = QVec(point)
    if not conv_decide(order_conv(net.space), approach, z):
        raise PreconditionError("the approach net does not order converge")
    return Closedness(z, decide_rc(net, z, r))


def bounded_set_membership(net: Net, e: Element, x: Element, r: Element) -> Verdict:
    """If every term and ``x`` lie in ``[-e, e]`` and ``r >= 2e``, then ``x`` is a rough limit."""
    ok = forall_leq(net_abs(net), constant(e))
    if not ok:
        raise PreconditionError(f"|x_n| exceeds {e} at n={ok.index}", index=ok.index)
    if not x.abs() <= e:
        raise PreconditionError(f"|{x}| exceeds {e}")
    if not e.scale(2) <= r:
        raise PreconditionError(f"roughness {r} is below 2e = {e.scale(2)}")
    zero = net.space.zero()
    return verify_rc(net, RcCertificate(constant(zero), constant(zero), r, x, order_conv(net.space)))


def o_limit_membership(net: Net, x: Element, r: Element, w: Net | None = None) -> Verdict:
    """An order limit is a rough limit for every roughness, with the same witness."""
    conv = order_conv(net.space)
    v = conv_verify(conv, net, x, w)
    if not v:
        raise PreconditionError(f"net does not order converge to {x}: {v}")
    if w is None:
        w = canonical_witness(net, x)
    return verify_rc(net, RcCertificate(w, w, r, x, conv))


@dataclass(frozen=True)
class SetComparison:
    equal: bool
    difference: Element | None = None

    def __bool__(self):
        return self.equal

    def __str__(self):
        return "equal" if self.equal else f"differ at {self.difference}"


def equal_limit_sets_check(x_net: Net, w_net: Net, r: Element) -> SetComparison:
    """Nets whose difference order converges to θ share their limit sets."""
    dev = net_abs(net_sub(x_net, w_net))
    if not conv_decide(order_conv(x_net.space), dev, x_net.space.zero()):
        raise PreconditionError("|x_n - w_n| does not converge to θ")
    a, b = limit_set(x_net, r).box, limit_set(w_net, r).box
    if a == b:
        return SetComparison(True)
    left = _box_inclusion(a, b)
    if not left:
        return SetComparison(False, left.counterexample)
    return SetComparison(False, _box_inclusion(b, a).counterexample)


def operator_image_check(matrix, net: Net, x: Element, r: Element) -> bool:
    """A positive matrix maps rough limits to rough limits of the image net."""
    T = [[as_fraction(v) for v in row] for row in matrix]
    if any(v < 0 for row in T for v in row):
        raise PreconditionError("the operator is not positive (negative entry)")
    if not decide_rc(net, x, r):
        raise PreconditionError(f"{x} is not a limit with roughness {r}")

    def apply(v: QVec) -> QVec:
        return QVec(tuple(sum((c * a for c, a in zip(row, v.coords)), Fraction(0)) for row in T))

    return decide_rc(net_linear_map(T, net), apply(x), apply(r))


def shifted_c_check(net: Net, cert: RcCertificate) -> Verdict:
    """If ``x + r <= x_n`` for every n, the net converges outright to ``x + r``."""
    cert.conv.require(FULL, LATTICE, what="the shifted limit")
    shifted = cert.target + cert.roughness
    ok = forall_leq(constant(shifted), net)
    if not ok:
        raise PreconditionError(f"x + r exceeds x_n at n={ok.index}", index=ok.index)
    v = verify_rc(net, cert)
    if not v:
        raise PreconditionError(f"certificate does not hold: {v}")
    # θ <= x_n - x - r <= z_n, and z_n is dominated by the evidence net
    return conv_verify(cert.conv, net, shifted, _evidence(cert))


@dataclass(frozen=True)
class ConeReport:
    closed: bool
    limit_set: RoughLimitSet
    counterexample: Element | None

    def __str__(self):
        if self.closed:
            return f"cone closed: limit set of the θ net is {self.limit_set.box}"
        return f"cone not closed: {self.counterexample} is a limit of the θ net outside E+"


def cone_closedness_demo(r: Element) -> ConeReport:
    """The constant θ net has ``-r`` as a rough limit; with ``r > θ`` that leaves the cone."""
    if r.space.kind != "qvec":
        raise UnsupportedSpaceError("the demonstration runs in qvec")
    zero = r.space.zero()
    ls = limit_set(constant(zero), r)
    if r == zero:
        return ConeReport(True, ls, None)
    candidate = -r
    if candidate not in ls or candidate.is_positive():
        raise RieszError("internal inconsistency: -r should be an outside member")
    return ConeReport(False, ls, candidate)


def format_point(p) -> str:
    return "(" + ", ".join(format_rational(v) for v in p) + ")"
