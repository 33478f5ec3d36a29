"""Symbolic sequences (nets indexed by N, plus N x N product nets).

Every infinite single-index net over ``qvec`` or ``lex`` reduces to one
normal form, :class:`PeriodicRational`: a finite prefix of explicit terms
followed by a cycle of vectors of rational functions, evaluated at the
absolute index ``n``.  The class is closed under every combinator offered
here (sums, scaling, lattice operations, tails, arithmetic subsequences,
interleaving), and on it the universal statements "for all n" as well as
limits, suprema, monotonicity and tail suprema are exactly decidable.

Lattice operations on rational terms use the fact that the difference of
two rational functions has constant sign past its root bound; terms before
that bound are materialized into the prefix.

``FiniteList`` is the escape hatch for bounded-horizon evidence (for
example families of piecewise-linear functions); decision procedures refuse
it unless explicitly asked for a bounded check.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable

from .errors import (
    PreconditionError,
    SpaceMismatchError,
    UnboundedError,
    UndecidableError,
    UnsupportedCombinationError,
    UnsupportedSpaceError,
)
from .exact import (
    MINUS_INF,
    PLUS_INF,
    Extended,
    FalseAt,
    RationalFunction,
    as_fraction,
    eventual_sign,
    first_negative,
    integer_zeros,
    parse_rf,
    rf_limit,
    rf_sup,
)
from .lattice import Element, QVec, Space

RF = RationalFunction


class Net(ABC):
    """A net; single-index unless it is a :class:`ProductNet`."""

    kind: str = "Net"

    @property
    @abstractmethod
    def space(self) -> Space: ...

    @abstractmethod
    def term(self, n) -> Element: ...

    def terms(self, stop: int, start: int = 1) -> list:
        return [self.term(n) for n in range(start, stop + 1)]

    @property
    def is_product(self) -> bool:
        return False


def _check_index(n) -> None:
    if not isinstance(n, int) or n < 1:
        raise PreconditionError(f"net indices start at 1, got {n!r}", index=n)


def _same_space(*elems) -> Space:
    spaces = {e.space for e in elems}
    if len(spaces) != 1:
        raise SpaceMismatchError(f"terms from several spaces: {sorted(map(str, spaces))}")
    return spaces.pop()


# ---------------------------------------------------------------------------
# Net kinds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteList(Net):
    """The first ``horizon`` terms of a net; admissible for bounded checks only."""

    items: tuple
    kind = "FiniteList"

    def __post_init__(self):
        if not self.items:
            raise ValueError("FiniteList needs at least one term")
        object.__setattr__(self, "items", tuple(self.items))
        _same_space(*self.items)

    @classmethod
    def from_function(cls, fn: Callable[[int], Element], horizon: int) -> FiniteList:
        return cls(tuple(fn(n) for n in range(1, horizon + 1)))

    @property
    def space(self) -> Space:
        return self.items[0].space

    @property
    def horizon(self) -> int:
        return len(self.items)

    def term(self, n) -> Element:
        _check_index(n)
        if n > len(self.items):
            raise PreconditionError(f"index {n} beyond horizon {len(self.items)}", index=n)
        return self.items[n - 1]


@dataclass(frozen=True)
class EventuallyPeriodic(Net):
    prefix: tuple
    cycle: tuple
    kind = "EventuallyPeriodic"

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise ValueError("cycle must be nonempty")
        _same_space(*self.prefix, *self.cycle)

    @property
    def space(self) -> Space:
        return self.cycle[0].space

    def term(self, n) -> Element:
        _check_index(n)
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.cycle[(n - len(self.prefix) - 1) % len(self.cycle)]

    def values(self) -> tuple:
        """All values the net takes."""
        return self.prefix + self.cycle


@dataclass(frozen=True)
class RationalTerm(Net):
    """Coordinates given by rational functions of the index."""

    space_: Space
    coords: tuple
    kind = "RationalTerm"

    def __post_init__(self):
        coords = tuple(parse_rf(c) if isinstance(c, str) else c for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if self.space_.coordinate_count != len(coords):
            raise ValueError(
                f"{self.space_} needs {self.space_.coordinate_count} coordinates, got {len(coords)}"
            )
        if any(f.valid_from > 1 for f in coords):
            raise ValueError("RationalTerm coordinates must be valid from n = 1")

    @property
    def space(self) -> Space:
        return self.space_

    def term(self, n) -> Element:
        _check_index(n)
        return self.space_.from_coords(tuple(f(n) for f in self.coords))


@dataclass(frozen=True)
class PeriodicPlusRational(Net):
    """``cycle[(n-1) mod k] + decay(n)``."""

    cycle: tuple
    decay: tuple
    kind = "PeriodicPlusRational"

    def __post_init__(self):
        object.__setattr__(self, "cycle", tuple(self.cycle))
        decay = tuple(parse_rf(c) if isinstance(c, str) else c for c in self.decay)
        object.__setattr__(self, "decay", decay)
        if not self.cycle:
            raise ValueError("cycle must be nonempty")
        space = _same_space(*self.cycle)
        if space.coordinate_count != len(decay):
            raise ValueError("decay must have one rational function per coordinate")

    @property
    def space(self) -> Space:
        return self.cycle[0].space

    def term(self, n) -> Element:
        _check_index(n)
        c = self.cycle[(n - 1) % len(self.cycle)]
        return c + self.space.from_coords(tuple(f(n) for f in self.decay))


@dataclass(frozen=True)
class Spliced(Net):
    """Explicit ``prefix`` followed by ``rest`` re-indexed from 1."""

    prefix: tuple
    rest: Net
    kind = "Spliced"

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        if self.prefix:
            if _same_space(*self.prefix) != self.rest.space:
                raise SpaceMismatchError("prefix and rest live in different spaces")

    @property
    def space(self) -> Space:
        return self.rest.space

    def term(self, n) -> Element:
        _check_index(n)
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.rest.term(n - len(self.prefix))


@dataclass(frozen=True)
class Interleaved(Net):
    """``a_n`` where ``mask[(n-1) mod len(mask)]`` is true, else ``b_n``."""

    a: Net
    b: Net
    mask: tuple
    kind = "Interleaved"

    def __post_init__(self):
        object.__setattr__(self, "mask", tuple(bool(m) for m in self.mask))
        if not self.mask:
            raise ValueError("mask must be nonempty")
        if self.a.space != self.b.space:
            raise SpaceMismatchError("interleaved nets must share a space")

    @property
    def space(self) -> Space:
        return self.a.space

    def term(self, n) -> Element:
        _check_index(n)
        return self.a.term(n) if self.mask[(n - 1) % len(self.mask)] else self.b.term(n)


@dataclass(frozen=True)
class PeriodicRational(Net):
    """Normal form: explicit prefix, then ``cycle[(n-P-1) mod K]`` evaluated at ``n``.

    Each cycle entry is a tuple of rational functions, one per coordinate,
    valid from ``n = P + 1`` at the latest.
    """

    space_: Space
    prefix: tuple
    cycle: tuple
    kind = "PeriodicRational"

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(tuple(row) for row in self.cycle))
        if self.space_.kind not in ("qvec", "lex"):
            raise UnsupportedSpaceError(f"rational normal form needs coordinates, not {self.space_}")
        if not self.cycle:
            raise ValueError("cycle must be nonempty")
        width = self.space_.coordinate_count
        for row in self.cycle:
            if len(row) != width:
                raise ValueError("cycle entry has the wrong number of coordinates")
            for f in row:
                if f.valid_from > len(self.prefix) + 1:
                    raise ValueError(f"{f} is not valid from n = {len(self.prefix) + 1}")
        for e in self.prefix:
            if e.space != self.space_:
                raise SpaceMismatchError("prefix term outside the net's space")

    @property
    def space(self) -> Space:
        return self.space_

    @property
    def P(self) -> int:
        return len(self.prefix)

    @property
    def K(self) -> int:
        return len(self.cycle)

    def position(self, n: int) -> int:
        return (n - self.P - 1) % self.K

    def term(self, n) -> Element:
        _check_index(n)
        if n <= self.P:
            return self.prefix[n - 1]
        row = self.cycle[self.position(n)]
        return self.space_.from_coords(tuple(f(n) for f in row))

    def residue(self, j: int, i: int) -> RF:
        """Coordinate ``i`` along cycle position ``j`` as a function of ``m >= 1``.

        Term index ``n = K*m + P + 1 + j - K``.
        """
        return self.cycle[j][i].compose_affine(self.K, self.P + 1 + j - self.K, 1)

    def index_of(self, j: int, m: int) -> int:
        return self.K * m + self.P + 1 + j - self.K

    def is_periodic(self) -> bool:
        return all(f.is_constant() for row in self.cycle for f in row)

    @cached_property
    def limits(self) -> tuple:
        """Limit vector along each cycle position (entries may be infinite)."""
        return tuple(tuple(rf_limit(f) for f in row) for row in self.cycle)


@dataclass(frozen=True)
class ProductNet(Net):
    """Net on N x N with the product order: ``op(left_a, right_b)``.

    ``op`` is ``add``, ``join``, ``meet`` or ``mul``; for ``mul`` the left
    factor is a scalar net in ``qvec 1``.
    """

    left: Net
    right: Net
    op: str = "add"
    kind = "ProductNet"

    OPS = ("add", "join", "meet", "mul")

    def __post_init__(self):
        if self.op not in self.OPS:
            raise ValueError(f"unknown product operation {self.op!r}")
        if isinstance(self.left, ProductNet) or isinstance(self.right, ProductNet):
            raise UnsupportedCombinationError("product nets of product nets are not supported")
        if self.op == "mul":
            if self.left.space != Space("qvec", 1):
                raise SpaceMismatchError("scalar factor must be a qvec 1 net")
        elif self.left.space != self.right.space:
            raise SpaceMismatchError("product factors must share a space")

    @property
    def space(self) -> Space:
        return self.right.space

    @property
    def is_product(self) -> bool:
        return True

    def combine(self, a: Element, b: Element) -> Element:
        if self.op == "add":
            return a + b
        if self.op == "join":
            return a.join(b)
        if self.op == "meet":
            return a.meet(b)
        return b.scale(a.coords[0])

    def term(self, index) -> Element:
        try:
            i, j = index
        except (TypeError, ValueError):
            raise PreconditionError(f"product nets are indexed by pairs, got {index!r}", index=index)
        return self.combine(self.left.term(i), self.right.term(j))


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def constant(c: Element) -> EventuallyPeriodic:
    return EventuallyPeriodic((), (c,))


def periodic(cycle, prefix=()) -> EventuallyPeriodic:
    return EventuallyPeriodic(tuple(prefix), tuple(cycle))


def rational(space: Space, *coords) -> RationalTerm:
    """``rational(Space('qvec', 2), '1/n', '1/n')``."""
    return RationalTerm(space, tuple(coords))


# ---------------------------------------------------------------------------
# Normal form
# ---------------------------------------------------------------------------


def _const_row(e: Element) -> tuple:
    return tuple(RF.constant(c) for c in e.coords)


def _shift_rf(f: RF, s: int, valid_from: int) -> RF:
    """``n -> f(n + s)``."""
    return f.compose_affine(1, s, max(1, valid_from))


def normal_form(net: Net) -> PeriodicRational:
    """Exact normal form of an infinite single-index net over qvec or lex."""
    if isinstance(net, PeriodicRational):
        return net
    if net.space.kind not in ("qvec", "lex"):
        raise UnsupportedSpaceError(f"no rational normal form for {net.space} nets")
    if isinstance(net, EventuallyPeriodic):
        return PeriodicRational(net.space, net.prefix, tuple(_const_row(c) for c in net.cycle))
    if isinstance(net, RationalTerm):
        return PeriodicRational(net.space, (), (net.coords,))
    if isinstance(net, PeriodicPlusRational):
        rows = tuple(
            tuple(RF.constant(c) + d for c, d in zip(e.coords, net.decay)) for e in net.cycle
        )
        return PeriodicRational(net.space, (), rows)
    if isinstance(net, Spliced):
        return _pr_delay(normal_form(net.rest), net.prefix)
    if isinstance(net, Interleaved):
        return _pr_interleave(normal_form(net.a), normal_form(net.b), net.mask)
    if isinstance(net, FiniteList):
        raise UndecidableError("FiniteList: only bounded-horizon checks are available")
    if isinstance(net, ProductNet):
        raise UndecidableError("ProductNet has no single-index normal form")
    raise UndecidableError(f"unsupported net kind {net.kind}")


def _pr_delay(pr: PeriodicRational, prefix: tuple) -> PeriodicRational:
    p = len(prefix)
    if not p:
        return pr
    rows = tuple(tuple(_shift_rf(f, -p, f.valid_from + p) for f in row) for row in pr.cycle)
    return PeriodicRational(pr.space, tuple(prefix) + pr.prefix, rows)


def _pr_extend(pr: PeriodicRational, P2: int, K2: int) -> PeriodicRational:
    if P2 < pr.P or K2 % pr.K:
        raise ValueError("can only lengthen the prefix and multiply the cycle")
    if P2 == pr.P and K2 == pr.K:
        return pr
    prefix = pr.prefix + tuple(pr.term(n) for n in range(pr.P + 1, P2 + 1))
    rows = tuple(pr.cycle[pr.position(P2 + 1 + j)] for j in range(K2))
    return PeriodicRational(pr.space, prefix, rows)


def _pr_align(*prs: PeriodicRational, mixed: bool = False) -> list:
    """Common prefix length and period; ``mixed`` allows differing spaces (scalar nets)."""
    space = prs[0].space
    for pr in prs:
        if pr.space != space and not mixed:
            raise SpaceMismatchError(f"{pr.space} vs {space}")
    P = max(pr.P for pr in prs)
    K = math.lcm(*(pr.K for pr in prs))
    return [_pr_extend(pr, P, K) for pr in prs]


def _pr_zip(prs, elem_fn, row_fn, space: Space | None = None) -> PeriodicRational:
    prs = _pr_align(*prs, mixed=space is not None)
    space = space or prs[0].space
    prefix = tuple(elem_fn(*es) for es in zip(*(pr.prefix for pr in prs)))
    rows = tuple(row_fn(*rs) for rs in zip(*(pr.cycle for pr in prs)))
    return PeriodicRational(space, prefix, rows)


def _pr_envelope(a: PeriodicRational, b: PeriodicRational, take_max: bool) -> PeriodicRational:
    a, b = _pr_align(a, b)
    lex = a.space.kind == "lex"

    def deciding(fa_row, fb_row):
        # (difference whose eventual sign decides, index of coordinate)
        if lex:
            d = fa_row[0] - fb_row[0]
            return [d if not d.is_zero() else fa_row[1] - fb_row[1]]
        return [fa - fb for fa, fb in zip(fa_row, fb_row)]

    bound = a.P
    for ra, rb in zip(a.cycle, b.cycle):
        for d in deciding(ra, rb):
            if not d.is_zero():
                bound = max(bound, d.root_bound())
    a, b = _pr_extend(a, bound, a.K), _pr_extend(b, bound, b.K)

    def pick(s: int) -> bool:
        return s >= 0 if take_max else s <= 0

    rows = []
    for ra, rb in zip(a.cycle, b.cycle):
        signs = [eventual_sign(d) for d in deciding(ra, rb)]
        if lex:
            rows.append(ra if pick(signs[0]) else rb)
        else:
            rows.append(tuple(fa if pick(s) else fb for fa, fb, s in zip(ra, rb, signs)))
    elem = (lambda x, y: x.join(y)) if take_max else (lambda x, y: x.meet(y))
    prefix = tuple(elem(x, y) for x, y in zip(a.prefix, b.prefix))
    return PeriodicRational(a.space, prefix, tuple(rows))


def _pr_tail(pr: PeriodicRational, n0: int) -> PeriodicRational:
    s = n0 - 1
    if s == 0:
        return pr
    pr = _pr_extend(pr, max(pr.P, s), pr.K)
    rows = tuple(tuple(_shift_rf(f, s, f.valid_from - s) for f in row) for row in pr.cycle)
    return PeriodicRational(pr.space, pr.prefix[s:], rows)


def _pr_subseq(pr: PeriodicRational, stride: int, offset: int) -> PeriodicRational:
    P2 = max(0, (pr.P - offset) // stride)
    K2 = pr.K // math.gcd(pr.K, stride)
    prefix = tuple(pr.term(stride * n + offset) for n in range(1, P2 + 1))
    rows = []
    for j in range(K2):
        n = P2 + 1 + j
        row = pr.cycle[pr.position(stride * n + offset)]
        rows.append(tuple(f.compose_affine(stride, offset, P2 + 1) for f in row))
    return PeriodicRational(pr.space, prefix, tuple(rows))


def _pr_interleave(a: PeriodicRational, b: PeriodicRational, mask: tuple) -> PeriodicRational:
    a, b = _pr_align(a, b)
    K = math.lcm(a.K, len(mask))
    a, b = _pr_extend(a, a.P, K), _pr_extend(b, b.P, K)

    def take_a(n):
        return mask[(n - 1) % len(mask)]

    prefix = tuple(a.term(n) if take_a(n) else b.term(n) for n in range(1, a.P + 1))
    rows = tuple(
        a.cycle[j] if take_a(a.P + 1 + j) else b.cycle[j] for j in range(K)
    )
    return PeriodicRational(a.space, prefix, rows)


# ---------------------------------------------------------------------------
# Combinators
# ---------------------------------------------------------------------------


def _as_net(x) -> Net:
    return constant(x) if isinstance(x, Element) else x


def _ep_zip(nets, fn) -> EventuallyPeriodic:
    P = max(len(a.prefix) for a in nets)
    K = math.lcm(*(len(a.cycle) for a in nets))
    prefix = tuple(fn(*(a.term(n) for a in nets)) for n in range(1, P + 1))
    cycle = tuple(fn(*(a.term(n) for a in nets)) for n in range(P + 1, P + K + 1))
    return EventuallyPeriodic(prefix, cycle)


def _pointwise(nets, elem_fn, row_fn, name: str, space: Space | None = None) -> Net:
    nets = [_as_net(a) for a in nets]
    for a in nets:
        if isinstance(a, ProductNet):
            raise UnsupportedCombinationError(f"{name}: use the product combinators for product nets")
    finite = [a for a in nets if isinstance(a, FiniteList)]
    if finite:
        horizon = min(a.horizon for a in finite)
        return FiniteList(tuple(elem_fn(*(a.term(n) for a in nets)) for n in range(1, horizon + 1)))
    if all(isinstance(a, EventuallyPeriodic) for a in nets):
        return _ep_zip(nets, elem_fn)
    kinds = {a.space.kind for a in nets}
    if "pwlin" in kinds:
        raise UnsupportedCombinationError(
            f"{name}: pwlin nets support eventually periodic and finite kinds only"
        )
    if row_fn is None:
        raise UnsupportedCombinationError(f"{name}: not available on rational nets")
    return _pr_zip([normal_form(a) for a in nets], elem_fn, row_fn, space)


def _check_spaces(*nets) -> None:
    spaces = {_as_net(a).space for a in nets}
    if len(spaces) > 1:
        raise SpaceMismatchError(f"nets from different spaces: {sorted(map(str, spaces))}")


def net_add(a, b) -> Net:
    _check_spaces(a, b)
    if isinstance(a, RationalTerm) and isinstance(b, RationalTerm):
        return RationalTerm(a.space, tuple(f + g for f, g in zip(a.coords, b.coords)))
    return _pointwise(
        [a, b], lambda x, y: x + y, lambda r, s: tuple(f + g for f, g in zip(r, s)), "net_add"
    )


def net_neg(a) -> Net:
    return net_scale(-1, a)


def net_sub(a, b) -> Net:
    return net_add(a, net_neg(_as_net(b)))


def net_scale(t, a) -> Net:
    """``t * a`` for a rational ``t`` or a same-index scalar net ``t`` in qvec 1."""
    a = _as_net(a)
    if isinstance(t, Net):
        if t.space != Space("qvec", 1):
            raise SpaceMismatchError("scalar net must live in qvec 1")
        return _pointwise(
            [t, a],
            lambda s, x: x.scale(s.coords[0]),
            lambda r, s: tuple(r[0] * f for f in s),
            "net_scale",
            space=a.space,
        )
    t = as_fraction(t)
    if isinstance(a, RationalTerm):
        return RationalTerm(a.space, tuple(f * t for f in a.coords))
    return _pointwise([a], lambda x: x.scale(t), lambda r: tuple(f * t for f in r), "net_scale")


def net_linear_map(matrix, a) -> Net:
    """Apply the matrix ``T`` (rows of rationals) termwise to a qvec net."""
    a = _as_net(a)
    T = [[as_fraction(v) for v in row] for row in matrix]
    if a.space.kind != "qvec" or any(len(row) != a.space.dim for row in T):
        raise SpaceMismatchError("matrix columns must match the qvec dimension")
    target = Space("qvec", len(T))

    def elem(x):
        return QVec(tuple(sum((c * v for c, v in zip(row, x.coords)), Fraction(0)) for row in T))

    def row_fn(r):
        out = []
        for trow in T:
            acc = RF.constant(0)
            for c, f in zip(trow, r):
                if c:
                    acc = acc + f * c
            out.append(acc)
        return tuple(out)

    return _pointwise([a], elem, row_fn, "net_linear_map", space=target)


def _lattice(a, b, take_max: bool, name: str) -> Net:
    a, b = _as_net(a), _as_net(b)
    _check_spaces(a, b)
    fn = (lambda x, y: x.join(y)) if take_max else (lambda x, y: x.meet(y))
    simple = (FiniteList, EventuallyPeriodic)
    if any(isinstance(x, FiniteList) for x in (a, b)) or all(isinstance(x, simple) for x in (a, b)):
        return _pointwise([a, b], fn, None, name)
    if a.space.kind == "pwlin":
        raise UnsupportedCombinationError(f"{name}: pwlin nets must be eventually periodic")
    return _pr_envelope(normal_form(a), normal_form(b), take_max)


def net_join(a, b) -> Net:
    return _lattice(a, b, True, "net_join")


def net_meet(a, b) -> Net:
    return _lattice(a, b, False, "net_meet")


def net_abs(a) -> Net:
    return net_join(a, net_neg(a))


def net_pos(a) -> Net:
    return net_join(a, _as_net(a).space.zero())


def net_neg_part(a) -> Net:
    return net_join(net_neg(a), _as_net(a).space.zero())


def tail(a: Net, n0: int) -> Net:
    """The tail ``(a_n)_{n >= n0}`` re-indexed from 1."""
    if n0 < 1:
        raise PreconditionError("tail start must be >= 1", index=n0)
    if n0 == 1:
        return a
    if isinstance(a, FiniteList):
        return FiniteList(a.items[n0 - 1:])
    if isinstance(a, EventuallyPeriodic):
        P, K = len(a.prefix), len(a.cycle)
        if n0 - 1 <= P:
            return EventuallyPeriodic(a.prefix[n0 - 1:], a.cycle)
        r = (n0 - 1 - P) % K
        return EventuallyPeriodic((), a.cycle[r:] + a.cycle[:r])
    if isinstance(a, RationalTerm):
        return RationalTerm(a.space, tuple(_shift_rf(f, n0 - 1, 1) for f in a.coords))
    if isinstance(a, ProductNet):
        raise UnsupportedCombinationError("tail of a product net: take tails of the factors")
    return _pr_tail(normal_form(a), n0)


def subseq_arith(a: Net, stride: int, offset: int = 0) -> Net:
    """The subnet ``n -> a_{stride*n + offset}``."""
    if stride < 1 or offset < 0:
        raise PreconditionError("need stride >= 1 and offset >= 0")
    if isinstance(a, FiniteList):
        last = (a.horizon - offset) // stride
        if last < 1:
            raise PreconditionError("subsequence is empty within the horizon")
        return FiniteList(tuple(a.term(stride * n + offset) for n in range(1, last + 1)))
    if isinstance(a, EventuallyPeriodic):
        P, K = len(a.prefix), len(a.cycle)
        P2 = max(0, (P - offset) // stride)
        K2 = K // math.gcd(K, stride)
        idx = [stride * n + offset for n in range(1, P2 + K2 + 1)]
        terms = [a.term(i) for i in idx]
        return EventuallyPeriodic(tuple(terms[:P2]), tuple(terms[P2:]))
    if isinstance(a, RationalTerm):
        return RationalTerm(a.space, tuple(f.compose_affine(stride, offset, 1) for f in a.coords))
    if isinstance(a, ProductNet):
        raise UnsupportedCombinationError("subnets of product nets are not supported")
    return _pr_subseq(normal_form(a), stride, offset)


def interleave(a: Net, b: Net, mask) -> Net:
    a, b = _as_net(a), _as_net(b)
    _check_spaces(a, b)
    mask = tuple(bool(m) for m in mask)
    if all(isinstance(x, EventuallyPeriodic) for x in (a, b)):
        M = len(mask)
        P = max(len(a.prefix), len(b.prefix))
        K = math.lcm(len(a.cycle), len(b.cycle), M)

        def z(n):
            return a.term(n) if mask[(n - 1) % M] else b.term(n)

        return EventuallyPeriodic(
            tuple(z(n) for n in range(1, P + 1)), tuple(z(n) for n in range(P + 1, P + K + 1))
        )
    return Interleaved(a, b, mask)


def splice(prefix, rest: Net) -> Net:
    return Spliced(tuple(prefix), rest) if prefix else rest


def net_product_sum(a: Net, b: Net) -> ProductNet:
    return ProductNet(a, b, "add")


def net_product_join(a: Net, b: Net) -> ProductNet:
    return ProductNet(a, b, "join")


def net_product_meet(a: Net, b: Net) -> ProductNet:
    return ProductNet(a, b, "meet")


def net_product_scale(t: Net, a: Net) -> ProductNet:
    return ProductNet(t, a, "mul")


# ---------------------------------------------------------------------------
# Exact queries
# ---------------------------------------------------------------------------


def _lex_first_negative(a: RF, b: RF, n0: int) -> int | None:
    """Least n >= n0 with ``(a(n), b(n)) <lex 0``."""
    if a.is_zero():
        return first_negative(b, n0)
    found = [first_negative(a, n0)]
    found += [n for n in integer_zeros(a, n0) if b(n) < 0]
    found = [n for n in found if n is not None]
    return min(found) if found else None


def _pr_first_negative(pr: PeriodicRational) -> int | None:
    zero = pr.space.zero()
    for n, e in enumerate(pr.prefix, 1):
        if not zero <= e:
            return n
    best = None
    for j in range(pr.K):
        if pr.space.kind == "lex":
            m = _lex_first_negative(pr.residue(j, 0), pr.residue(j, 1), 1)
        else:
            ms = [first_negative(pr.residue(j, i), 1) for i in range(pr.space.dim)]
            ms = [m for m in ms if m is not None]
            m = min(ms) if ms else None
        if m is not None:
            n = pr.index_of(j, m)
            best = n if best is None else min(best, n)
    return best


def forall_nonneg(net: Net, *, bounded: bool = False):
    """Decide ``theta <= x_n`` for every index n.

    Returns True or ``FalseAt(n)``.  FiniteList nets require ``bounded=True``
    and then the verdict only covers their horizon.
    """
    if isinstance(net, ProductNet):
        raise UndecidableError("use the product checks in rough for product nets")
    zero = net.space.zero()
    if isinstance(net, FiniteList):
        if not bounded:
            raise UndecidableError("FiniteList: pass bounded=True for a horizon-limited check")
        for n, e in enumerate(net.items, 1):
            if not zero <= e:
                return FalseAt(n)
        return True
    if isinstance(net, EventuallyPeriodic):
        for n in range(1, len(net.prefix) + len(net.cycle) + 1):
            if not zero <= net.term(n):
                return FalseAt(n)
        return True
    bad = _pr_first_negative(normal_form(net))
    return True if bad is None else FalseAt(bad)


def forall_leq(a: Net, b: Net, *, bounded: bool = False):
    """Decide ``a_n <= b_n`` for every index n."""
    return forall_nonneg(net_sub(b, a), bounded=bounded)


def is_decreasing(net: Net, *, bounded: bool = False):
    """True if ``x_{n+1} <= x_n`` for all n, else ``FalseAt(n)`` for the first rising step."""
    if isinstance(net, ProductNet):
        if net.op != "add":
            raise UndecidableError("monotonicity is decided for product sums only")
        left = is_decreasing(net.left, bounded=bounded)
        if not left:
            return FalseAt((left.index, 1))
        right = is_decreasing(net.right, bounded=bounded)
        if not right:
            return FalseAt((1, right.index))
        return True
    if isinstance(net, FiniteList):
        if not bounded:
            raise UndecidableError("FiniteList: pass bounded=True for a horizon-limited check")
        for n in range(1, net.horizon):
            if not net.term(n + 1) <= net.term(n):
                return FalseAt(n)
        return True
    if isinstance(net, EventuallyPeriodic):
        for n in range(1, len(net.prefix) + len(net.cycle) + 1):
            if not net.term(n + 1) <= net.term(n):
                return FalseAt(n)
        return True
    return forall_nonneg(net_sub(net, tail(net, 2)))


@dataclass(frozen=True)
class Infimum:
    """Outcome of :func:`infimum`; ``value`` is None when no infimum exists."""

    value: Element | None

    @property
    def exists(self) -> bool:
        return self.value is not None

    def __str__(self):
        return f"exists {self.value}" if self.exists else "does not exist"


def infimum(net: Net) -> Infimum:
    """Infimum of a decreasing net.

    Raises PreconditionError when the net is not decreasing and
    UndecidableError for bounded-horizon nets.
    """
    if isinstance(net, FiniteList):
        raise UndecidableError("FiniteList: infimum of the full net is not determined")
    dec = is_decreasing(net)
    if not dec:
        raise PreconditionError(f"net is not decreasing (step {dec.index})", index=dec.index)
    if isinstance(net, ProductNet):
        left, right = infimum(net.left), infimum(net.right)
        if not (left.exists and right.exists):
            return Infimum(None)
        return Infimum(left.value + right.value)
    if isinstance(net, EventuallyPeriodic):
        return Infimum(net.cycle[0])
    pr = normal_form(net)
    lims = pr.limits
    if pr.space.kind == "qvec":
        lo = tuple(min(row[i] for row in lims) for i in range(pr.space.dim))
        if any(v == MINUS_INF for v in lo):
            return Infimum(None)
        return Infimum(QVec(lo))
    first = min(row[0] for row in lims)
    if first == MINUS_INF:
        return Infimum(None)
    settled = all(row[0].is_constant() and row[0].constant_value() == first for row in pr.cycle)
    if not settled:
        # first coordinate decreases strictly towards its limit: every
        # (first, y) is a lower bound and none is greatest
        return Infimum(None)
    second = min(row[1] for row in lims)
    if second == MINUS_INF:
        return Infimum(None)
    return Infimum(pr.space.from_coords((first, second)))


# -- limits, suprema ---------------------------------------------------------


def cluster_points(net: Net) -> list:
    """Limit vectors along the cycle positions (qvec and lex coordinates).

    For a product net these are the combinations of the factors' cluster
    points.  Entries may be infinite.
    """
    if isinstance(net, ProductNet):
        out = []
        for p in cluster_points(net.left):
            for q in cluster_points(net.right):
                out.append(_combine_extended(net.op, p, q))
        return out
    if isinstance(net, FiniteList):
        raise UndecidableError("FiniteList: limits are not determined")
    return sorted(set(normal_form(net).limits))


def _combine_extended(op: str, p: tuple, q: tuple) -> tuple:
    if op == "mul":
        t = p[0]
        out = []
        for b in q:
            if (t == 0 and not math.isfinite(b)) or (b == 0 and not math.isfinite(t)):
                raise UndecidableError("indeterminate limit 0 * inf")
            out.append(t * b if t and b else Fraction(0))
        return tuple(out)
    out = []
    for a, b in zip(p, q):
        if op == "add":
            if {a, b} == {PLUS_INF, MINUS_INF}:
                raise UndecidableError("indeterminate limit inf - inf")
            out.append(a + b)
        else:
            out.append(max(a, b) if op == "join" else min(a, b))
    return tuple(out)


@dataclass(frozen=True)
class TailBound:
    """Per-coordinate limsup and liminf of a net of absolute deviations."""

    limsup: tuple
    liminf: tuple

    def __str__(self):
        from .exact import format_rational

        fmt = lambda v: "(" + ", ".join(format_rational(x) for x in v) + ")"  # noqa: E731
        return f"limsup {fmt(self.limsup)} liminf {fmt(self.liminf)}"


def _abs_dev(v: Extended, c: Fraction) -> Extended:
    return PLUS_INF if not math.isfinite(v) else abs(v - c)


def limsup_abs_dev(net: Net, x: Element) -> TailBound:
    """Exact limsup/liminf of ``|x_n - x|`` coordinatewise (qvec only)."""
    if net.space.kind != "qvec":
        raise UnsupportedSpaceError("limsup is computed coordinatewise in qvec only")
    if x.space != net.space:
        raise SpaceMismatchError(f"{x.space} vs {net.space}")
    devs = [tuple(_abs_dev(v, c) for v, c in zip(p, x.coords)) for p in cluster_points(net)]
    dim = net.space.dim
    return TailBound(
        tuple(max(d[i] for d in devs) for i in range(dim)),
        tuple(min(d[i] for d in devs) for i in range(dim)),
    )


def coordinate_sup(net: Net) -> tuple:
    """``sup_n`` of each coordinate over the whole net (qvec), possibly +inf."""
    if net.space.kind != "qvec":
        raise UnsupportedSpaceError("coordinatewise suprema need qvec")
    if isinstance(net, EventuallyPeriodic):
        vals = net.values()
        return tuple(max(v.coords[i] for v in vals) for i in range(net.space.dim))
    pr = normal_form(net)
    out = []
    for i in range(pr.space.dim):
        best: Extended = max((e.coords[i] for e in pr.prefix), default=MINUS_INF)
        for j in range(pr.K):
            best = max(best, rf_sup(pr.residue(j, i), 1))
        out.append(best)
    return tuple(out)


def coordinate_inf(net: Net) -> tuple:
    return tuple(-v for v in coordinate_sup(net_neg(net)))


def tail_sup(net: Net) -> PeriodicRational:
    """The decreasing net ``T_n = sup_{m >= n} x_m`` (coordinatewise, qvec).

    Raises UnboundedError if some coordinate is unbounded above.
    """
    if net.space.kind != "qvec":
        raise UnsupportedSpaceError("tail suprema are computed coordinatewise in qvec")
    pr = normal_form(net)
    K, P = pr.K, pr.P
    per_coord = []  # per coordinate: (list over residue r of eventual RF, start index)
    start = P + 1
    for i in range(pr.space.dim):
        increasing, limit, mono_from = [], [], []
        for j in range(K):
            g = pr.residue(j, i)
            step = g.compose_affine(1, 1, 1) - g
            s = eventual_sign(step)
            lim = rf_limit(g)
            if s > 0 and lim == PLUS_INF:
                raise UnboundedError(f"coordinate {i} is unbounded above")
            increasing.append(s > 0)
            limit.append(lim)
            m0 = (step.root_bound() + 1) if not step.is_zero() else 1
            mono_from.append(pr.index_of(j, max(m0, 1)))
        start = max(start, *mono_from)
        formulas = []
        for r in range(K):
            cands = []
            for j in range(K):
                if increasing[j]:
                    cands.append(RF.constant(limit[j]))
                else:
                    delta = (j - r) % K
                    f = pr.cycle[j][i]
                    cands.append(_shift_rf(f, delta, f.valid_from - delta))
            best = cands[0]
            for c in cands[1:]:
                if eventual_sign(c - best) > 0:
                    best = c
            for c in cands:
                d = best - c
                if not d.is_zero():
                    start = max(start, d.root_bound() + 1)
            formulas.append(best)
        per_coord.append(formulas)
    # the eventual formulas hold for n >= start; materialize T_1..T_{start-1}
    P2 = start - 1
    rows = []
    for j2 in range(K):
        n = P2 + 1 + j2
        r = pr.position(n)
        rows.append(tuple(per_coord[i][r] for i in range(pr.space.dim)))
    # valid_from of the eventual formulas must not exceed P2 + 1
    rows = tuple(
        tuple(f if f.valid_from <= P2 + 1 else RF(f.num, f.den, P2 + 1) for f in row)
        for row in rows
    )
    eventual = PeriodicRational(pr.space, tuple(pr.term(n) for n in range(1, P2 + 1)), rows)
    vals = [None] * (P2 + 2)
    vals[P2 + 1] = eventual.term(P2 + 1)
    for n in range(P2, 0, -1):
        vals[n] = pr.term(n).join(vals[n + 1])
    return PeriodicRational(pr.space, tuple(vals[1 : P2 + 1]), rows)
