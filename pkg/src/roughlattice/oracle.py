"""Brute-force reference checks built on term evaluation alone.

Nothing here uses the symbolic machinery of :mod:`roughlattice.nets`
beyond ``term``; the engine's answers are validated against these.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .convergence import ConvergenceStructure, order_conv
from .errors import PreconditionError
from .exact import Polynomial, RationalFunction, as_fraction
from .lattice import Element, QVec, Space
from .nets import EventuallyPeriodic, FiniteList, Net, RationalTerm
from .rough import RcCertificate, decide_rc, verify_rc


class _Inconclusive:
    """Finite evidence that neither confirms nor refutes."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        raise TypeError("Inconclusive has no truth value; compare with `is Inconclusive`")

    def __repr__(self):
        return "Inconclusive"


Inconclusive = _Inconclusive()


def _window_start(net: Net, horizon: int) -> int:
    prefix = len(net.prefix) if isinstance(net, EventuallyPeriodic) else 0
    if horizon < prefix:
        raise PreconditionError(f"horizon {horizon} is shorter than the prefix ({prefix})")
    return max(horizon // 2, prefix + 1)


def _window(net: Net, horizon: int) -> list:
    k = _window_start(net, horizon)
    if isinstance(net, FiniteList) and horizon > net.horizon:
        raise PreconditionError("horizon exceeds the finite list")
    if isinstance(net, EventuallyPeriodic) and horizon - k + 1 < len(net.cycle):
        raise PreconditionError("window shorter than one cycle")
    return [net.term(m) for m in range(k, horizon + 1)]


def _judge(net: Net, terms: list, x: Element, r: Element):
    if isinstance(x, QVec):
        # plain coordinate arithmetic keeps the oracle independent of the lattice code
        devs = [tuple(abs(a - b) for a, b in zip(t.coords, x.coords)) for t in terms]
    else:
        devs = [(t - x).abs().coords for t in terms]
    dim = len(r.coords)
    hi = [max(d[i] for d in devs) for i in range(dim)]
    if isinstance(net, EventuallyPeriodic):
        return all(h <= ri for h, ri in zip(hi, r.coords))
    lo = [min(d[i] for d in devs) for i in range(dim)]
    verdicts = []
    for h, low, ri in zip(hi, lo, r.coords):
        spread = h - low
        if ri >= h + spread:
            verdicts.append(True)
        elif ri < low - spread:
            verdicts.append(False)
        else:
            verdicts.append(None)
    if False in verdicts:
        return False
    if None in verdicts:
        return Inconclusive
    return True


def brute_membership(net: Net, x: Element, r: Element, horizon: int):
    """Compare tail suprema of ``|x_m - x|`` over ``[horizon/2, horizon]`` with ``r``.

    Exact for eventually periodic nets once the window holds a full cycle.
    For other nets the window's spread gives a margin; verdicts inside the
    margin are ``Inconclusive``.
    """
    return _judge(net, _window(net, horizon), x, r)


def resolve(net: Net, x: Element, r: Element, horizon: int) -> bool:
    """Brute membership with an inconclusive answer settled by the exact limits."""
    v = brute_membership(net, x, r, horizon)
    if v is Inconclusive:
        return decide_rc(net, x, r)
    return v


@dataclass(frozen=True)
class GridSpec:
    ranges: tuple
    step: Fraction

    def __post_init__(self):
        rng = tuple((as_fraction(lo), as_fraction(hi)) for lo, hi in self.ranges)
        object.__setattr__(self, "ranges", rng)
        object.__setattr__(self, "step", as_fraction(self.step))
        if self.step <= 0:
            raise ValueError("grid step must be positive")
        if any(lo > hi for lo, hi in rng):
            raise ValueError("grid range with lo > hi")

    def axis(self, i: int) -> list:
        lo, hi = self.ranges[i]
        count = int((hi - lo) / self.step)
        return [lo + j * self.step for j in range(count + 1)]

    def points(self):
        for combo in itertools.product(*(self.axis(i) for i in range(len(self.ranges)))):
            yield QVec(combo)


def brute_limit_set(net: Net, r: Element, grid: GridSpec, horizon: int) -> set:
    """Grid points accepted by :func:`brute_membership`."""
    terms = _window(net, horizon)
    out = set()
    for p in grid.points():
        v = _judge(net, terms, p, r)
        if v is Inconclusive:
            v = decide_rc(net, p, r)
        if v:
            out.add(p)
    return out


# -- witness search -----------------------------------------------------------


@dataclass(frozen=True)
class Found:
    witness: Net

    def __bool__(self):
        return True


@dataclass(frozen=True)
class NotFoundInFamily:
    tried: int

    def __bool__(self):
        return False


def reciprocal_family(space: Space, direction, coefficients: Iterable) -> list:
    """Nets ``(c / n) * direction`` for each coefficient c."""
    nets = []
    for c in coefficients:
        c = as_fraction(c)
        coords = tuple(
            RationalFunction(Polynomial.constant(c * as_fraction(d)), Polynomial.variable())
            for d in direction
        )
        nets.append(RationalTerm(space, coords))
    return nets


def witness_search(
    net: Net,
    x: Element,
    r: Element,
    family: Iterable[Net],
    conv: ConvergenceStructure | None = None,
    horizon: int = 40,
):
    """First witness in ``family`` that certifies ``net -> x`` with roughness ``r``.

    Not finding one refutes nothing.
    """
    conv = conv or order_conv(net.space)
    tried = 0
    for w in family:
        tried += 1
        v = verify_rc(net, RcCertificate(w, w, r, x, conv), horizon=horizon)
        if v.accepted:
            return Found(w)
    return NotFoundInFamily(tried)


# -- exhaustive sign evaluation ------------------------------------------------


def _integer_coeffs(p: Polynomial) -> np.ndarray:
    scale = math.lcm(*(c.denominator for c in p.coeffs)) if p.coeffs else 1
    return np.array([int(c * scale) for c in p.coeffs][::-1] or [0], dtype=np.int64)


def exhaustive_first_negative(f: RationalFunction, n0: int, count: int) -> int | None:
    """Least n in ``[n0, n0 + count]`` with ``f(n) < 0`` by direct evaluation.

    Numerator and denominator are cleared to integer coefficients and
    evaluated separately in int64; meant for small coefficients only.
    """
    ns = np.arange(n0, n0 + count + 1, dtype=np.int64)
    num = np.polyval(_integer_coeffs(f.num), ns)
    den = np.polyval(_integer_coeffs(f.den), ns)
    bad = np.flatnonzero(np.sign(num) * np.sign(den) < 0)
    return int(ns[bad[0]]) if bad.size else None
