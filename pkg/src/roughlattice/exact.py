"""Exact polynomial and rational-function arithmetic over Q.

Scalars are :class:`fractions.Fraction`.  Limits at infinity are returned
as a ``Fraction`` or as ``math.inf`` / ``-math.inf``; Python compares the two
exactly, so extended values can be fed straight into ``min``/``max``.

The central decision procedure is :func:`forall_n_nonneg`, which decides
``f(n) >= 0`` for every integer ``n >= n0`` by a root bound plus exhaustive
evaluation below it.
"""

from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Union

import numpy as np

Extended = Union[Fraction, float]

PLUS_INF = math.inf
MINUS_INF = -math.inf


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a Fraction or a 'p/q' string")
    return Fraction(value)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_rational(value: Extended) -> str:
    if value == PLUS_INF:
        return "+inf"
    if value == MINUS_INF:
        return "-inf"
    return str(value)


def sign(value) -> int:
    return (value > 0) - (value < 0)


class FalseAt(NamedTuple):
    """Failed universal claim; ``index`` is the least counterexample."""

    index: object

    def __bool__(self):
        return False


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


def _trim(coeffs) -> tuple:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _sign_changes(coeffs) -> int:
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(a != b for a, b in zip(signs, signs[1:]))


def _ceil_root(v: Fraction, k: int) -> int:
    """Least integer t >= 0 with ``t**k >= v``."""
    t = max(0, math.ceil(float(v) ** (1 / k)) - 1)
    while t**k < v:
        t += 1
    while t > 0 and (t - 1) ** k >= v:
        t -= 1
    return t


@dataclass(frozen=True)
class Polynomial:
    """Polynomial in ``n`` with coefficients listed lowest degree first."""

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(as_fraction(c) for c in self.coeffs))

    @classmethod
    def constant(cls, c) -> Polynomial:
        return cls((c,))

    @classmethod
    def variable(cls) -> Polynomial:
        return cls((0, 1))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return self.degree <= 0

    def __call__(self, n) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def __add__(self, other: Polynomial) -> Polynomial:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Polynomial(tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)))

    def __neg__(self) -> Polynomial:
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            c = as_fraction(other)
            return Polynomial(tuple(c * x for x in self.coeffs))
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def derivative(self) -> Polynomial:
        return Polynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def compose_affine(self, a, b) -> Polynomial:
        """The polynomial ``n -> p(a*n + b)``."""
        inner = Polynomial((b, a))
        acc = Polynomial()
        for c in reversed(self.coeffs):
            acc = acc * inner + Polynomial.constant(c)
        return acc

    def divmod(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quot = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.lead
        while len(rem) >= len(other.coeffs) and rem:
            shift = len(rem) - len(other.coeffs)
            q = rem[-1] / lead
            quot[shift] = q
            for i, c in enumerate(other.coeffs):
                rem[i + shift] -= q * c
            rem = list(_trim(rem))
        return Polynomial(tuple(quot)), Polynomial(tuple(rem))

    def monic(self) -> Polynomial:
        return self * (1 / self.lead) if self.coeffs else self

    def cauchy_bound(self) -> Fraction:
        """Integer bound on the modulus of every root (Fujiwara).

        ``|z| <= 2 max_i |a_{d-i} / a_d|^(1/i)`` with the constant term halved.
        Unlike the coefficient-sum bound this grows linearly under shifts
        ``n -> n + b``, which keeps the sign scans short.
        """
        if self.degree <= 0:
            return Fraction(1)
        d, lead = self.degree, abs(self.lead)
        best = 0
        for i in range(1, d + 1):
            v = abs(self.coeffs[d - i]) / lead
            if i == d:
                v /= 2
            if v:
                best = max(best, _ceil_root(v, i))
        return Fraction(max(1, 2 * best))

    def real_root_bound(self) -> int:
        """Integer T with every real root ``<= T``, usually close to the largest one.

        A floating estimate of the roots proposes T; it is accepted only when
        ``p(x + T)`` has no sign changes among its coefficients, which by
        Descartes' rule leaves no root beyond T.  Candidates double up to the
        modulus bound, where acceptance is guaranteed: past every root's real
        part the shifted polynomial is stable, hence sign-uniform.
        """
        if self.degree <= 0:
            return 1
        cap = math.ceil(self.cauchy_bound())
        roots = np.roots([float(c) for c in reversed(self.coeffs)])
        finite = [z.real for z in roots if np.isfinite(z.real)]
        t = max(1, math.floor(max(finite, default=0.0)) + 1)
        while t < cap:
            if _sign_changes(self.compose_affine(1, t).coeffs) == 0:
                return t
            t *= 2
        return cap

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "n" if i == 1 else f"n**{i}"
                terms.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalFunction:
    """``num(n) / den(n)`` for integer ``n >= valid_from``.

    The representation is reduced (polynomial gcd removed) with a monic
    denominator, so equal functions compare equal.  Construction fails if
    the denominator vanishes at an integer ``n >= valid_from``.
    """

    num: Polynomial
    den: Polynomial = field(default_factory=lambda: Polynomial((1,)))
    valid_from: int = field(default=1, compare=False)

    def __post_init__(self):
        num, den = self.num, self.den
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = Polynomial(), Polynomial((1,))
        elif den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.divmod(g)[0], den.divmod(g)[0]
        lead = den.lead
        num, den = num * (1 / lead), den * (1 / lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        if den.degree > 0:
            top = den.real_root_bound()
            for n in range(max(self.valid_from, -math.ceil(den.cauchy_bound())), top + 1):
                if den(n) == 0:
                    raise ValueError(f"denominator {den} vanishes at n={n}")

    @classmethod
    def constant(cls, c, valid_from: int = 1) -> RationalFunction:
        return cls(Polynomial.constant(c), valid_from=valid_from)

    @classmethod
    def poly(cls, p: Polynomial, valid_from: int = 1) -> RationalFunction:
        return cls(p, valid_from=valid_from)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num(0) / self.den(0)

    def __call__(self, n) -> Fraction:
        if n < self.valid_from:
            raise ValueError(f"{self} evaluated at n={n} < valid_from={self.valid_from}")
        return self.num(n) / self.den(n)

    def _combine_from(self, other) -> int:
        return max(self.valid_from, other.valid_from)

    def __add__(self, other) -> RationalFunction:
        if not isinstance(other, RationalFunction):
            other = RationalFunction.constant(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den, self._combine_from(other))
        return RationalFunction(
            self.num * other.den + other.num * self.den,
            self.den * other.den,
            self._combine_from(other),
        )

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den, self.valid_from)

    def __sub__(self, other) -> RationalFunction:
        if not isinstance(other, RationalFunction):
            other = RationalFunction.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> RationalFunction:
        return (-self) + other

    def __mul__(self, other) -> RationalFunction:
        if not isinstance(other, RationalFunction):
            c = as_fraction(other)
            return RationalFunction(self.num * c, self.den, self.valid_from)
        return RationalFunction(
            self.num * other.num, self.den * other.den, self._combine_from(other)
        )

    __rmul__ = __mul__

    def compose_affine(self, a: int, b: int, valid_from: int = 1) -> RationalFunction:
        """``n -> f(a*n + b)``; the caller guarantees ``a*valid_from + b >= self.valid_from``."""
        if a <= 0 or a * valid_from + b < self.valid_from:
            raise ValueError("affine reindexing leaves the domain of validity")
        return RationalFunction(
            self.num.compose_affine(a, b), self.den.compose_affine(a, b), valid_from
        )

    def product_poly(self) -> Polynomial:
        """``num * den``: has the same sign as f wherever f is defined."""
        return self.num * self.den

    def root_bound(self) -> int:
        """Integer past which f has constant sign."""
        return self.product_poly().real_root_bound()

    def __str__(self):
        if self.den.degree <= 0 and self.den.lead == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"


def rf_limit(f: RationalFunction) -> Extended:
    """Limit of ``f(n)`` as ``n -> infinity``."""
    dn, dd = f.num.degree, f.den.degree
    if dn < dd:
        return Fraction(0)
    if dn == dd:
        return f.num.lead / f.den.lead
    return PLUS_INF if sign(f.num.lead) * sign(f.den.lead) > 0 else MINUS_INF


def eventual_sign(f: RationalFunction) -> int:
    """Sign of ``f(n)`` for every n beyond the root bound: 1, -1 or 0."""
    if f.is_zero():
        return 0
    return sign(f.num.lead) * sign(f.den.lead)


def first_negative(f: RationalFunction, n0: int) -> int | None:
    """Least integer ``n >= n0`` with ``f(n) < 0``, or None."""
    if n0 < f.valid_from:
        raise ValueError(f"n0={n0} precedes valid_from={f.valid_from}")
    if f.is_zero():
        return None
    p = f.product_poly()
    top = p.real_root_bound()
    for n in range(n0, top + 1):
        if p(n) < 0:
            return n
    if p.lead < 0:
        return max(n0, top + 1)
    return None


def forall_n_nonneg(f: RationalFunction, n0: int):
    """True if ``f(n) >= 0`` for every integer ``n >= n0``, else ``FalseAt(n)``."""
    bad = first_negative(f, n0)
    return True if bad is None else FalseAt(bad)


def integer_zeros(f: RationalFunction, n0: int) -> list[int]:
    """All integers ``n >= n0`` with ``f(n) == 0`` (f must not be identically zero)."""
    if f.is_zero():
        raise ValueError("identically zero function has infinitely many zeros")
    top = f.num.real_root_bound()
    return [n for n in range(n0, top + 1) if f.num(n) == 0]


def rf_sup(f: RationalFunction, n0: int) -> Extended:
    """``sup { f(n) : n >= n0 }`` exactly (possibly +inf, never attained-only issues)."""
    lim = rf_limit(f)
    if f.is_constant():
        return f.constant_value()
    # past the root bound of the forward difference f is monotone
    diff = f.compose_affine(1, 1, f.valid_from) - f
    start = max(n0, diff.root_bound() + 1)
    best: Extended = max((f(n) for n in range(n0, start + 1)), default=MINUS_INF)
    return max(best, lim)


def rf_inf(f: RationalFunction, n0: int) -> Extended:
    return -rf_sup(-f, n0)


# ---------------------------------------------------------------------------
# Expression parsing:  "1/n", "(2*n+1)/n", "2/n + 1 - 1/n", "n**2 - 3"
# ---------------------------------------------------------------------------


def _pair(node, var: str):
    """Evaluate an expression AST to a (num, den) pair of polynomials."""
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Polynomial.constant(node.value), Polynomial.constant(1)
    if isinstance(node, ast.Name) and node.id == var:
        return Polynomial.variable(), Polynomial.constant(1)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        num, den = _pair(node.operand, var)
        return (-num if isinstance(node.op, ast.USub) else num), den
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)
                    and node.right.value >= 0):
                raise ValueError("exponents must be non-negative integer literals")
            num, den = _pair(node.left, var)
            rn, rd = Polynomial.constant(1), Polynomial.constant(1)
            for _ in range(node.right.value):
                rn, rd = rn * num, rd * den
            return rn, rd
        ln, ld = _pair(node.left, var)
        rn, rd = _pair(node.right, var)
        if isinstance(node.op, ast.Add):
            return ln * rd + rn * ld, ld * rd
        if isinstance(node.op, ast.Sub):
            return ln * rd - rn * ld, ld * rd
        if isinstance(node.op, ast.Mult):
            return ln * rn, ld * rd
        if isinstance(node.op, ast.Div):
            if rn.is_zero():
                raise ValueError("division by zero in term formula")
            return ln * rd, ld * rn
    raise ValueError(f"unsupported syntax in term formula: {ast.dump(node)}")


def parse_rf(text: str, var: str = "n", valid_from: int = 1) -> RationalFunction:
    """Parse an arithmetic formula in ``n`` into a RationalFunction.

    Implicit multiplication such as ``2n`` is accepted and rewritten to ``2*n``.
    """
    name = rf"(?<![A-Za-z_]){var}(?![A-Za-z_0-9])"
    src = re.sub(rf"(\d|\)|{name})\s*({name}|\()", r"\1*\2", text.strip())
    src = re.sub(rf"(\))\s*(\d|{name})", r"\1*\2", src)
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse term formula {text!r}") from exc
    num, den = _pair(tree.body, var)
    return RationalFunction(num, den, valid_from)
