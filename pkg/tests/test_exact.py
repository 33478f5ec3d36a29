from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import random_rf, rationals, safe_rfs

from roughlattice.exact import (
    MINUS_INF,
    PLUS_INF,
    FalseAt,
    Polynomial,
    RationalFunction,
    as_fraction,
    eventual_sign,
    forall_n_nonneg,
    format_rational,
    parse_rational,
    parse_rf,
    rf_inf,
    rf_limit,
    rf_sup,
)
from roughlattice.oracle import exhaustive_first_negative


def test_limits_of_examples():
    assert rf_limit(parse_rf("(2n+1)/n")) == 2
    assert rf_limit(parse_rf("1/n")) == 0
    assert rf_limit(parse_rf("(n**2+1)/n")) == PLUS_INF
    assert rf_limit(parse_rf("(1-n**3)/(n+1)")) == MINUS_INF


def test_forall_examples():
    f = parse_rf("(n-3)/n")
    assert forall_n_nonneg(f, 1) == FalseAt(1)
    assert not forall_n_nonneg(f, 1)
    assert forall_n_nonneg(f, 3) is True
    assert forall_n_nonneg(parse_rf("2/n + 1 - 1/n"), 1) is True


def test_forall_rejects_start_before_validity():
    f = RationalFunction(Polynomial.constant(1), Polynomial((Fraction(-5), Fraction(1))), valid_from=6)
    with pytest.raises(ValueError):
        forall_n_nonneg(f, 2)


def test_eventual_sign_examples():
    assert eventual_sign(parse_rf("1/n")) == 1
    assert eventual_sign(parse_rf("(3-n)/n")) == -1
    assert eventual_sign(parse_rf("0")) == 0


def test_denominator_vanishing_at_an_index_is_rejected():
    with pytest.raises(ValueError):
        parse_rf("1/(n-2)")
    assert parse_rf("1/(n-2)", valid_from=3)(3) == 1


def test_parse_forms():
    assert parse_rf("2n") == parse_rf("2*n")
    assert parse_rf("(n+1)(n-1)") == parse_rf("n**2 - 1")
    assert parse_rf("-(1/2)n") == parse_rf("-n/2")
    with pytest.raises(ValueError):
        parse_rf("n**-1")
    with pytest.raises(ValueError):
        parse_rf("m + 1")
    with pytest.raises(ValueError):
        parse_rf("1/0")


def test_rational_text():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(Fraction(-1, 3)) == "-1/3"
    assert format_rational(PLUS_INF) == "+inf"
    with pytest.raises(TypeError):
        as_fraction(0.5)


def test_forall_matches_exhaustive_evaluation_on_random_functions():
    rng = random.Random(20240611)
    for _ in range(1000):
        f = random_rf(rng)
        n0 = rng.randint(1, 5)
        exact = forall_n_nonneg(f, n0)
        brute = exhaustive_first_negative(f, n0, 10_000)
        if exact is True:
            assert brute is None, f
        else:
            assert exact.index == brute, f


@given(safe_rfs())
def test_finite_limits_are_approached_monotonically(f):
    lim = rf_limit(f)
    if lim in (PLUS_INF, MINUS_INF):
        return
    devs = [abs(f(n) - lim) for n in range(1000, 1100)]
    assert all(a >= b for a, b in zip(devs, devs[1:]))
    assert abs(f(10_000) - lim) <= devs[0]


@given(rationals(), rationals())
def test_rational_arithmetic_is_exact(a, b):
    assert (a + b) - b == a


@given(safe_rfs(), safe_rfs())
def test_function_arithmetic_matches_evaluation(f, g):
    for n in (1, 2, 7, 40):
        assert (f + g)(n) == f(n) + g(n)
        assert (f - g)(n) == f(n) - g(n)
        assert (f * g)(n) == f(n) * g(n)


@given(safe_rfs())
def test_text_round_trip(f):
    assert parse_rf(str(f)) == f


@given(st.lists(rationals(), min_size=1, max_size=4), st.lists(rationals(), min_size=1, max_size=3))
def test_polynomial_division(a, b):
    p, d = Polynomial(tuple(a)), Polynomial(tuple(b))
    if d.is_zero():
        return
    quo, rem = p.divmod(d)
    assert quo * d + rem == p
    assert rem.degree < d.degree or rem.is_zero()


@settings(max_examples=200)
@given(safe_rfs())
def test_sup_and_inf_bound_all_terms(f):
    hi, lo = rf_sup(f, 1), rf_inf(f, 1)
    values = [f(n) for n in range(1, 300)]
    assert all(lo <= v <= hi for v in values)
    lim = rf_limit(f)
    # the extremum is either attained early or equals the limit
    assert hi == lim or hi in values
    assert lo == lim or lo in values


def test_real_root_bound_is_sound_and_tighter_than_the_modulus_bound():
    rng = random.Random(23)
    for _ in range(500):
        roots = [Fraction(rng.randint(-40, 40), rng.randint(1, 3)) for _ in range(rng.randint(1, 4))]
        p = Polynomial.constant(Fraction(rng.choice([-3, -1, 1, 2]), rng.randint(1, 4)))
        for r in roots:
            p = p * Polynomial((-r, Fraction(1)))
        if rng.random() < 0.5:
            p = p * Polynomial((Fraction(rng.randint(1, 9)), Fraction(0), Fraction(1)))
        shift = rng.randint(0, 200)
        p = p.compose_affine(1, shift)
        t = p.real_root_bound()
        assert all(r - shift <= t for r in roots)
        assert t <= p.cauchy_bound()
        signs = {p(n) > 0 for n in range(t + 1, t + 300)}
        assert len(signs) == 1
