from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import periodic_nets, q, random_periodic, rational_nets

from roughlattice.errors import (
    PreconditionError,
    SpaceMismatchError,
    UnboundedError,
    UndecidableError,
    UnsupportedCombinationError,
)
from roughlattice.exact import FalseAt, RationalFunction, parse_rf, rf_limit
from roughlattice.lattice import LEX, PWLIN, LexVec, PwLin, QVec, Space
from roughlattice.nets import (
    EventuallyPeriodic,
    FiniteList,
    Interleaved,
    PeriodicPlusRational,
    ProductNet,
    RationalTerm,
    Spliced,
    cluster_points,
    constant,
    coordinate_sup,
    forall_nonneg,
    infimum,
    interleave,
    is_decreasing,
    limsup_abs_dev,
    net_abs,
    net_add,
    net_join,
    net_linear_map,
    net_meet,
    net_neg,
    net_product_sum,
    net_scale,
    net_sub,
    normal_form,
    periodic,
    rational,
    subseq_arith,
    tail,
    tail_sup,
)

Q1, Q2 = Space("qvec", 1), Space("qvec", 2)


def test_term_examples():
    assert periodic([q(1), q(-1)]).term(3) == q(1)
    assert rational(Q2, "1/n", "1/n").term(4) == q(Fraction(1, 4), Fraction(1, 4))
    a = rational(Q1, "(n-1)/(n+1)")
    assert Interleaved(a, constant(q(9)), (True,)).term(6) == a.term(6)
    with pytest.raises(PreconditionError):
        periodic([q(1)]).term(0)
    ppr = PeriodicPlusRational((q(1), q(-1)), (parse_rf("1/n"),))
    assert ppr.term(2) == q(Fraction(-1, 2))


def test_terms_agree_with_direct_evaluation():
    """Each kind, and its normal form, against a hand-written term formula."""
    cyc = (q(1, 0), q(-1, 2), q(0, 5))
    pre = (q(7, 7),)
    f, g = parse_rf("(n**2-3)/(n**2+1)"), parse_rf("(2n+1)/n")
    cases = [
        (EventuallyPeriodic(pre, cyc), lambda n: pre[0] if n == 1 else cyc[(n - 2) % 3]),
        (RationalTerm(Q2, (f, g)), lambda n: q(f(n), g(n))),
        (PeriodicPlusRational(cyc, (f, g)), lambda n: cyc[(n - 1) % 3] + q(f(n), g(n))),
        (
            Interleaved(RationalTerm(Q2, (f, g)), EventuallyPeriodic(pre, cyc), (True, False)),
            lambda n: q(f(n), g(n)) if n % 2 else (pre[0] if n == 1 else cyc[(n - 2) % 3]),
        ),
        (Spliced(pre, RationalTerm(Q2, (f, g))), lambda n: pre[0] if n == 1 else q(f(n - 1), g(n - 1))),
    ]
    for net, direct in cases:
        nf = normal_form(net)
        for n in range(1, 10_001, 7):
            assert net.term(n) == direct(n) == nf.term(n), (net.kind, n)


def test_limsup_examples():
    assert limsup_abs_dev(periodic([q(0, 0), q(2, 1)]), q(1, 0)).limsup == (1, 1)
    assert limsup_abs_dev(rational(Q2, "1/n", "1/n"), q(0, 0)).limsup == (0, 0)
    assert limsup_abs_dev(periodic([q(0), q(4)]), q(0)).limsup == (4,)
    b = limsup_abs_dev(rational(Q1, "n"), q(0))
    assert b.limsup == (float("inf"),)


def test_infimum_examples():
    assert not infimum(rational(LEX, "1/n", "1/n")).exists
    assert infimum(rational(LEX, "0", "2/n")).value == LexVec(0, 0)
    assert infimum(rational(Q1, "1/n")).value == q(0)
    assert not infimum(rational(Q1, "-n")).exists
    with pytest.raises(PreconditionError):
        infimum(periodic([q(1), q(-1)]))
    with pytest.raises(UndecidableError):
        infimum(FiniteList((q(1), q(0))))


def test_is_decreasing_examples():
    assert is_decreasing(rational(LEX, "1/n", "1/n")) is True
    assert is_decreasing(periodic([q(1), q(-1)])) == FalseAt(2)
    assert is_decreasing(constant(q(3, 4))) is True
    assert is_decreasing(rational(Q1, "(n-5)**2")) == FalseAt(5)
    with pytest.raises(UndecidableError):
        is_decreasing(FiniteList((q(1),)))
    assert is_decreasing(FiniteList((q(2), q(1))), bounded=True) is True


def test_lex_nonnegativity_rule():
    # (n - 3, -1) is lex negative exactly where n - 3 < 0 or n = 3
    net = rational(LEX, "n-3", "-1")
    assert forall_nonneg(net) == FalseAt(1)
    assert forall_nonneg(tail(net, 4)) is True
    assert forall_nonneg(tail(net, 3)) == FalseAt(1)


def test_combinator_examples():
    a = periodic([q(1), q(-1)])
    shifted = tail(a, 2)
    s = net_add(a, shifted)
    for n in range(1, 9):
        assert s.term(n) == a.term(n) + shifted.term(n)
    sub = subseq_arith(a, 2, 1)
    assert isinstance(sub, EventuallyPeriodic) and set(sub.values()) == {q(1)}
    assert tail(rational(Q1, "1/n"), 5).term(1) == q(Fraction(1, 5))


def test_unsupported_combinations():
    f = FiniteList((PwLin.constant(1),))
    with pytest.raises(UnsupportedCombinationError):
        net_add(periodic([PwLin.constant(1)]), Spliced((PwLin.constant(0),), periodic([PwLin.constant(2)])))
    with pytest.raises(SpaceMismatchError):
        net_add(periodic([q(1)]), periodic([q(1, 2)]))
    with pytest.raises(UnsupportedCombinationError):
        tail(net_product_sum(periodic([q(1)]), periodic([q(1)])), 2)
    assert net_add(f, periodic([PwLin.constant(1)])).term(1) == PwLin.constant(2)


def test_pwlin_periodic_nets_combine():
    f = PwLin.from_points({0: 0, 1: 1})
    net = net_abs(periodic([f, -f]))
    assert set(net.values()) == {f}


@settings(max_examples=100)
@given(rational_nets(2), periodic_nets(2), st.integers(1, 3), st.integers(0, 3))
def test_combinators_agree_termwise(a, b, stride, offset):
    checks = [
        (net_add(a, b), lambda n: a.term(n) + b.term(n)),
        (net_sub(a, b), lambda n: a.term(n) - b.term(n)),
        (net_join(a, b), lambda n: a.term(n).join(b.term(n))),
        (net_meet(a, b), lambda n: a.term(n).meet(b.term(n))),
        (net_abs(net_sub(a, b)), lambda n: (a.term(n) - b.term(n)).abs()),
        (net_scale(Fraction(-3, 2), a), lambda n: a.term(n).scale(Fraction(-3, 2))),
        (subseq_arith(net_join(a, b), stride, offset), lambda n: a.term(stride * n + offset).join(b.term(stride * n + offset))),
        (tail(net_add(a, b), offset + 1), lambda n: a.term(n + offset) + b.term(n + offset)),
        (interleave(a, b, (True, False, False)), lambda n: a.term(n) if n % 3 == 1 else b.term(n)),
        (net_linear_map([[1, 2], [0, -1], [3, 0]], a), lambda n: q(a.term(n)[0] + 2 * a.term(n)[1], -a.term(n)[1], 3 * a.term(n)[0])),
    ]
    for net, direct in checks:
        for n in list(range(1, 40)) + [97, 1000]:
            assert net.term(n) == direct(n)


@settings(max_examples=60)
@given(rational_nets(1), rational_nets(1))
def test_scaling_by_a_scalar_net(t, a):
    s = net_scale(t, a)
    for n in range(1, 30):
        assert s.term(n) == a.term(n).scale(t.term(n)[0])


def test_limsup_matches_tail_window_on_random_instances():
    rng = random.Random(7)
    horizon = 10_000
    for i in range(500):
        dim = rng.randint(1, 3)
        x = QVec(tuple(Fraction(rng.randint(-6, 6), 2) for _ in range(dim)))
        if i % 2:
            net = random_periodic(rng, dim)
            tail_terms = [net.term(m) for m in range(horizon // 2, horizon // 2 + len(net.cycle))]
            brute = tuple(max(abs(t[k] - x[k]) for t in tail_terms) for k in range(dim))
            assert limsup_abs_dev(net, x).limsup == brute
        else:
            coords, consts = [], []
            for _ in range(dim):
                c, a, b = Fraction(rng.randint(-6, 6)), Fraction(rng.randint(-6, 6)), rng.randint(0, 3)
                consts.append(c)
                coords.append(RationalFunction.constant(c) + RationalFunction.constant(a) * parse_rf(f"1/(n+{b})"))
            net = RationalTerm(Space("qvec", dim), tuple(coords))
            got = limsup_abs_dev(net, x).limsup
            window = [(net.term(m) - x).abs() for m in (horizon // 2, horizon)]
            for k in range(dim):
                lo, hi = sorted(w[k] for w in window)
                # the deviation is monotone on the window, so the limit lies beyond it
                assert got[k] <= lo or got[k] >= hi
                assert got[k] == abs(consts[k] - x[k])


@given(periodic_nets(2), st.integers(1, 6), st.integers(0, 4))
def test_subsequence_of_periodic_net_is_periodic(net, stride, offset):
    sub = subseq_arith(net, stride, offset)
    assert isinstance(sub, EventuallyPeriodic)
    K = len(net.cycle)
    lcm = K * stride // math.gcd(K, stride)
    assert lcm % len(sub.cycle) == 0
    for n in range(1, 30):
        assert sub.term(n) == net.term(stride * n + offset)


def test_infimum_of_decreasing_rational_nets_is_the_limit():
    rng = random.Random(11)
    for _ in range(200):
        dim = rng.randint(1, 3)
        coords = []
        for _ in range(dim):
            c = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
            a = Fraction(rng.randint(0, 6), rng.randint(1, 3))
            b = rng.randint(0, 4)
            p = rng.choice([1, 2])
            coords.append(RationalFunction.constant(c) + RationalFunction.constant(a) * parse_rf(f"1/(n+{b})**{p}"))
        net = RationalTerm(Space("qvec", dim), tuple(coords))
        assert is_decreasing(net) is True
        assert infimum(net).value == QVec(tuple(rf_limit(f) for f in coords))


@settings(max_examples=25)
@given(rational_nets(2), periodic_nets(2))
def test_tail_suprema_match_brute_force(a, b):
    net = net_add(a, b)
    t = tail_sup(net)
    for n in range(1, 13):
        brute = [net.term(m) for m in range(n, 200)]
        lim = cluster_points(net)
        for k in range(2):
            exact = t.term(n)[k]
            seen = max(v[k] for v in brute)
            assert exact >= seen
            assert exact == seen or exact == max(p[k] for p in lim)
    assert is_decreasing(t) is True


def test_tail_sup_of_unbounded_net_raises():
    with pytest.raises(UnboundedError):
        tail_sup(rational(Q1, "n"))


@given(periodic_nets(2))
def test_coordinate_sup_of_periodic_net(net):
    vals = net.values()
    assert coordinate_sup(net) == tuple(max(v[k] for v in vals) for k in range(2))


def test_product_nets():
    p = ProductNet(rational(Q1, "1/n"), periodic([q(1), q(-1)]), "add")
    assert p.term((2, 3)) == q(Fraction(3, 2))
    assert sorted(cluster_points(p)) == [(-1,), (1,)]
    with pytest.raises(PreconditionError):
        p.term(3)
    m = ProductNet(rational(Q1, "2"), periodic([q(1, 1)]), "mul")
    assert m.term((1, 1)) == q(2, 2)
    assert is_decreasing(net_product_sum(rational(Q1, "1/n"), constant(q(0)))) is True
    assert infimum(net_product_sum(rational(Q1, "1/n"), rational(Q1, "2/n"))).value == q(0)


def test_normal_form_refuses_bounded_and_function_nets():
    with pytest.raises(UndecidableError):
        normal_form(FiniteList((q(1),)))
    with pytest.raises(Exception):
        normal_form(periodic([PwLin.constant(0)]))


def test_negation_and_pwlin_space():
    f = PwLin.from_points({0: 1, 1: 0})
    assert net_neg(periodic([f])).term(1) == -f
    assert periodic([f]).space == PWLIN
