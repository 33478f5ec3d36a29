"""Acceptance gate: one recorded pass/fail line per criterion, printed at the end of the run."""

from __future__ import annotations

import random
import time
from contextlib import contextmanager
from fractions import Fraction

from conftest import record
from strategies import q, random_periodic, random_rf, random_roughness

from roughlattice.convergence import (
    conv_verify,
    monotone_conv,
    order_conv,
    pwlin_norm_conv,
)
from roughlattice.exact import parse_rf, rf_limit
from roughlattice.lattice import LEX, Box, LexVec, PwLin, QVec, Space, pwlin_norm
from roughlattice.nets import (
    FiniteList,
    cluster_points,
    constant,
    net_add,
    periodic,
    rational,
    subseq_arith,
    tail,
)
from roughlattice.oracle import GridSpec, brute_limit_set, brute_membership
from roughlattice.rough import (
    bounded_to_nonempty,
    canonical_certificate,
    cert_from_tail,
    cert_subnet,
    certificate,
    closedness_check,
    cone_closedness_demo,
    convex_combine,
    decide_rc,
    diameter_check,
    equal_limit_sets_check,
    inclusion_check,
    limit_set,
    nonempty_to_bounded,
    o_limit_membership,
    operator_image_check,
    subnet_inclusion_check,
    verify_rc,
)

F = PwLin.from_points({0: 0, Fraction(1, 2): 0, 1: 1})


@contextmanager
def criterion(number: int, title: str):
    notes: list[str] = []
    try:
        yield notes
    except BaseException:
        record(number, title, False, "; ".join(notes))
        raise
    record(number, title, True, "; ".join(notes))


def _bounded_rational(rng, dim):
    coords = []
    for _ in range(dim):
        f = random_rf(rng)
        while f.num.degree > f.den.degree:
            f = random_rf(rng)
        coords.append(f)
    return rational(Space("qvec", dim), *coords)


def test_criterion_1_piecewise_linear_norm():
    with criterion(1, "piecewise-linear family: norm distance (4n+1)/n, rough limit with r = 4") as notes:
        start = time.perf_counter()
        formula = parse_rf("(4n+1)/n")
        family = FiniteList.from_function(lambda n: (F - PwLin.constant(Fraction(1, n))).abs(), 100)
        for n in range(1, 101):
            assert pwlin_norm(family.term(n) - F) == formula(n)
        assert rf_limit(formula) == 4
        zero = constant(PwLin.constant(0))
        v = verify_rc(family, certificate(zero, PwLin.constant(4), F, pwlin_norm_conv()))
        assert v.accepted and v.horizon == 100
        elapsed = time.perf_counter() - start
        notes.append(f"{elapsed:.2f}s")
        assert elapsed < 5


def test_criterion_2_lexicographic_example():
    with criterion(2, "lexicographic plane: no monotone limit, rough limit with r = (1,0)"):
        net = rational(LEX, "1/n", "1/n")
        v = conv_verify(monotone_conv(LEX), net, LexVec(0, 0))
        assert v.status == "reject" and v.reason == "infimum does not exist"
        w = rational(LEX, "0", "2/n")
        cert = certificate(w, LexVec(1, 0), LexVec(0, 0), monotone_conv(LEX))
        assert verify_rc(net, cert).accepted


def test_criterion_3_rough_convergence_is_not_linear():
    with criterion(3, "alternating factors converge roughly, their sum does not"):
        assert decide_rc(periodic([q(1), q(-1)]), q(1), q(2)) is True
        assert decide_rc(periodic([q(-1), q(1)]), q(1), q(2)) is True
        assert decide_rc(periodic([q(2), q(-2)]), q(2), q(2)) is False


def test_criterion_4_diameter_bound():
    with criterion(4, "limit-set diameter at most 2r, tight on constant nets") as notes:
        rng = random.Random(4)
        tight = 0
        for _ in range(1000):
            net, r = random_periodic(rng, 3), random_roughness(rng, 3)
            rep = diameter_check(net, r)
            assert rep.bound_ok and rep.diameter <= r.scale(2)
            k = constant(net.term(1))
            kr = diameter_check(k, r)
            assert kr.tight and kr.diameter == r.scale(2)
            tight += 1
        notes.append(f"1000 nets, {tight} tight constants")


def test_criterion_5_inclusion_in_roughness():
    with criterion(5, "r1 <= r2 gives nested limit sets"):
        rng = random.Random(5)
        for _ in range(500):
            dim = rng.randint(1, 3)
            net = random_periodic(rng, dim)
            r1 = random_roughness(rng, dim)
            r2 = r1 + random_roughness(rng, dim)
            assert inclusion_check(net, r1, r2).included


def test_criterion_6_oracle_equivalence():
    with criterion(6, "exact decisions agree with brute-force tail suprema") as notes:
        start = time.perf_counter()
        rng = random.Random(6)
        for _ in range(200):
            dim = rng.randint(1, 3)
            net, r = random_periodic(rng, dim), random_roughness(rng, dim)
            if rng.random() < 0.5:
                x = net.term(rng.randint(1, 8))
            else:
                x = QVec(tuple(Fraction(rng.randint(-8, 8), 2) for _ in range(dim)))
            horizon = 2 * (len(net.prefix) + 2 * len(net.cycle)) + 2
            assert brute_membership(net, x, r, horizon) == decide_rc(net, x, r)
        for _ in range(50):
            dim = rng.randint(1, 2)
            net, r = random_periodic(rng, dim), random_roughness(rng, dim)
            grid = GridSpec(((-10, 10),) * dim, Fraction(1, 2))
            ls = limit_set(net, r)
            assert brute_limit_set(net, r, grid, 40) == {p for p in grid.points() if p in ls}
        elapsed = time.perf_counter() - start
        notes.append(f"{elapsed:.2f}s")
        assert elapsed < 30


def test_criterion_7_convergence_axioms():
    with criterion(7, "constant nets, arithmetic subnets and tail splices"):
        rng = random.Random(7)
        for i in range(300):
            dim = rng.randint(1, 3)
            sp = Space("qvec", dim)
            r = random_roughness(rng, dim)
            c = QVec(tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(dim)))
            assert verify_rc(constant(c), certificate(constant(sp.zero()), r, c)).accepted
            net = random_periodic(rng, dim)
            if i % 2:
                net = net_add(net, _bounded_rational(rng, dim))
            ls = limit_set(net, r)
            x = ls.box.upper if not ls.empty else QVec(cluster_points(net)[0])
            if ls.empty:
                r = bounded_to_nonempty(net_add(net, -x)).roughness
            cert = canonical_certificate(net, x, r)
            assert verify_rc(net, cert).accepted
            stride, offset = rng.randint(1, 5), rng.randint(0, 6)
            sub = subseq_arith(net, stride, offset)
            assert verify_rc(sub, cert_subnet(cert, stride, offset)).accepted
            n0 = rng.randint(2, 8)
            spliced = cert_from_tail(net, n0, canonical_certificate(tail(net, n0), x, r))
            assert verify_rc(net, spliced).accepted


def test_criterion_8_limit_set_theorems():
    with criterion(8, "subnets, convexity, closedness, boundedness, perturbation, positive operators, order limits"):
        rng = random.Random(8)
        two = periodic([q(0, 0), q(2, 1)])
        r = q(1, 1)
        for stride in range(1, 5):
            for offset in range(0, 4):
                assert subnet_inclusion_check(two, stride, offset, r).included
        assert subnet_inclusion_check(periodic([q(1), q(-1)]), 2, 1, q(1)).included
        for _ in range(100):
            gamma = Fraction(rng.randint(0, 60), 60)
            assert convex_combine(two, q(1, 0), r, q(1, 1), r, gamma)
            assert convex_combine(two, q(1, 0), q(1, 1), q(1, 2), q(1, 2), gamma)
        assert closedness_check(two, r, rational(Space("qvec", 2), "1", "1 - 1/n")).member
        ne = bounded_to_nonempty(two)
        assert ne.verified
        b = nonempty_to_bounded(two, certificate(constant(q(0, 0)), ne.roughness, ne.member))
        assert b == ne.roughness
        lex_cert = certificate(rational(LEX, "0", "2/n"), LexVec(1, 0), LexVec(0, 0), monotone_conv(LEX))
        assert nonempty_to_bounded(rational(LEX, "1/n", "1/n"), lex_cert) == LexVec(1, 2)
        for k in range(1, 6):
            pert = net_add(two, rational(Space("qvec", 2), f"{k}/n", f"-1/({k}n)"))
            assert equal_limit_sets_check(two, pert, r).equal
        for size in (2, 3):
            for _ in range(50):
                T = [[Fraction(rng.randint(0, 6), rng.randint(1, 3)) for _ in range(size)] for _ in range(size)]
                net = random_periodic(rng, size)
                rr = random_roughness(rng, size)
                ls = limit_set(net, rr)
                if ls.empty:
                    rr = bounded_to_nonempty(net).roughness
                    x = QVec((0,) * size)
                else:
                    x = rng.choice(ls.box.corners())
                assert operator_image_check(T, net, x, rr)
        conv_net = rational(Space("qvec", 2), "1/n", "(n-1)/(n+1)")
        for _ in range(100):
            rr = random_roughness(rng, 2)
            assert o_limit_membership(conv_net, q(0, 1), rr).accepted


def test_criterion_9_non_uniqueness_and_cone():
    with criterion(9, "constant θ net has the box [-r, r]; -r lies outside the positive cone"):
        r = q(1, 1)
        ls = limit_set(constant(q(0, 0)), r)
        assert ls.box == Box.make(-r, r) and ls.box.lower != ls.box.upper
        rep = cone_closedness_demo(r)
        assert rep.counterexample == -r and not rep.counterexample.is_positive()
        assert decide_rc(constant(q(0, 0)), -r, r)
        assert order_conv(Space("qvec", 2)).has("lattice")
