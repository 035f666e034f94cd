import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sinrbatch.algebra import (
    EXACT,
    FLOAT64,
    Polynomial,
    RationalFunction,
    ValueTable,
    frac_add,
    frac_eval_batch,
    frac_sum,
    poly_eval_batch,
    poly_interpolate,
    poly_mul,
)
from sinrbatch.algebra import fpoly, zpoly
from sinrbatch.errors import DuplicatePoint, EmptyInput, PoleAtQuery

from support import horner, schoolbook

ints = st.integers(-10**6, 10**6)
polys = st.lists(ints, max_size=65).map(Polynomial)


def P(*c):
    return Polynomial(list(c))


def rf(num, den, backend=EXACT):
    return RationalFunction(Polynomial(num, backend), Polynomial(den, backend))


def rand_fracs(rng, n, lo=-1.0, hi=1.0, sep=1e-3, avoid=()):
    out = []
    while len(out) < n:
        v = Fraction(round(rng.uniform(lo, hi), 6))
        if all(abs(v - u) >= sep for u in list(avoid) + out):
            out.append(v)
    return out


# -- poly_mul ---------------------------------------------------------------------


def test_mul_hand_expansion():
    assert poly_mul(P(1, 2), P(3, 1)) == P(3, 7, 2)


def test_mul_by_zero():
    z = poly_mul(P(1, 2, 3), Polynomial([]))
    assert z.is_zero() and z.degree == -1 and z.coeffs == ()


def test_mul_degree_50_matches_schoolbook_exact():
    rng = random.Random(1)
    for _ in range(5):
        a = [rng.randint(-10**9, 10**9) for _ in range(51)]
        b = [rng.randint(-10**9, 10**9) for _ in range(51)]
        got = poly_mul(Polynomial(a), Polynomial(b))
        assert list(got.coeffs) == schoolbook(a, b)
        assert got.degree == 100


def test_mul_degree_50_float_per_coefficient():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(20):
        a = rng.uniform(-1, 1, 51)
        b = rng.uniform(-1, 1, 51)
        got = poly_mul(Polynomial(a, FLOAT64), Polynomial(b, FLOAT64)).coeffs
        ref = schoolbook([Fraction(x) for x in a], [Fraction(x) for x in b])
        worst = max(worst, max(abs(Fraction(g) - r) / abs(r) for g, r in zip(got, ref)))
    assert worst <= 1e-12


def test_mul_float_fft_route_large_degree():
    rng = np.random.default_rng(3)
    n = fpoly.FFT_CUTOFF + 100
    a = rng.integers(-5, 6, n).astype(float)
    b = rng.integers(-5, 6, n).astype(float)
    got = fpoly.mul(a, b)
    # integer inputs: the exact product is known and small
    ref = np.convolve(a.astype(np.int64), b.astype(np.int64))
    assert np.max(np.abs(got - ref)) < 1e-6


def test_mul_exact_kronecker_route_with_negative_and_huge():
    rng = random.Random(4)
    a = [rng.randint(-2**200, 2**200) for _ in range(40)]
    b = [rng.randint(-2**5, 2**5) for _ in range(30)]
    assert zpoly.mul(a, b) == schoolbook(a, b)


# -- poly_eval_batch ---------------------------------------------------------------


def test_eval_cube():
    assert poly_eval_batch(P(0, 0, 0, 1), [-1, 0, 2]) == [-1, 0, 8]


def test_eval_constant():
    assert poly_eval_batch(P(5), [Fraction(1, 3), 7, -2]) == [5, 5, 5]


def test_eval_degree_200_exact_matches_horner():
    rng = random.Random(5)
    a = [Fraction(rng.randint(-10**6, 10**6), 10**6) for _ in range(201)]
    xs = [Fraction(rng.randint(-10**6, 10**6), 10**6) for _ in range(300)]
    assert poly_eval_batch(Polynomial(a), xs) == [horner(a, x) for x in xs]


def test_eval_degree_200_float_within_tau():
    rng = np.random.default_rng(5)
    a = rng.uniform(-1, 1, 201)
    xs = rng.uniform(-1, 1, 300)
    got = poly_eval_batch(Polynomial(a, FLOAT64), xs)
    ref = np.array([float(horner([Fraction(c) for c in a], Fraction(x))) for x in xs])
    assert np.max(np.abs(got - ref) / np.abs(ref)) <= FLOAT64.tau


def test_eval_empty_points():
    assert poly_eval_batch(P(1, 2), []) == []


# -- poly_interpolate ----------------------------------------------------------------


def test_interpolate_line():
    assert poly_interpolate([0, 1], [1, 3]) == P(1, 2)


def test_interpolate_parabola():
    assert poly_interpolate(ValueTable((-1, 0, 1), (1, 0, 1))) == P(0, 0, 1)


def test_interpolate_duplicate_point():
    with pytest.raises(DuplicatePoint):
        poly_interpolate([0, 1, 0], [1, 2, 3])


def test_interpolate_round_trip_degree_100():
    rng = random.Random(6)
    a = Polynomial([Fraction(rng.randint(-999, 999), rng.randint(1, 99)) for _ in range(101)])
    xs = [Fraction(i, 7) - 3 for i in range(101)]
    assert poly_interpolate(xs, poly_eval_batch(a, xs)) == a


# -- frac_add / frac_sum ----------------------------------------------------------


def test_frac_add_partial_fractions():
    s = frac_add(rf([1], [-1, 1]), rf([1], [1, 1]))
    assert s.num == P(0, 2) and s.den == P(-1, 0, 1)


def test_frac_add_zero():
    f = rf([1, 2], [3, 0, 1])
    g = frac_add(f, rf([], [1]))
    assert g.num == f.num and g.den == f.den


def test_frac_add_pointwise():
    rng = random.Random(7)
    for _ in range(10):
        f = rf([rng.randint(-9, 9) for _ in range(3)], [rng.randint(1, 9), 0, 1])
        g = rf([rng.randint(-9, 9) for _ in range(2)], [rng.randint(1, 9), 1, 1])
        h = frac_add(f, g)
        for _ in range(10):
            x = Fraction(rng.randint(-100, 100), 7)
            assert h(x) == f(x) + g(x)


def test_frac_sum_two_terms():
    s = frac_sum([rf([1], [-1, 1]), rf([1], [1, 1])])
    assert s.num == P(0, 2) and s.den == P(-1, 0, 1)


def test_frac_sum_identical_terms():
    n = 13
    s = frac_sum([rf([1], [0, 1])] * n)
    for x0 in (Fraction(1), Fraction(-3, 2), Fraction(7, 5)):
        assert s(x0) == n / x0


def test_frac_sum_64_inverse_squares():
    rng = random.Random(8)
    sites = [Fraction(rng.randint(-10**6, 10**6), 10**6) for _ in range(64)]
    fs = [rf([1], [s * s, -2 * s, 1]) for s in sites]
    tot = frac_sum(fs)
    for x in (Fraction(5, 2), Fraction(-3), Fraction(11, 10), Fraction(-13, 10), Fraction(2)):
        assert tot(x) == sum(1 / (x - s) ** 2 for s in sites)


def test_frac_sum_empty():
    with pytest.raises(EmptyInput):
        frac_sum([])


# -- frac_eval_batch -------------------------------------------------------------------


def test_frac_eval_odd_symmetry():
    assert frac_eval_batch([rf([1], [-1, 1]), rf([1], [1, 1])], [0]) == [0]


def test_frac_eval_single_term():
    got = frac_eval_batch([rf([1], [0, 0, 1])], [1, 2])
    assert got == [1, Fraction(1, 4)]


def test_frac_eval_float_single_term():
    got = frac_eval_batch([rf([1], [0, 0, 1], FLOAT64)], np.array([1.0, 2.0]))
    assert np.allclose(got, [1.0, 0.25], rtol=1e-15)


def test_frac_eval_128_exact_double_loop():
    rng = random.Random(9)
    sites = rand_fracs(rng, 128)
    qs = rand_fracs(rng, 128, avoid=sites)
    fs = [rf([1], [s * s, -2 * s, 1]) for s in sites]
    assert frac_eval_batch(fs, qs) == [sum(1 / (q - s) ** 2 for s in sites) for q in qs]


def test_frac_eval_128_float_within_tau():
    rng = random.Random(9)
    sites = rand_fracs(rng, 128)
    qs = rand_fracs(rng, 128, avoid=sites)
    fs = [rf([1], [float(s * s), float(-2 * s), 1.0], FLOAT64) for s in sites]
    got = frac_eval_batch(fs, np.array([float(q) for q in qs]))
    ref = np.array([float(sum(1 / (q - s) ** 2 for s in sites)) for q in qs])
    assert np.max(np.abs(got - ref) / ref) <= FLOAT64.tau


def test_frac_eval_pole_exact():
    with pytest.raises(PoleAtQuery) as info:
        frac_eval_batch([rf([1], [-1, 1]), rf([1], [1, 1])], [Fraction(1, 2), 1])
    assert info.value.where == 1


def test_frac_eval_pole_float():
    with pytest.raises(PoleAtQuery):
        frac_eval_batch([rf([1], [-1, 1], FLOAT64)], np.array([0.0, 1.0]))


def test_rational_function_rejects_zero_den():
    with pytest.raises(ZeroDivisionError):
        rf([1], [])


def test_float_polynomial_roundtrip_small():
    xs = np.array([-0.5, 0.0, 0.25, 0.75])
    a = Polynomial([1.0, -2.0, 0.5, 3.0], FLOAT64)
    b = poly_interpolate(xs, poly_eval_batch(a, xs), FLOAT64)
    assert np.allclose(b.coeffs, a.coeffs, atol=1e-12)


# -- properties ------------------------------------------------------------------------


@given(polys, polys)
def test_mul_commutative(a, b):
    assert poly_mul(a, b) == poly_mul(b, a)


@given(polys, polys, polys)
def test_mul_associative(a, b, c):
    assert poly_mul(poly_mul(a, b), c) == poly_mul(a, poly_mul(b, c))


@given(polys, polys, polys)
def test_mul_distributive(a, b, c):
    assert poly_mul(a, b + c) == poly_mul(a, b) + poly_mul(a, c)


@given(polys, polys, st.fractions(max_denominator=1000))
def test_evaluation_homomorphism(a, b, x):
    assert poly_mul(a, b)(x) == a(x) * b(x)


@given(st.lists(st.fractions(max_denominator=50), min_size=1, max_size=40))
def test_interpolate_eval_round_trip(cs):
    a = Polynomial(cs)
    n = max(a.degree + 1, 1)
    xs = [Fraction(i, 3) for i in range(n)]
    assert poly_interpolate(xs, poly_eval_batch(a, xs)) == a


@given(st.lists(st.tuples(st.integers(-50, 50), st.integers(1, 20)), min_size=1, max_size=24),
       st.lists(st.fractions(min_value=3, max_value=9, max_denominator=30), min_size=1, max_size=6))
def test_frac_sum_equivalence_exact(params, xs):
    # terms c / (x - s) with |s| <= 2.5 never vanish at x >= 3
    fs = [rf([c], [Fraction(-s, 20), 1]) for s, c in [((a * 2) % 101 - 50, c) for a, c in params]]
    tot = frac_sum(fs)
    assert frac_eval_batch(tot, xs) == [sum(f(x) for f in fs) for x in xs]


@given(st.lists(st.integers(1, 4), min_size=1, max_size=20))
def test_frac_sum_degree_bound(degs):
    fs = [rf([1], [1] * d + [1]) for d in degs]
    assert frac_sum(fs).den.degree <= sum(degs)


@given(st.integers(1, 512), st.integers(0, 2**31))
def test_frac_sum_equivalence_float(n, seed):
    # inputs in [-1, 1] with separation 1e-3, tau = 1e-6
    rng = random.Random(seed)
    sites = rand_fracs(rng, n)
    qs = rand_fracs(rng, 5, avoid=sites)
    fs = [rf([1], [float(-s), 1.0], FLOAT64) for s in sites]
    got = frac_eval_batch(fs, np.array([float(q) for q in qs]))
    ref = np.array([float(sum(1 / (q - s) for s in sites)) for q in qs])
    assert np.all(np.abs(got - ref) <= FLOAT64.tau * np.abs(ref))
