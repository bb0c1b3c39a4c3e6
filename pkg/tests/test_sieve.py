import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from sievelab import farey, sieve
from sievelab.arith import DomainError
from sievelab.sieve import PrimeWindow, WeightFunction, phi1, phi2, square_sieve_sides


def test_bump_examples():
    assert phi1(2) == 2
    assert phi1(0.4) == 0
    assert phi2(-4) == 2
    assert phi2(10.5) == 0


def test_bump_shapes():
    x = np.linspace(-12, 12, 4801)
    assert np.all(phi2(x) >= 0)
    assert np.all(phi2(x[np.abs(x) > 10]) == 0)
    assert np.all(phi2(x[np.abs(x) <= 4]) >= 1)
    y = np.linspace(0, 6, 2401)
    assert np.all(phi1(y[(y < 0.5) | (y > 5)]) == 0)
    assert np.all(phi1(y[(y >= 1) & (y <= 4)]) == 2)


def test_prime_window():
    pw = PrimeWindow(10, 1)
    assert pw.primes == (11, 13, 17, 19)
    assert PrimeWindow(10, 13 * 19).primes == (11, 17)
    assert PrimeWindow(3.5, 1).primes == (5, 7)
    assert PrimeWindow(3.5, 35).P == 0


def test_square_sieve_examples():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sieve.SieveHypothesisWarning)
        pw = PrimeWindow(10, 1)
        s = square_sieve_sides(WeightFunction.indicator(1, 100), pw)
        assert s.lhs == 10
        zero = square_sieve_sides(WeightFunction(np.arange(1, 50), np.zeros(49)), pw)
        assert (zero.lhs, zero.term1, zero.term2) == (0, 0, 0)
        single = square_sieve_sides(WeightFunction(np.array([4]), np.array([1.0])), pw)
        assert single.lhs == 1 and single.term1 == pytest.approx(1 / pw.P)


def test_square_sieve_term2_by_jacobi():
    from sievelab.arith import jacobi

    pw = PrimeWindow(10, 1)
    wf = WeightFunction.indicator(1, 50)
    s = square_sieve_sides(wf, pw)
    ref = sum(
        abs(sum(jacobi(n, p1 * p2) for n in range(1, 51)))
        for p1 in pw.primes
        for p2 in pw.primes
        if p1 != p2
    )
    assert s.term2 == pytest.approx(ref / pw.P**2)
    assert s.hypothesis_ok


def test_hypothesis_warning_and_strict():
    pw = PrimeWindow(3, 1)
    wf = WeightFunction.indicator(1, 100)
    with pytest.warns(sieve.SieveHypothesisWarning):
        s = square_sieve_sides(wf, pw)
    assert not s.hypothesis_ok
    with pytest.raises(DomainError):
        square_sieve_sides(wf, pw, strict=True)


def test_window_errors():
    with pytest.raises(DomainError):
        square_sieve_sides(WeightFunction.indicator(1, 5), PrimeWindow(1.5, 1))
    with pytest.raises(DomainError):
        square_sieve_sides(WeightFunction.indicator(1, 5), PrimeWindow(10, 11 * 13 * 17 * 19))


def test_weight_validation():
    with pytest.raises(ValueError):
        WeightFunction(np.array([1, 2]), np.array([1.0, -1.0]))
    with pytest.raises(ValueError):
        WeightFunction(np.array([0, 1]), np.array([1.0, 1.0]))


def test_weighted_count_examples():
    bumps = sieve.make_bumps()
    v = sieve.weighted_count(1, 9, 2, Fraction(1, 1000), bumps)
    assert 0 < v < math.inf
    # b/r = 1/2 with tiny delta: q^2/2 is never within 10 Q^2 delta of an integer for odd q
    small = sieve.weighted_count(1, 2, 2, Fraction(1, 10**6), bumps)
    assert small == sieve.weighted_count(1, 2, 2, Fraction(1, 10**6), bumps)
    assert sieve.weighted_count(1, 7, 1, Fraction(1, 10**4), sieve.zero_bumps()) == 0


def test_weighted_count_empty_inner_support():
    # for b/r = 1/3, q^2/3 is an integer or 1/3 away from one; radius 10 Q^2 delta < 1/3 removes the latter
    bumps = sieve.make_bumps()
    Q, delta = 2, Fraction(1, 10**5)
    brute = 0.0
    for q in range(-5, 6):
        if q % 3 == 0:
            brute += float(phi1(q * q / 4)) * float(phi2(0))
    assert sieve.weighted_count(1, 3, Q, delta, bumps) == pytest.approx(brute)


def test_majorization():
    bumps = sieve.make_bumps()
    from sievelab.verify import minor_arc_tuples

    for Q, delta, _alpha, b, r in minor_arc_tuples(12, seed=5):
        count = farey.count_P(farey.CountWindow(Q, 2 * delta, Fraction(b, r)))
        assert count <= sieve.weighted_count(b, r, Q, delta, bumps)


def test_estimate_zero_bumps():
    est = sieve.sieve_estimate_P(3, 7, 4, Fraction(1, 256), 10, sieve.zero_bumps())
    assert (est.estimate, est.term1, est.term2) == (0, 0, 0)


def test_estimate_empty_window():
    with pytest.raises(DomainError):
        sieve.sieve_estimate_P(1, 11 * 13 * 17 * 19, 4, Fraction(1, 256), 10, sieve.make_bumps())


def test_estimate_matches_square_sieve_sides():
    bumps = sieve.make_bumps()
    b, r, Q, delta, R = 5, 13, 4, Fraction(1, 256), 4
    est = sieve.sieve_estimate_P(b, r, Q, delta, R, bumps)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sieve.SieveHypothesisWarning)
        sides = square_sieve_sides(sieve.sieve_weights(b, r, Q, delta, bumps), PrimeWindow(R, r))
    assert est.term1 == pytest.approx(sides.term1)
    assert est.term2 == pytest.approx(sides.term2)


@pytest.mark.parametrize("Q, delta, R", [(8, Fraction(1, 1024), 2), (16, Fraction(1, 4096), 4), (5, 1, 25)])
def test_choose_R(Q, delta, R):
    assert sieve.choose_R(Q, delta) == R


def test_choose_R_warns_small():
    with pytest.warns(sieve.SieveHypothesisWarning):
        sieve.choose_R(2, Fraction(1, 1024))
