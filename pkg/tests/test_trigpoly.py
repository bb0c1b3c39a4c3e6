import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sievelab import trigpoly
from sievelab.rng import SplitMix64
from sievelab.trigpoly import TrigPolynomial, eval_S, lhs_single_modulus, lhs_square_moduli, norm_Z


def poly_from(values, M=0):
    return TrigPolynomial(M, np.array(values, dtype=np.complex128))


def brute_square_lhs(poly, qs):
    total = 0.0
    for q in qs:
        for a in range(1, q * q + 1):
            if math.gcd(a, q) == 1:
                total += abs(trigpoly.naive_S(poly, a / (q * q))) ** 2
    return total


pm1 = st.lists(st.sampled_from([-1.0, 1.0]), min_size=1, max_size=64)


def test_eval_examples():
    assert eval_S(trigpoly.ones(8), 0) == 8
    assert abs(eval_S(trigpoly.ones(5), Fraction(1, 5))) < 1e-12
    pm = trigpoly.point_mass(100, 0.37)
    assert abs(eval_S(pm, 0.37) - 100) < 1e-9


def test_norm_examples():
    assert norm_Z(trigpoly.ones(8)) == 8
    assert norm_Z(poly_from([1, 2, 3])) == 14
    assert norm_Z(poly_from([0, 0])) == 0


def test_lhs_examples():
    assert lhs_square_moduli(trigpoly.ones(1), 2) == pytest.approx(3, abs=1e-12)
    assert lhs_square_moduli(poly_from([0] * 10), 5) == 0
    assert lhs_square_moduli(trigpoly.ones(4), 1) == pytest.approx(16, abs=1e-12)


def test_single_modulus_examples():
    assert lhs_single_modulus(trigpoly.ones(1), 7) == pytest.approx(7)
    a = poly_from([1, 2j, -3])
    assert lhs_single_modulus(a, 1) == pytest.approx(abs(1 + 2j - 3) ** 2)
    assert lhs_single_modulus(trigpoly.ones(4), 4) == pytest.approx(16)


def test_empty_poly_rejected():
    with pytest.raises(ValueError):
        poly_from([])


def test_lhs_against_brute_force_with_offset():
    rng = SplitMix64(5)
    poly = trigpoly.random_unimodular(40, rng, M=-17)
    assert lhs_square_moduli(poly, 4) == pytest.approx(brute_square_lhs(poly, range(1, 5)), rel=1e-10)


def test_large_offset_no_overflow():
    poly = trigpoly.ones(10, M=2**61)
    exact = eval_S(poly, Fraction(1, 9))
    ref = sum(complex(math.cos(2 * math.pi * ((n % 9) / 9)), math.sin(2 * math.pi * ((n % 9) / 9))) for n in range(2**61 + 1, 2**61 + 11))
    assert abs(exact - ref) < 1e-12


@settings(max_examples=40, deadline=None)
@given(pm1, st.integers(1, 32), st.integers(-50, 50))
def test_parseval_per_modulus(values, q, M):
    poly = poly_from(values, M)
    assert lhs_single_modulus(poly, q) == pytest.approx(trigpoly.parseval_oracle(poly, q), rel=1e-9, abs=1e-9)


def test_per_modulus_large_sieve():
    for t in range(200):
        g = SplitMix64.derive(99, t)
        N = 1 + g.randbelow(256)
        q = 1 + g.randbelow(64)
        poly = trigpoly.random_pm1(N, g)
        assert lhs_single_modulus(poly, q) <= (q + N) * norm_Z(poly) + 1e-9


@settings(max_examples=30, deadline=None)
@given(pm1, st.integers(1, 6))
def test_dyadic_blocks_sum_to_full(values, k):
    poly = poly_from(values)
    Q = 2**k
    blocks = lhs_square_moduli(poly, 1) + sum(lhs_square_moduli(poly, 2**j, "dyadic") for j in range(k))
    assert blocks == pytest.approx(lhs_square_moduli(poly, Q), rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 10**4), st.integers(1, 500), st.integers(0, 499), st.integers(0, 2**32))
def test_exact_phase_matches_naive(N, den, num, seed):
    poly = trigpoly.random_pm1(N, SplitMix64(seed))
    alpha = Fraction(num % den, den)
    assert abs(eval_S(poly, alpha) - trigpoly.naive_S(poly, float(alpha))) < 1e-6


def test_sequence_file_round_trip(tmp_path):
    poly = trigpoly.random_unimodular(12, SplitMix64(1))
    path = tmp_path / "seq.txt"
    trigpoly.save_sequence(poly, path)
    back = trigpoly.load_sequence(path)
    assert np.array_equal(back.coeffs, poly.coeffs)


def test_sequence_file_comments_and_errors(tmp_path):
    path = tmp_path / "seq.txt"
    path.write_text("# header\n1 0\n\n0.5 -0.5  # trailing\n")
    poly = trigpoly.load_sequence(path)
    assert list(poly.coeffs) == [1, 0.5 - 0.5j]
    path.write_text("1 2 3\n")
    with pytest.raises(ValueError):
        trigpoly.load_sequence(path)


def test_moduli_range_rejects_unknown():
    with pytest.raises(ValueError):
        trigpoly.moduli_range(4, "odd")
