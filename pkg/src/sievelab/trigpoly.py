"""Trigonometric polynomials S(alpha) = sum a_n e(n alpha) and the sieve sums."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .rng import SplitMix64

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TrigPolynomial:
    """Coefficients a_{M+1}, ..., a_{M+N} of S(alpha)."""

    M: int
    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.complex128).ravel()
        if arr.size < 1:
            raise ValueError("a trigonometric polynomial needs N >= 1 coefficients")
        object.__setattr__(self, "coeffs", arr)

    @property
    def N(self) -> int:
        return int(self.coeffs.size)

    def indices(self) -> np.ndarray:
        return np.arange(self.M + 1, self.M + self.N + 1, dtype=np.int64)


# -- coefficient generators -------------------------------------------------


def ones(N: int, M: int = 0) -> TrigPolynomial:
    return TrigPolynomial(M, np.ones(N, dtype=np.complex128))


def random_pm1(N: int, rng: SplitMix64, M: int = 0) -> TrigPolynomial:
    return TrigPolynomial(M, np.array([rng.sign() for _ in range(N)], dtype=np.complex128))


def random_unimodular(N: int, rng: SplitMix64, M: int = 0) -> TrigPolynomial:
    phases = np.array([rng.random() for _ in range(N)])
    return TrigPolynomial(M, np.exp(TWO_PI * 1j * phases))


def point_mass(N: int, beta: float, M: int = 0) -> TrigPolynomial:
    """a_n = e(-n beta): the sum S peaks at alpha = beta."""
    n = np.arange(M + 1, M + N + 1, dtype=np.float64)
    return TrigPolynomial(M, np.exp(-TWO_PI * 1j * n * beta))


def load_sequence(path: str | Path, M: int = 0) -> TrigPolynomial:
    """Read one coefficient per line as ``re im``; blank lines and '#' ignored."""
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 're im', got {line!r}")
            values.append(complex(float(parts[0]), float(parts[1])))
    return TrigPolynomial(M, np.array(values, dtype=np.complex128))


def save_sequence(poly: TrigPolynomial, path: str | Path) -> None:
    with open(path, "w") as fh:
        for a in poly.coeffs:
            fh.write(f"{float(a.real)!r} {float(a.imag)!r}\n")


# -- evaluation -------------------------------------------------------------


def _residues(n: np.ndarray, num: int, den: int) -> np.ndarray:
    """(n * num) mod den, exactly, falling back to Python ints on overflow risk."""
    bound = (int(np.abs(n).max()) + 1) * (abs(num) + 1)
    if bound < 2**62:
        return (n * num) % den
    return np.array([(int(k) * num) % den for k in n], dtype=np.int64)


def eval_S(poly: TrigPolynomial, alpha) -> complex:
    """S(alpha). Rational alpha has its phases reduced mod 1 exactly."""
    n = poly.indices()
    if isinstance(alpha, Fraction):
        den = alpha.denominator
        k = _residues(n, alpha.numerator, den)
        phase = np.exp(TWO_PI * 1j * k / den)
    else:
        phase = np.exp(TWO_PI * 1j * n * float(alpha))
    return complex(np.dot(poly.coeffs, phase))


def norm_Z(poly: TrigPolynomial) -> float:
    return math.fsum(np.abs(poly.coeffs) ** 2)


def _fold(poly: TrigPolynomial, D: int) -> np.ndarray:
    """c_j = sum of a_n over n = j (mod D); S(a/D) = sum_j c_j e(ja/D)."""
    idx = poly.indices() % D
    re = np.bincount(idx, weights=poly.coeffs.real, minlength=D)
    im = np.bincount(idx, weights=poly.coeffs.imag, minlength=D)
    return re + 1j * im


def values_at_denominator(poly: TrigPolynomial, D: int, numerators) -> np.ndarray:
    """S(a/D) for each a in ``numerators``, with exact integer phases."""
    a = np.asarray(numerators, dtype=np.int64)
    c = _fold(poly, D)
    roots = np.exp(TWO_PI * 1j * np.arange(D) / D)
    j = np.arange(D, dtype=np.int64)
    return roots[np.outer(a, j) % D] @ c


def _coprime_residues(q: int, D: int) -> np.ndarray:
    a = np.arange(1, D + 1, dtype=np.int64)
    return a[np.gcd(a, q) == 1]


def lhs_single_modulus(poly: TrigPolynomial, q: int, coprime: bool = False) -> float:
    """Sum over a = 1..q of |S(a/q)|^2 (only (a, q) = 1 when ``coprime``)."""
    if q < 1:
        raise ValueError("q must be >= 1")
    a = _coprime_residues(q, q) if coprime else np.arange(1, q + 1)
    return math.fsum(np.abs(values_at_denominator(poly, q, a)) ** 2)


def moduli_range(Q: int, range_: str) -> range:
    if range_ == "full":
        return range(1, Q + 1)
    if range_ == "dyadic":
        return range(Q + 1, 2 * Q + 1)
    raise ValueError(f"range must be 'full' or 'dyadic', got {range_!r}")


def lhs_square_moduli(poly: TrigPolynomial, Q: int, range_: str = "full") -> float:
    """Sum over q in range of sum over (a, q) = 1, a <= q^2 of |S(a/q^2)|^2."""
    if Q < 1:
        raise ValueError("Q must be >= 1")
    per_q = []
    for q in moduli_range(Q, range_):
        D = q * q
        vals = values_at_denominator(poly, D, _coprime_residues(q, D))
        per_q.append(math.fsum(np.abs(vals) ** 2))
    return math.fsum(per_q)


def parseval_oracle(poly: TrigPolynomial, q: int) -> float:
    """q * sum over m = n (mod q) of a_m conj(a_n), by a plain double loop."""
    a = list(poly.coeffs)
    idx = list(range(poly.M + 1, poly.M + poly.N + 1))
    total = 0j
    for i, m in enumerate(idx):
        for j, n in enumerate(idx):
            if (m - n) % q == 0:
                total += a[i] * a[j].conjugate()
    return q * total.real


def naive_S(poly: TrigPolynomial, alpha: float) -> complex:
    """Unreduced floating-point evaluation, for cross-checks."""
    return sum(
        a * cmath.exp(TWO_PI * 1j * n * alpha)
        for a, n in zip(poly.coeffs, range(poly.M + 1, poly.M + poly.N + 1))
    )
