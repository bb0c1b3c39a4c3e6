"""Smooth bump weights and the square sieve as an evaluable inequality."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .arith import DomainError, legendre_table, primes_in
from .farey import exact


class SieveHypothesisWarning(UserWarning):
    """A sieve hypothesis (support below e^P, R >= 2) fails at small scale."""


def _f(t):
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smooth_step(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1."""
    a = _f(t)
    b = _f(1.0 - np.asarray(t, dtype=np.float64))
    return a / (a + b)


def phi1(x):
    x = np.asarray(x, dtype=np.float64)
    return 2.0 * smooth_step((x - 0.5) / 0.5) * smooth_step(5.0 - x)


def phi2(x):
    x = np.asarray(x, dtype=np.float64)
    return 2.0 * smooth_step((x + 10.0) / 6.0) * smooth_step((10.0 - x) / 6.0)


@dataclass(frozen=True)
class BumpPair:
    phi1: Callable
    phi2: Callable
    support1: tuple[float, float] = (0.5, 5.0)
    support2: tuple[float, float] = (-10.0, 10.0)


def make_bumps() -> BumpPair:
    """Phi_1 on [1/2, 5] and Phi_2 on [-10, 10], each equal to 2 on its plateau."""
    return BumpPair(phi1, phi2)


def zero_bumps() -> BumpPair:
    def zero(x):
        return np.zeros_like(np.asarray(x, dtype=np.float64))

    return BumpPair(zero, zero)


@dataclass(frozen=True)
class PrimeWindow:
    """Primes R < p <= 2R not dividing r."""

    R: float
    r: int
    primes: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if self.R <= 0 or self.r < 1:
            raise ValueError("need R > 0 and r >= 1")
        ps = tuple(p for p in primes_in(self.R, 2 * self.R) if self.r % p)
        object.__setattr__(self, "primes", ps)

    @property
    def P(self) -> int:
        return len(self.primes)


@dataclass(frozen=True)
class WeightFunction:
    """Nonnegative weight with finite support; w(n) for n in ``n``, zero elsewhere."""

    n: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        n = np.asarray(self.n, dtype=np.int64)
        w = np.asarray(self.w, dtype=np.float64)
        if n.shape != w.shape:
            raise ValueError("support and values differ in shape")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        if np.any(w[n == 0] != 0):
            raise ValueError("w(0) must vanish")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "w", w)

    @classmethod
    def indicator(cls, lo: int, hi: int) -> "WeightFunction":
        n = np.arange(lo, hi + 1, dtype=np.int64)
        return cls(n, (n != 0).astype(np.float64))

    def max_abs_support(self) -> int:
        nz = self.n[self.w > 0]
        return int(np.abs(nz).max()) if nz.size else 0


def character_matrix(n: np.ndarray, primes) -> np.ndarray:
    """X[i, k] = (n_i / p_k), Legendre symbols via lookup tables."""
    X = np.empty((n.size, len(primes)), dtype=np.float64)
    for k, p in enumerate(primes):
        X[:, k] = legendre_table(p)[n % p]
    return X


def pair_sums(wf: WeightFunction, primes) -> np.ndarray:
    """G[j, k] = sum_n w(n) (n / p_j p_k)."""
    X = character_matrix(wf.n, primes)
    return X.T @ (wf.w[:, None] * X)


@dataclass(frozen=True)
class SieveSides:
    lhs: float
    term1: float
    term2: float
    P: int
    hypothesis_ok: bool

    @property
    def rhs(self) -> float:
        return self.term1 + self.term2


def _check_window(pw: PrimeWindow) -> None:
    if pw.P == 0:
        raise DomainError(f"prime window (R={pw.R}, r={pw.r}) is empty")
    if 2 in pw.primes:
        raise DomainError("prime window contains 2; Jacobi symbols need R >= 2")


def square_sieve_sides(wf: WeightFunction, pw: PrimeWindow, strict: bool = False) -> SieveSides:
    """Both sides of the square sieve by direct summation over the support."""
    _check_window(pw)
    P = pw.P
    ok = wf.max_abs_support() < math.exp(P)
    if not ok:
        msg = f"support reaches {wf.max_abs_support()} >= e^P = {math.exp(P):.3g}"
        if strict:
            raise DomainError(msg)
        warnings.warn(msg, SieveHypothesisWarning, stacklevel=2)
    root = np.sqrt(np.maximum(wf.n, 0)).round().astype(np.int64)
    is_sq = (wf.n > 0) & (root * root == wf.n)
    lhs = math.fsum(wf.w[is_sq])
    term1 = math.fsum(wf.w) / P
    G = pair_sums(wf, pw.primes)
    off = ~np.eye(P, dtype=bool)
    term2 = math.fsum(np.abs(G[off])) / P**2
    return SieveSides(lhs, term1, term2, P, ok)


# -- weights from the counting problem ---------------------------------------


def inner_a_sum(n: int, b: int, r: int, Q: int, delta: Fraction, phi2_fn) -> float:
    """sum over a in Z of Phi_2((a - n b / r) / (Q^2 delta)), over the exact support."""
    scale = Q * Q * delta
    centre = Fraction(n * b, r)
    lo = math.ceil(centre - 10 * scale)
    hi = math.floor(centre + 10 * scale)
    if lo > hi:
        return 0.0
    a = np.arange(lo, hi + 1, dtype=object)
    # (a r - n b) / (r Q^2 delta), numerator exact
    x = np.array([float(Fraction(int(k) * r - n * b) / (r * scale)) for k in a])
    return math.fsum(phi2_fn(x))


def sieve_weights(b: int, r: int, Q: int, delta, bumps: BumpPair) -> WeightFunction:
    """w(n) = Phi_1(n/Q^2) * sum_a Phi_2((a - n b/r)/(Q^2 delta))."""
    delta = exact(delta)
    lo = math.ceil(bumps.support1[0] * Q * Q)
    hi = math.floor(bumps.support1[1] * Q * Q)
    n = np.arange(lo, hi + 1, dtype=np.int64)
    outer = bumps.phi1(n / (Q * Q))
    w = np.zeros(n.size)
    for i, k in enumerate(n):
        if outer[i] > 0:
            w[i] = outer[i] * inner_a_sum(int(k), b, r, Q, delta, bumps.phi2)
    return WeightFunction(n, w)


def weighted_count(b: int, r: int, Q: int, delta, bumps: BumpPair) -> float:
    """sum over q in Z of Phi_1(q^2/Q^2) sum over a in Z of Phi_2((a - q^2 b/r)/(Q^2 delta))."""
    if math.gcd(b, r) != 1:
        raise DomainError(f"need (b, r) = 1, got b={b}, r={r}")
    delta = exact(delta)
    qmax = math.isqrt(math.floor(bumps.support1[1] * Q * Q)) + 1
    terms = []
    for q in range(-qmax, qmax + 1):
        outer = float(bumps.phi1(q * q / (Q * Q)))
        if outer > 0:
            terms.append(outer * inner_a_sum(q * q, b, r, Q, delta, bumps.phi2))
    return math.fsum(terms)


@dataclass(frozen=True)
class SieveEstimate:
    estimate: float
    term1: float
    term2: float
    weight_sum: float
    window: PrimeWindow
    pair_magnitudes: dict

    @property
    def P(self) -> int:
        return self.window.P


def sieve_estimate_P(b: int, r: int, Q: int, delta, R: float, bumps: BumpPair) -> SieveEstimate:
    """Square sieve applied to the weighted count; both terms by direct summation."""
    if R <= 1:
        raise DomainError("R must exceed 1")
    if math.gcd(b, r) != 1:
        raise DomainError(f"need (b, r) = 1, got b={b}, r={r}")
    pw = PrimeWindow(R, r)
    _check_window(pw)
    wf = sieve_weights(b, r, Q, delta, bumps)
    P = pw.P
    weight_sum = math.fsum(wf.w)
    G = pair_sums(wf, pw.primes)
    mags = {
        (p1, p2): abs(float(G[i, j]))
        for i, p1 in enumerate(pw.primes)
        for j, p2 in enumerate(pw.primes)
        if i != j
    }
    term1 = weight_sum / P
    term2 = math.fsum(mags.values()) / P**2
    return SieveEstimate(term1 + term2, term1, term2, weight_sum, pw, mags)


def choose_R(Q: int, delta) -> float:
    """R = Q^2 sqrt(delta); warns when the prime window is likely empty."""
    if Q < 1 or not 0 < float(delta) <= 1:
        raise ValueError("need Q >= 1 and 0 < delta <= 1")
    R = Q * Q * math.sqrt(float(delta))
    if R < 2:
        warnings.warn(f"R = {R:.3g} < 2: prime window nearly empty", SieveHypothesisWarning, stacklevel=2)
    return R
