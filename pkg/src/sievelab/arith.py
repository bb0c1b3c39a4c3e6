"""Exact integer primitives: Jacobi symbols, Gauss sums, prime windows."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the domain of a number-theoretic function."""


class ReducedFraction(Fraction):
    """Exact rational a/q in lowest terms.

    ``Fraction`` already normalises sign and gcd and compares by integer
    cross-multiplication, so the only additions are the field aliases and the
    square-denominator flag.
    """

    @property
    def num(self) -> int:
        return self.numerator

    @property
    def den(self) -> int:
        return self.denominator

    @property
    def is_square_den(self) -> bool:
        return math.isqrt(self.denominator) ** 2 == self.denominator

    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __repr__(self) -> str:
        return f"ReducedFraction({self.numerator}, {self.denominator})"


def jacobi(n: int, m: int) -> int:
    """Jacobi symbol (n/m) for odd m >= 1."""
    if m <= 0 or m % 2 == 0:
        raise DomainError(f"Jacobi symbol needs a positive odd modulus, got {m}")
    n %= m
    acc = 1
    while n:
        while n % 2 == 0:
            n //= 2
            if m % 8 in (3, 5):
                acc = -acc
        n, m = m, n
        if n % 4 == 3 and m % 4 == 3:
            acc = -acc
        n %= m
    return acc if m == 1 else 0


def legendre_table(p: int) -> np.ndarray:
    """Array chi with chi[k] = (k/p) for 0 <= k < p, p an odd prime."""
    chi = -np.ones(p, dtype=np.int8)
    chi[0] = 0
    squares = (np.arange(1, (p - 1) // 2 + 1, dtype=np.int64) ** 2) % p
    chi[squares] = 1
    return chi


def is_squarefree(m: int) -> bool:
    d = 2
    while d * d <= m:
        if m % (d * d) == 0:
            return False
        d += 1
    return True


def gauss_sum(m: int) -> complex:
    """Sum of (g/m) e(g/m) over g = 1..m, by direct summation."""
    if m < 3 or m % 2 == 0 or not is_squarefree(m):
        raise DomainError(f"Gauss sum needs an odd squarefree modulus >= 3, got {m}")
    total = 0j
    for g in range(1, m + 1):
        chi = jacobi(g, m)
        if chi:
            total += chi * cmath.exp(2j * math.pi * g / m)
    return total


def divisor_count(t: int) -> int:
    if t <= 0:
        raise DomainError(f"divisor function needs t >= 1, got {t}")
    count = 0
    d = 1
    while d * d <= t:
        if t % d == 0:
            count += 1 if d * d == t else 2
        d += 1
    return count


def _sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


def primes_in(lo: float, hi: float) -> list[int]:
    """Primes p with lo < p <= hi."""
    if hi < lo or lo < 0:
        raise DomainError(f"need 0 <= lo <= hi, got ({lo}, {hi})")
    top = math.floor(hi)
    if top < 2:
        return []
    start = math.floor(lo) + 1
    flags = _sieve(top)
    return [int(p) for p in np.flatnonzero(flags[start:]) + start]


def prime_factors(r: int) -> list[int]:
    """Distinct prime factors of r by trial division."""
    if r < 1:
        raise DomainError(f"need r >= 1, got {r}")
    out = []
    d = 2
    while d * d <= r:
        if r % d == 0:
            out.append(d)
            while r % d == 0:
                r //= d
        d += 1 if d == 2 else 2
    if r > 1:
        out.append(r)
    return out


def omega(r: int) -> int:
    return len(prime_factors(r))


def mod_inverse(b: int, r: int) -> int:
    """b^{-1} mod r, normalised into [1, r]."""
    if r < 1:
        raise DomainError(f"modulus must be positive, got {r}")
    if math.gcd(b, r) != 1:
        raise DomainError(f"{b} is not invertible modulo {r}")
    inv = pow(b, -1, r)
    return inv if inv else r
