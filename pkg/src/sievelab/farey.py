"""Counting square-denominator Farey points a/q^2 near a real number.

All comparisons are exact. Floats are converted to the rational they
represent (``Fraction(float)`` is exact), decimal strings to the decimal they
spell, so the closed inequality |a/q^2 - alpha| <= delta is decided without
rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

MAX_Q = 512
GUARD_BAND = 1e-15


def exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float, str)):
        return Fraction(x)
    return Fraction(float(x))


@dataclass(frozen=True)
class CountWindow:
    """Moduli Q < q <= 2Q, radius delta, centre alpha."""

    Q: int
    delta: Fraction
    alpha: Fraction

    def __init__(self, Q: int, delta, alpha):
        delta, alpha = exact(delta), exact(alpha)
        if Q < 1:
            raise ValueError(f"Q must be >= 1, got {Q}")
        if not 0 < delta <= 1:
            raise ValueError(f"delta must satisfy 0 < delta <= 1, got {float(delta)}")
        object.__setattr__(self, "Q", int(Q))
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "alpha", alpha)


@dataclass(frozen=True)
class MajorArcParams:
    Q: int
    delta: Fraction

    def __init__(self, Q: int, delta):
        delta = exact(delta)
        if Q < 1 or delta <= 0:
            raise ValueError("need Q >= 1 and delta > 0")
        object.__setattr__(self, "Q", int(Q))
        object.__setattr__(self, "delta", delta)

    @property
    def v_max(self) -> int:
        """Largest admissible denominator, floor(1/(500 Q^2 delta))."""
        return math.floor(1 / (500 * self.Q**2 * self.delta))

    def radius(self, v: int) -> Fraction:
        return Fraction(1, 10 * self.Q**2 * v)


def _coprime_in(q: int, lo: int, hi: int) -> np.ndarray:
    if lo > hi:
        return np.empty(0, dtype=np.int64)
    a = np.arange(lo, hi + 1, dtype=np.int64)
    return a[np.gcd(a, q) == 1]


def _window(q: int, alpha: Fraction, delta: Fraction) -> tuple[int, int]:
    D = q * q
    lo = max(1, math.ceil(D * (alpha - delta)))
    hi = min(D, math.floor(D * (alpha + delta)))
    return lo, hi


def count_P(w: CountWindow) -> int:
    """#{(q, a): Q < q <= 2Q, 1 <= a <= q^2, (a, q) = 1, |a/q^2 - alpha| <= delta}."""
    if w.Q > MAX_Q:
        raise ValueError(f"Q = {w.Q} exceeds the enumeration cap {MAX_Q}")
    total = 0
    for q in range(w.Q + 1, 2 * w.Q + 1):
        lo, hi = _window(q, w.alpha, w.delta)
        total += int(_coprime_in(q, lo, hi).size)
    return total


def near_ties(w: CountWindow, band: float = GUARD_BAND) -> int:
    """Points whose distance to the window edge is below ``band``.

    Nonzero means a float-derived alpha or delta decides the count through
    its last bits; the count itself is still exact for the given binary value.
    """
    band = Fraction(band)
    hits = 0
    for q in range(w.Q + 1, 2 * w.Q + 1):
        D = q * q
        lo, hi = _window(q, w.alpha, w.delta)
        for a in {lo - 1, lo, hi, hi + 1}:
            if 1 <= a <= D and math.gcd(a, q) == 1:
                if abs(abs(Fraction(a, D) - w.alpha) - w.delta) < band:
                    hits += 1
    return hits


def farey_points(Q: int) -> list[Fraction]:
    """All a/q^2 with Q < q <= 2Q, 1 <= a <= q^2, (a, q) = 1, sorted."""
    pts = []
    for q in range(Q + 1, 2 * Q + 1):
        D = q * q
        pts.extend(Fraction(int(a), D) for a in _coprime_in(q, 1, D))
    pts.sort()
    return pts


def max_P_over_alpha(Q: int, delta) -> tuple[int, Fraction]:
    """Maximum over real alpha of P(alpha, delta), with a witness alpha.

    The best closed window [alpha - delta, alpha + delta] can always be slid
    until its left end sits on a point, so a two-pointer scan over the sorted
    points finds the maximum exactly.
    """
    delta = exact(delta)
    if not 0 < delta <= 1:
        raise ValueError("delta must satisfy 0 < delta <= 1")
    if Q > MAX_Q:
        raise ValueError(f"Q = {Q} exceeds the enumeration cap {MAX_Q}")
    pts = farey_points(Q)
    width = 2 * delta
    best, best_i, best_j = 0, 0, 0
    j = 0
    for i in range(len(pts)):
        if j < i:
            j = i
        while j + 1 < len(pts) and pts[j + 1] - pts[i] <= width:
            j += 1
        if j - i + 1 > best:
            best, best_i, best_j = j - i + 1, i, j
    witness = (pts[best_i] + pts[best_j]) / 2
    return best, witness


def in_major_arc(alpha, p: MajorArcParams) -> tuple[int, int] | None:
    """(u, v) with v <= v_max, (u, v) = 1 and |u/v - alpha| <= 1/(10 Q^2 v).

    Arcs are taken modulo 1, so u is any integer. Returns the smallest v.
    """
    alpha = exact(alpha)
    slack = Fraction(1, 10 * p.Q**2)
    for v in range(1, p.v_max + 1):
        base = math.floor(alpha * v)
        for u in (base - 1, base, base + 1):
            if math.gcd(u, v) == 1 and abs(u - alpha * v) <= slack:
                return u, v
    return None


def is_minor_arc(alpha, p: MajorArcParams) -> bool:
    return in_major_arc(alpha, p) is None


def convergents(alpha: Fraction):
    """Continued-fraction convergents (p, q) of a rational."""
    num, den = alpha.numerator, alpha.denominator
    p0, q0, p1, q1 = 0, 1, 1, 0
    while den:
        a, rem = divmod(num, den)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        yield p1, q1
        num, den = den, rem


def dirichlet_approx(alpha, limit: int) -> tuple[int, int]:
    """(b, r) with 1 <= r <= limit, (b, r) = 1 and |b/r - alpha| <= 1/(r limit).

    The last convergent with denominator <= limit qualifies: the next one has
    denominator > limit and the error is below 1/(r r_next).
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    alpha = exact(alpha)
    b, r = math.floor(alpha), 1
    for p, q in convergents(alpha):
        if q > limit:
            break
        b, r = p, q
    if abs(Fraction(b, r) - alpha) <= Fraction(1, r * limit):
        return b, r
    for r in range(1, limit + 1):  # pragma: no cover - unreachable by Dirichlet
        b = round(alpha * r)
        if math.gcd(b, r) == 1 and abs(Fraction(b, r) - alpha) <= Fraction(1, r * limit):
            return b, r
    raise RuntimeError("Dirichlet approximation failed")  # pragma: no cover


def refine_approx(alpha, Q: int, delta) -> tuple[int, int] | None:
    """Minor-arc approximation (b, r) with 1/(500 Q^2 delta) < r <= 500 Q^2 and |b/r - alpha| <= delta.

    Returns None when alpha lies on a major arc.
    """
    alpha, delta = exact(alpha), exact(delta)
    params = MajorArcParams(Q, delta)
    if in_major_arc(alpha, params) is not None:
        return None
    b, r = dirichlet_approx(alpha, 500 * Q * Q)
    if not r > 1 / (500 * Q * Q * delta):
        raise RuntimeError(f"minor-arc alpha={alpha} got small denominator r={r}")
    if not abs(Fraction(b, r) - alpha) <= delta:
        raise RuntimeError(f"approximation {b}/{r} is farther than delta from {alpha}")
    return b, r


def spacing_range(Q: int, d: int) -> tuple[int, int]:
    lo = max(1, math.ceil(Fraction(Q * Q, 2 * d)))
    hi = math.floor(Fraction(5 * Q * Q, d))
    return lo, hi


def farey_spacing_check(Q: int, d: int) -> Fraction:
    """Minimal gap between distinct reduced a/n, Q^2/(2d) <= n <= 5Q^2/d.

    Fractions are compared modulo 1 (the gap set is periodic), including the
    wrap-around gap between the largest point and 1 + the smallest.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    lo, hi = spacing_range(Q, d)
    if lo > hi:
        raise ValueError(f"empty denominator range for Q={Q}, d={d}")
    pts = sorted({Fraction(a, n) for n in range(lo, hi + 1) for a in range(n) if math.gcd(a, n) == 1})
    gaps = [y - x for x, y in zip(pts, pts[1:])]
    gaps.append(1 + pts[0] - pts[-1])
    return min(gaps)
