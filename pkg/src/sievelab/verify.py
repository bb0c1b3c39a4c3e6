"""Property suites with measured constants, shared by the CLI and the test suite.

Every check returns a :class:`Check` carrying the measured quantity, so the
same numbers can be printed by ``sievelab verify`` and asserted in tests.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from . import arith, farey, poisson, sieve, trigpoly
from .rng import SplitMix64

ARC_GRID = ((8, 1024), (16, 4096))
# smallest inside-range grids on which the major arcs are nonempty (v_max >= 2)
ARC_GRID_NONEMPTY = ((32, 32**4 - 1), (64, 64**4 - 1))
MINOR_GRID = ((4, 256), (8, 1024), (16, 4096))


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: float | None = None
    threshold: float | None = None
    detail: str = ""
    info: bool = False

    def line(self) -> str:
        status = "INFO" if self.info else "PASS" if self.passed else "FAIL"
        parts = [f"{status} {self.name}"]
        if self.measured is not None:
            parts.append(f"measured={self.measured:.6g}")
        if self.threshold is not None:
            parts.append(f"threshold={self.threshold:.6g}")
        if self.detail:
            parts.append(self.detail)
        return "  ".join(parts)


# -- sampling ---------------------------------------------------------------------


def random_fraction(rng: SplitMix64) -> Fraction:
    return Fraction(rng.next_u64(), 1 << 64)


def sample_major_arc(rng: SplitMix64, Q: int, delta) -> Fraction | None:
    """Uniform-ish rational point of the major arcs, or None if they are empty."""
    params = farey.MajorArcParams(Q, delta)
    if params.v_max < 1:
        return None
    while True:
        v = 1 + rng.randbelow(params.v_max)
        u = 1 + rng.randbelow(v)
        if math.gcd(u, v) == 1:
            break
    offset = (2 * random_fraction(rng) - 1) * params.radius(v)
    return Fraction(u, v) + offset


def sample_minor_arc(rng: SplitMix64, Q: int, delta, near_point: bool = False) -> Fraction:
    """Minor-arc alpha; with ``near_point`` it sits within delta of a counted a/q^2."""
    delta = farey.exact(delta)
    params = farey.MajorArcParams(Q, delta)
    while True:
        if near_point:
            q = Q + 1 + rng.randbelow(Q)
            a = 1 + rng.randbelow(q * q)
            if math.gcd(a, q) != 1:
                continue
            alpha = Fraction(a, q * q) + (2 * random_fraction(rng) - 1) * delta
        else:
            alpha = random_fraction(rng)
        if farey.is_minor_arc(alpha, params):
            return alpha


def minor_arc_tuples(n: int, seed: int = 1, grid=MINOR_GRID):
    """(Q, delta, alpha, b, r) with delta = 1/N, cycling through ``grid``."""
    rng = SplitMix64(seed)
    out = []
    for i in range(n):
        Q, N = grid[i % len(grid)]
        delta = Fraction(1, N)
        alpha = sample_minor_arc(rng, Q, delta, near_point=i % 2 == 0)
        b, r = farey.refine_approx(alpha, Q, delta)
        out.append((Q, delta, alpha, b, r))
    return out


# -- identities ----------------------------------------------------------------------


CHARSUM_SPLITS = ((3, 5), (3, 7), (5, 7))
CHARSUM_R = (1, 2, 4, 9)


def check_charsum_identity() -> Check:
    """Exhaustive over s in [0, m), c in [0, r), b coprime to r; worst error / m."""
    worst = 0.0
    skipped = []
    cases = 0
    for p1, p2 in CHARSUM_SPLITS:
        for r in CHARSUM_R:
            if math.gcd(r, p1 * p2) != 1:
                skipped.append(f"({p1},{p2},r={r})")
                continue
            for b in range(r):
                if math.gcd(b, r) != 1:
                    continue
                ms = poisson.ModulusSplit(p1, p2, r, b)
                worst = max(worst, poisson.charsum_max_error(ms) / ms.m)
                cases += 1
    detail = f"{cases} splits"
    if skipped:
        detail += "; skipped (r not coprime to p1p2): " + ", ".join(skipped)
    return Check("charsum identity max|lhs-rhs|/m", worst <= 1e-9, worst, 1e-9, detail)


def check_gauss_modulus(limit: int = 2500) -> Check:
    primes = arith.primes_in(2, limit // 3)
    worst = 0.0
    pairs = 0
    for i, p1 in enumerate(primes):
        for p2 in primes[i + 1 :]:
            if p1 * p2 > limit:
                break
            worst = max(worst, abs(abs(arith.gauss_sum(p1 * p2)) - math.sqrt(p1 * p2)))
            pairs += 1
    return Check("gauss sum modulus ||tau|-sqrt(p1p2)|", worst <= 1e-9, worst, 1e-9, f"{pairs} pairs")


def check_jacobi_properties() -> Check:
    bad = 0
    for m in range(1, 100, 2):
        for n1 in range(-30, 31):
            if arith.jacobi(n1 + m, m) != arith.jacobi(n1, m):
                bad += 1
            for n2 in range(-30, 31, 7):
                if arith.jacobi(n1 * n2, m) != arith.jacobi(n1, m) * arith.jacobi(n2, m):
                    bad += 1
    return Check("jacobi multiplicativity/periodicity", bad == 0, bad, 0)


# -- poisson -------------------------------------------------------------------------------


POISSON_CASES = (
    (3, 5, 4, 1, 4, Fraction(1, 64), 1),
    (3, 5, 4, 3, 4, Fraction(1, 64), 17),
    (3, 7, 2, 1, 4, Fraction(1, 32), 5),
    (5, 7, 1, 0, 4, Fraction(1, 64), 12),
    (3, 5, 1, 0, 3, Fraction(1, 16), 2),
    (5, 7, 3, 2, 5, Fraction(1, 100), 33),
    (3, 11, 2, 1, 6, Fraction(1, 200), 40),
    (7, 11, 4, 3, 8, Fraction(1, 256), 101),
    (3, 5, 8, 5, 4, Fraction(1, 64), 60),
    (5, 11, 2, 1, 7, Fraction(1, 128), 110),
    (3, 5, 4, 1, 2, Fraction(1, 64), 30),
)


def poisson_checks(tol: float = 1e-6) -> list[Check]:
    out = []
    for p1, p2, r, b, Q, delta, f in POISSON_CASES:
        ms = poisson.ModulusSplit(p1, p2, r, b, Q, delta)
        res = poisson.poisson_check(ms, f, tol=tol)
        name = f"poisson ({p1},{p2},r={r},b={b},Q={Q},delta={delta},f={f})"
        detail = f"direct={res.direct:.12g} tail={res.tail:.3g}"
        out.append(Check(name, res.ok, res.gap, tol + res.tail, detail))
    return out


# -- sieve ----------------------------------------------------------------------------------


def square_sieve_constant() -> Check:
    """max over interval indicators [1, X] and R of lhs / (term1 + term2)."""
    worst = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sieve.SieveHypothesisWarning)
        for X in (10**2, 10**3, 10**4):
            wf = sieve.WeightFunction.indicator(1, X)
            for R in (10, 20, 40):
                sides = sieve.square_sieve_sides(wf, sieve.PrimeWindow(R, 1))
                worst = max(worst, sides.lhs / sides.rhs)
    return Check("square sieve constant C", worst <= 4, worst, 4)


def majorization_check(n: int = 50, seed: int = 11) -> Check:
    bumps = sieve.make_bumps()
    worst = 0.0
    bad = 0
    for Q, delta, _alpha, b, r in minor_arc_tuples(n, seed):
        count = farey.count_P(farey.CountWindow(Q, 2 * delta, Fraction(b, r)))
        wc = sieve.weighted_count(b, r, Q, delta, bumps)
        if count > wc:
            bad += 1
        worst = max(worst, count / wc if wc else float(count > 0))
    return Check("weighted majorization count_P(b/r,2delta) <= weighted_count", bad == 0, worst, 1, f"{n} tuples")


def first_sum_constant(n: int = 30, seed: int = 12) -> float:
    """max over minor-arc tuples of sum_n w(n) / (Q^4 delta)."""
    bumps = sieve.make_bumps()
    worst = 0.0
    for Q, delta, _alpha, b, r in minor_arc_tuples(n, seed):
        wf = sieve.sieve_weights(b, r, Q, delta, bumps)
        worst = max(worst, math.fsum(wf.w) / (Q**4 * float(delta)))
    return worst


def prime_window_check() -> Check:
    bad = 0
    for R in (2.0, 3.5, 10.0, 17.0, 40.0):
        for r in (1, 6, 30, 221, 2 * 3 * 5 * 7 * 11 * 13):
            pw = sieve.PrimeWindow(R, r)
            recount = [p for p in range(2, int(2 * R) + 1) if R < p and all(p % d for d in range(2, p)) and r % p]
            expected_count = len(arith.primes_in(R, 2 * R)) - arith.omega(r)
            if list(pw.primes) != recount or pw.P < expected_count:
                bad += 1
    return Check("prime window exactness", bad == 0, bad, 0)


def sieve_checks() -> list[Check]:
    c = first_sum_constant()
    return [
        square_sieve_constant(),
        majorization_check(),
        prime_window_check(),
        Check("first-sum constant sum w / (Q^4 delta)", True, c, 10,
              "reported only; it is at least the product of the bump integrals", info=True),
    ]


# -- spacing ----------------------------------------------------------------------------------


def spacing_check(Qs=(2, 3, 4, 8)) -> Check:
    worst = math.inf
    bad = 0
    cases = 0
    for Q in Qs:
        for d in range(1, 5 * Q * Q + 1):
            lo, hi = farey.spacing_range(Q, d)
            if lo > hi:
                continue
            gap = farey.farey_spacing_check(Q, d)
            bound = Fraction(d * d, 25 * Q**4)
            cases += 1
            worst = min(worst, float(gap / bound))
            if gap < bound:
                bad += 1
    return Check("farey spacing min gap / (d^2/(25Q^4))", bad == 0, worst, 1, f"{cases} (Q,d) cases")


# -- arcs --------------------------------------------------------------------------------------


def major_arc_checks(samples: int = 100, seed: int = 21) -> list[Check]:
    rng = SplitMix64(seed)
    out = []
    for Q, N in ARC_GRID + ARC_GRID_NONEMPTY:
        delta = Fraction(1, N)
        params = farey.MajorArcParams(Q, delta)
        name = f"major-arc vanishing Q={Q} N={N}"
        if params.v_max < 1:
            out.append(Check(name, True, 0, 0, f"vacuous: major arcs empty (500 Q^2 delta = {float(500 * Q * Q * delta):.4g} > 1)"))
            continue
        worst = 0
        for _ in range(samples):
            alpha = sample_major_arc(rng, Q, delta)
            assert farey.in_major_arc(alpha, params) is not None
            worst = max(worst, farey.count_P(farey.CountWindow(Q, delta, alpha)))
        out.append(Check(name, worst == 0, worst, 0, f"{samples} samples, v_max={params.v_max}"))
    return out


def monotonicity_checks(samples: int = 100, seed: int = 22) -> list[Check]:
    rng = SplitMix64(seed)
    out = []
    for Q, N in ARC_GRID:
        delta = Fraction(1, N)
        bad = nonzero = 0
        for i in range(samples):
            alpha = sample_minor_arc(rng, Q, delta, near_point=i % 2 == 0)
            b, r = farey.refine_approx(alpha, Q, delta)
            left = farey.count_P(farey.CountWindow(Q, delta, alpha))
            right = farey.count_P(farey.CountWindow(Q, 2 * delta, Fraction(b, r)))
            nonzero += left > 0
            bad += left > right
        out.append(Check(f"minor-arc monotonicity Q={Q} N={N}", bad == 0, bad, 0, f"{samples} samples, {nonzero} with P>0"))
    return out


def dyadic_reduction_constant(Q: int, N: int, trials: int = 20, seed: int = 31) -> float:
    """max over random +-1 sequences of dyadic lhs / ((N + 1/delta) Z max_P), delta = 1/N."""
    delta = Fraction(1, N)
    max_p, _ = farey.max_P_over_alpha(Q, delta)
    worst = 0.0
    for t in range(trials):
        poly = trigpoly.random_pm1(N, SplitMix64.derive(seed, N, t))
        lhs = trigpoly.lhs_square_moduli(poly, Q, "dyadic")
        worst = max(worst, lhs / ((N + N) * trigpoly.norm_Z(poly) * max_p))
    return worst


def dyadic_reduction_checks() -> list[Check]:
    out = []
    for Q, N in ((4, 256), (8, 1024)):
        c = dyadic_reduction_constant(Q, N)
        out.append(Check(f"dyadic reduction constant Q={Q} N={N}", c <= 10, c, 10))
    return out


SUITES = {
    "identities": lambda: [check_charsum_identity(), check_gauss_modulus(), check_jacobi_properties()],
    "poisson": poisson_checks,
    "sieve": sieve_checks,
    "spacing": lambda: [spacing_check()],
    "arcs": lambda: major_arc_checks() + monotonicity_checks() + dyadic_reduction_checks(),
}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        return [c for key in SUITES for c in SUITES[key]()]
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name]()

