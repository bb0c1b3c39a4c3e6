"""Fourier transforms of the bumps and the Poisson-summation side of the sieve.

Transform convention: hat(t) = integral of Phi(x) e(-t x) dx, e(x) = exp(2 pi i x).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate, signal

from .arith import DomainError, gauss_sum, jacobi, legendre_table, mod_inverse
from .farey import exact
from .sieve import BumpPair, PrimeWindow, inner_a_sum, make_bumps, phi1, phi2

TWO_PI = 2.0 * math.pi

# support split at the plateau edges, where the integrand stops being constant
PIECES = {
    "phi1": (phi1, ((0.5, 1.0), (1.0, 4.0), (4.0, 5.0))),
    "phi2": (phi2, ((-10.0, -4.0), (-4.0, 4.0), (4.0, 10.0))),
}


class QuadratureError(RuntimeError):
    def __init__(self, achieved: float, tol: float):
        super().__init__(f"quadrature reached error {achieved:.3g} > tolerance {tol:.3g}")
        self.achieved = achieved


def _pieces(bump, support):
    if isinstance(bump, str):
        return PIECES[bump]
    if support is None:
        raise ValueError("a callable bump needs its support")
    return bump, (tuple(support),)


def fourier_hat(bump, t: float, tol: float = 1e-10, support=None) -> complex:
    """hat(t) by adaptive Gauss-Kronrod quadrature (QUADPACK) over the support."""
    fn, pieces = _pieces(bump, support)
    g = lambda x: float(fn(x))  # noqa: E731
    each = tol / (2 * len(pieces))
    re = im = err = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in pieces:
            if t == 0:
                v, e = integrate.quad(g, a, b, epsabs=each, epsrel=0, limit=400)
                re += v
                err += e
                continue
            w = TWO_PI * t
            v, e = integrate.quad(g, a, b, weight="cos", wvar=w, epsabs=each, epsrel=0, limit=400)
            re += v
            err += e
            v, e = integrate.quad(g, a, b, weight="sin", wvar=w, epsabs=each, epsrel=0, limit=400)
            im -= v
            err += e
    if err > tol:
        raise QuadratureError(err, tol)
    return complex(re, im)


class FourierTable:
    """Cached transform values on a fixed composite Gauss-Legendre rule.

    Panels are narrow enough to resolve e(-t x) for |t| <= t_max; the rule is
    cross-checked against ``fourier_hat`` in the test suite. Fill the cache in
    one thread (or a precomputation phase) before sharing it for reads.
    """

    def __init__(self, name: str, t_max: float = 64.0, order: int = 20):
        self.name = name
        self.order = order
        self._cache: dict[float, complex] = {}
        self._build(t_max)

    def _build(self, t_max: float) -> None:
        fn, pieces = PIECES[self.name]
        self.t_max = float(t_max)
        h = min(0.05, 1.0 / self.t_max)
        g, wts = np.polynomial.legendre.leggauss(self.order)
        xs, ws = [], []
        for a, b in pieces:
            k = max(1, math.ceil((b - a) / h))
            edges = np.linspace(a, b, k + 1)
            mid = 0.5 * (edges[1:] + edges[:-1])
            half = 0.5 * (edges[1:] - edges[:-1])
            xs.append((mid[:, None] + half[:, None] * g[None, :]).ravel())
            ws.append((half[:, None] * wts[None, :]).ravel())
        x = np.concatenate(xs)
        self._x = x
        self._fw = np.concatenate(ws) * fn(x)

    def _compute(self, ts: np.ndarray) -> np.ndarray:
        out = np.empty(ts.size, dtype=np.complex128)
        for s in range(0, ts.size, 256):
            chunk = ts[s : s + 256]
            out[s : s + 256] = np.exp(-TWO_PI * 1j * np.outer(chunk, self._x)) @ self._fw
        return out

    def __call__(self, ts) -> np.ndarray:
        ts = np.atleast_1d(np.asarray(ts, dtype=np.float64))
        if ts.size and np.abs(ts).max() > self.t_max:
            # finer panels; cached values stay valid
            self._build(max(2 * self.t_max, float(np.abs(ts).max())))
        missing = np.unique([t for t in ts.tolist() if t not in self._cache])
        if missing.size:
            for t, v in zip(missing.tolist(), self._compute(missing)):
                self._cache[t] = complex(v)
        return np.array([self._cache[t] for t in ts.tolist()], dtype=np.complex128)

    def integral(self) -> float:
        return float(self._fw.sum())


ALIAS_MARGIN = 400.0


def progression_hat(name: str, t0: float, dt: float, K: int) -> np.ndarray:
    """hat(t0 + k dt) for k = 0..K-1 via the trapezoid rule and a chirp-z transform.

    For a compactly supported C-infinity bump the trapezoid rule with step h
    returns the sum of hat(t + j/h) over j, so its error is the transform's
    own decay beyond 1/h - |t|; h is chosen to push that past ALIAS_MARGIN.
    Used for the long congruence-restricted sums; ``FourierTable`` stays the
    reference for the Poisson check itself.
    """
    if K <= 0:
        return np.empty(0, dtype=np.complex128)
    fn, pieces = PIECES[name]
    a, b = pieces[0][0], pieces[-1][1]
    t_top = max(abs(t0), abs(t0 + (K - 1) * dt))
    n = math.ceil((b - a) * (t_top + ALIAS_MARGIN))
    h = (b - a) / n
    x = a + h * np.arange(n + 1)
    f = h * fn(x)
    g = f * np.exp(-TWO_PI * 1j * t0 * h * np.arange(n + 1))
    X = signal.czt(g, m=K, w=np.exp(-TWO_PI * 1j * dt * h), a=1.0)
    t = t0 + dt * np.arange(K)
    return X * np.exp(-TWO_PI * 1j * t * a)


_TABLES: dict[str, FourierTable] = {}


def table(name: str) -> FourierTable:
    if name not in _TABLES:
        _TABLES[name] = FourierTable(name)
    return _TABLES[name]


def decay_cutoff(name: str, eps: float = 1e-11, step: float | None = None) -> float:
    """Smallest grid point t* with |hat(t)| < eps at every sample in [t*, 2 t*].

    The default step samples each oscillation of hat (period 1/width) eight times.
    """
    tab = table(name)
    if step is None:
        pieces = PIECES[name][1]
        step = 1.0 / (8.0 * (pieces[-1][1] - pieces[0][0]))
    span = 8.0
    while True:
        ts = np.arange(0.0, span + step / 2, step)
        above = np.flatnonzero(np.abs(tab(ts)) >= eps)
        t_star = float(ts[above[-1]]) + step if above.size else step
        if 2 * t_star <= span:
            return t_star
        span *= 2
        if span > 1024:
            raise ValueError(f"{name}: |hat| does not drop below {eps}")


def cutoffs(trunc=None, eps: float = 1e-11) -> tuple[float, float]:
    """Frequency cutoffs (for hat Phi_1, for hat Phi_2).

    None picks each from the measured decay of its transform; a scalar is used
    for both, as in a single threshold T.
    """
    if trunc is None:
        return decay_cutoff("phi1", eps), decay_cutoff("phi2", eps)
    if np.ndim(trunc) == 0:
        return float(trunc), float(trunc)
    t1, t2 = trunc
    return float(t1), float(t2)


# -- the residue-class split ------------------------------------------------


@dataclass(frozen=True)
class ModulusSplit:
    p1: int
    p2: int
    r: int
    b: int
    Q: int = 1
    delta: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "delta", exact(self.delta))
        p1, p2, r = self.p1, self.p2, self.r
        if p1 == p2 or p1 % 2 == 0 or p2 % 2 == 0 or min(p1, p2) < 3:
            raise DomainError(f"need distinct odd primes, got {p1}, {p2}")
        for p in (p1, p2):
            if any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
                raise DomainError(f"{p} is not prime")
        if r < 1 or math.gcd(r, p1 * p2) != 1:
            raise DomainError(f"r={r} must be positive and coprime to {p1 * p2}")
        if math.gcd(self.b, r) != 1:
            raise DomainError(f"b={self.b} must be coprime to r={r}")
        if self.Q < 1 or not self.delta > 0:
            raise DomainError("need Q >= 1 and delta > 0")

    @property
    def pp(self) -> int:
        return self.p1 * self.p2

    @property
    def m(self) -> int:
        return self.p1 * self.p2 * self.r

    @property
    def alpha1(self) -> Fraction:
        return Fraction(1, self.Q**2)

    @property
    def beta2(self) -> Fraction:
        return 1 / (self.Q**2 * self.delta)

    @property
    def alpha2(self) -> Fraction:
        return -Fraction(self.b, self.r) / (self.Q**2 * self.delta)


def lattice_phi(ms: ModulusSplit, f: int, bumps: BumpPair | None = None) -> float:
    """Sum over (x1, x2) in Z^2 of Phi_1(alpha1 (f + m x1)) Phi_2(beta2 x2 + alpha2 (f + m x1))."""
    bumps = bumps or make_bumps()
    Q2 = ms.Q**2
    lo, hi = bumps.support1
    x1_lo = math.ceil(Fraction(math.ceil(lo * Q2) - f, ms.m))
    x1_hi = math.floor(Fraction(math.floor(hi * Q2) - f, ms.m))
    terms = []
    for x1 in range(x1_lo, x1_hi + 1):
        n = f + ms.m * x1
        outer = float(bumps.phi1(n / Q2))
        if outer > 0:
            # beta2 x2 + alpha2 n = (x2 - n b / r) / (Q^2 delta): x2 plays the role of a
            terms.append(outer * inner_a_sum(n, ms.b, ms.r, ms.Q, ms.delta, bumps.phi2))
    return math.fsum(terms)


def _dual_terms(ms: ModulusSplit, f: int, cut1: float, cut2: float):
    """Transform terms hat Phi(t1, t2) with |arg1| <= cut1, |arg2| <= cut2.

    Also returns each term's box radius max(|arg1|/cut1, |arg2|/cut2).
    """
    alpha1, beta2, alpha2, m = ms.alpha1, ms.beta2, ms.alpha2, ms.m
    t2_max = math.floor(cut2 * beta2)
    t2 = np.arange(-t2_max, t2_max + 1)
    arg2 = t2 / float(beta2)
    hat2 = table("phi2")(arg2)
    pref = float(1 / (beta2 * alpha1 * m))
    vals, radius = [], []
    for j, c in enumerate(t2.tolist()):
        # arg1 = t1/(alpha1 m) - t2 alpha2/(alpha1 beta2) = Q^2 (t1 + c b p1 p2) / m
        shift = c * ms.b * ms.pp
        assert -c * alpha2 / (alpha1 * beta2) * alpha1 * m == shift
        lo = math.ceil(-cut1 * float(alpha1 * m)) - shift
        hi = math.floor(cut1 * float(alpha1 * m)) - shift
        t1 = np.arange(lo, hi + 1, dtype=np.int64)
        arg1 = (t1 + shift) * ms.Q**2 / m
        phase = np.exp(TWO_PI * 1j * ((t1 * f) % m) / m)
        vals.append(pref * phase * table("phi1")(arg1) * hat2[j])
        radius.append(np.maximum(np.abs(arg1) / cut1, abs(arg2[j]) / cut2))
    if not vals:
        return np.empty(0, complex), np.empty(0)
    return np.concatenate(vals), np.concatenate(radius)


@dataclass(frozen=True)
class PoissonCheck:
    direct: float
    dual: complex
    gap: float
    tail: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.gap <= self.tol + self.tail


def poisson_check(ms: ModulusSplit, f: int, trunc=None, tol: float = 1e-6) -> PoissonCheck:
    """Lattice sum of Phi against the truncated sum of its transform.

    ``tail`` is the summed magnitude of the transform terms in the shell
    between the cutoffs and twice the cutoffs, i.e. what doubling them adds.
    """
    if not 1 <= f <= ms.m:
        raise ValueError(f"f must lie in [1, {ms.m}]")
    cut1, cut2 = cutoffs(trunc)
    direct = lattice_phi(ms, f)
    vals, radius = _dual_terms(ms, f, 2 * cut1, 2 * cut2)
    inside = radius <= 0.5
    dual = complex(np.sum(vals[inside]))
    tail = math.fsum(np.abs(vals[~inside]))
    return PoissonCheck(direct, dual, abs(direct - dual), tail, tol)


# -- the character sum --------------------------------------------------------


def charsum_direct(ms: ModulusSplit, s: int, c: int) -> complex:
    """sum over f = 1..m of (f / p1 p2) e((s - c b p1 p2) f / m)."""
    m, pp = ms.m, ms.pp
    k = (s - c * ms.b * pp) % m
    f = np.arange(1, m + 1, dtype=np.int64)
    chi = legendre_table(ms.p1)[f % ms.p1] * legendre_table(ms.p2)[f % ms.p2]
    return complex(np.dot(chi, np.exp(TWO_PI * 1j * ((k * f) % m) / m)))


def charsum_closed(ms: ModulusSplit, s: int, c: int, tau: complex | None = None) -> complex:
    """r tau_{p1 p2} (r s / p1 p2) when c p1 p2 = s b^{-1} (mod r), else 0."""
    r, pp = ms.r, ms.pp
    if (c * pp - s * mod_inverse(ms.b, r)) % r:
        return 0j
    tau = gauss_sum(pp) if tau is None else tau
    return r * tau * jacobi(r * s, pp)


def charsum_identity(ms: ModulusSplit, s: int, c: int) -> tuple[complex, complex]:
    return charsum_direct(ms, s, c), charsum_closed(ms, s, c)


def charsum_table(ms: ModulusSplit) -> np.ndarray:
    """All values G[k] = sum_f (f / p1 p2) e(k f / m), k mod m, by direct summation."""
    m = ms.m
    f = np.arange(1, m + 1, dtype=np.int64)
    chi = legendre_table(ms.p1)[f % ms.p1] * legendre_table(ms.p2)[f % ms.p2]
    k = np.arange(m, dtype=np.int64)
    roots = np.exp(TWO_PI * 1j * np.arange(m) / m)
    return roots[np.outer(k, f) % m] @ chi


def charsum_max_error(ms: ModulusSplit) -> float:
    """max over s in [0, m), c in [0, r) of |direct - closed form|."""
    G = charsum_table(ms)
    tau = gauss_sum(ms.pp)
    worst = 0.0
    for s in range(ms.m):
        for c in range(ms.r):
            lhs = G[(s - c * ms.b * ms.pp) % ms.m]
            worst = max(worst, abs(lhs - charsum_closed(ms, s, c, tau)))
    return worst


# -- assembling the dual side ---------------------------------------------------


def pair_sum_direct(ms: ModulusSplit, bumps: BumpPair | None = None) -> float:
    """sum_n Phi_1(n/Q^2) (n / p1 p2) sum_a Phi_2((a - b n / r)/(Q^2 delta))."""
    bumps = bumps or make_bumps()
    Q2 = ms.Q**2
    lo = math.ceil(bumps.support1[0] * Q2)
    hi = math.floor(bumps.support1[1] * Q2)
    terms = []
    for n in range(lo, hi + 1):
        chi = jacobi(n, ms.pp)
        outer = float(bumps.phi1(n / Q2))
        if chi and outer > 0:
            terms.append(chi * outer * inner_a_sum(n, ms.b, ms.r, ms.Q, ms.delta, bumps.phi2))
    return math.fsum(terms)


def _dual_lattice(ms: ModulusSplit, cut1: float, cut2: float):
    """(c, s, hat1, hat2) over |c Q^2 delta| <= cut2, |s Q^2 / m| <= cut1, with c p1 p2 = s b^{-1} (mod r)."""
    Q2, m, r = ms.Q**2, ms.m, ms.r
    c_max = math.floor(Fraction(cut2) / (Q2 * ms.delta))
    s_max = math.floor(Fraction(cut1) * m / Q2)
    c_all = np.arange(-c_max, c_max + 1, dtype=np.int64)
    hat2_all = table("phi2")(c_all * float(Q2 * ms.delta))
    cs, ss, h1, h2 = [], [], [], []
    for c, hat2 in zip(c_all.tolist(), hat2_all):
        # multiplying by b: s = c p1 p2 b (mod r); then s Q^2/m steps by Q^2/(p1 p2)
        s0 = (c * ms.pp * ms.b) % r
        lo = s0 - r * ((s0 + s_max) // r)
        s = np.arange(lo, s_max + 1, r, dtype=np.int64)
        if s.size == 0:
            continue
        cs.append(np.full(s.size, c, dtype=np.int64))
        ss.append(s)
        h1.append(progression_hat("phi1", lo * Q2 / m, Q2 / ms.pp, s.size))
        h2.append(np.full(s.size, hat2))
    if not cs:
        e = np.empty(0, dtype=np.int64)
        return e, e, np.empty(0, complex), np.empty(0, complex)
    return np.concatenate(cs), np.concatenate(ss), np.concatenate(h1), np.concatenate(h2)


@dataclass(frozen=True)
class DualBound:
    value: float
    tail: float


def dual_side_bound(ms: ModulusSplit, T=None) -> DualBound:
    """(Q^4 delta / sqrt(p1 p2)) * sum over c p1 p2 = s b^{-1} (mod r) of |hat1(s Q^2/m) hat2(c Q^2 delta)|.

    Truncated at the cutoffs T; ``tail`` is the same sum over the shell out to 2T.
    """
    cut1, cut2 = cutoffs(T)
    c, s, hat1, hat2 = _dual_lattice(ms, 2 * cut1, 2 * cut2)
    radius = np.maximum(np.abs(s) * ms.Q**2 / ms.m / cut1, np.abs(c) * float(ms.Q**2 * ms.delta) / cut2)
    mags = np.abs(hat1 * hat2)
    pref = float(ms.Q**4 * ms.delta) / math.sqrt(ms.pp)
    inside = radius <= 1
    return DualBound(pref * math.fsum(mags[inside]), pref * math.fsum(mags[~inside]))


def dual_side_value(ms: ModulusSplit, T=None) -> complex:
    """Signed dual expression (Q^4 delta / m) sum hat2 hat1 r tau (r s / p1 p2) over the congruence."""
    c, s, hat1, hat2 = _dual_lattice(ms, *cutoffs(T))
    chi = np.array([jacobi(ms.r * int(k), ms.pp) for k in s])
    tau = gauss_sum(ms.pp)
    pref = float(ms.Q**4 * ms.delta) / ms.m
    return complex(pref * ms.r * tau * np.sum(hat1 * hat2 * chi))


@dataclass(frozen=True)
class ChainResult:
    total: float
    tail: float
    pairs: dict
    bound_terms: dict
    window: PrimeWindow


def chain_bound_terms(Q: int, delta, R: float) -> dict:
    d = float(exact(delta))
    return {
        "Q4_delta_R": Q**4 * d * R,
        "Q2_delta_R3": Q**2 * d * R**3,
        "R3": R**3,
        "Q4_delta_over_R": Q**4 * d / R,
        "final": Q**2 * math.sqrt(d) + Q**4 * d**1.5,
    }


def pair_sum_chain(Q: int, delta, b: int, r: int, R: float, T=None) -> ChainResult:
    """Sum of ``dual_side_bound`` over ordered pairs p1 != p2 of the prime window."""
    pw = PrimeWindow(R, r)
    if pw.P == 0:
        raise DomainError(f"prime window (R={R}, r={r}) is empty")
    if 2 in pw.primes:
        raise DomainError("prime window contains 2; Jacobi symbols need R >= 2")
    pairs = {}
    for i, p1 in enumerate(pw.primes):
        for p2 in pw.primes[i + 1 :]:
            bound = dual_side_bound(ModulusSplit(p1, p2, r, b, Q, delta), T)
            pairs[(p1, p2)] = pairs[(p2, p1)] = bound
    total = math.fsum(v.value for v in pairs.values())
    tail = math.fsum(v.tail for v in pairs.values())
    return ChainResult(total, tail, pairs, chain_bound_terms(Q, delta, R), pw)
