"""Right-hand sides of the square-moduli large sieve bounds and ratio reports."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .trigpoly import TrigPolynomial, lhs_single_modulus, lhs_square_moduli, norm_Z

BOUND_NAMES = ("theorem1_min", "goal", "classical_q4", "per_modulus_sum")
CSV_FIELDS = ("Q", "N", "Z", "bound_name", "lhs", "bound_value", "ratio", "log2NQ")


def bound_value(name: str, Q: int, N: int, Z: float) -> float:
    """Bound with the (NQ)^eps factor dropped (eps = 0)."""
    if Q < 1 or N < 1 or Z < 0:
        raise ValueError(f"need Q, N >= 1 and Z >= 0, got Q={Q}, N={N}, Z={Z}")
    if name == "theorem1_min":
        return (Q**3 + N + min(N * math.sqrt(Q), math.sqrt(N) * Q**2)) * Z
    if name == "goal":
        return (Q**3 + N + math.sqrt(N) * Q**2) * Z
    if name == "classical_q4":
        return (Q**4 + N) * Z
    if name == "per_modulus_sum":
        return Q * (N + Q**2) * Z
    raise ValueError(f"unknown bound {name!r}; expected one of {BOUND_NAMES}")


def q_range_class(Q: int, N: int) -> str:
    """Where Q sits relative to N^{1/4} < Q < N^{1/2}; boundaries go outward."""
    if Q**4 <= N:
        return "below"
    if Q**2 >= N:
        return "above"
    return "inside"


@dataclass(frozen=True)
class BoundReport:
    lhs: float
    bound_name: str
    bound_value: float
    ratio: float | None
    Q: int
    N: int
    Z: float

    @property
    def degenerate(self) -> bool:
        return self.bound_value == 0

    @property
    def log2NQ(self) -> float:
        return math.log2(self.N * self.Q)

    def to_row(self) -> dict:
        return {
            "Q": self.Q,
            "N": self.N,
            "Z": self.Z,
            "bound_name": self.bound_name,
            "lhs": self.lhs,
            "bound_value": self.bound_value,
            "ratio": "" if self.ratio is None else self.ratio,
            "log2NQ": self.log2NQ,
        }


def ratio_report(poly: TrigPolynomial, Q: int, name: str, lhs: float | None = None) -> BoundReport:
    """Exact full-range lhs against the named bound.

    ``lhs`` may be passed in when several bounds are reported for one sequence.
    """
    Z = norm_Z(poly)
    if lhs is None:
        lhs = lhs_square_moduli(poly, Q, "full")
    bv = bound_value(name, Q, poly.N, Z)
    ratio = lhs / bv if bv > 0 else None
    return BoundReport(lhs, name, bv, ratio, Q, poly.N, Z)


def classical_majorant_lhs(poly: TrigPolynomial, Q: int) -> float:
    """Sum over q <= Q^2 of sum over (a, q) = 1 of |S(a/q)|^2."""
    return math.fsum(lhs_single_modulus(poly, q, coprime=True) for q in range(1, Q * Q + 1))
