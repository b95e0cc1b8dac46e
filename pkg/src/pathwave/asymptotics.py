"""Zigzag-number combinatorics, long-time limits, and truncation bounds.

The zigzag number A_n counts alternating (down-up) permutations of length
n; a_n = A_n / n! are the Maclaurin coefficients of sec + tan.  The
long-time limits of the transmission/reflection series terms are

    T_{2m}(inf) = (-1)^m a_{2m}   C_G (log C_G)^{2m}
    R_{2m+1}(inf) = (-1)^m a_{2m+1}  (log C_G)^{2m+1}

whose sums, for e^{-pi} < Z_+/Z_- < e^{pi}, are the sharp-interface
coefficients C_T = C_G sech(log C_G) and C_R = tanh(log C_G).

All table arithmetic is exact (Fraction); floats only at the API edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from .errors import HypothesisViolated, OutOfDisk, ParityMismatch, TooLarge

__all__ = [
    "ZigzagTable",
    "BoundInputs",
    "zigzag",
    "alternating_count_bruteforce",
    "is_alternating",
    "simplex_volume",
    "asymptotic_term",
    "closed_form_coefficients",
    "andre_partial_sum",
    "tail_bound_strong",
    "StrongBound",
    "tail_bound_uniform",
    "volume_bound",
]

STRONG_LOG_RATIO_LIMIT = 2.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class ZigzagTable:
    """Exact zigzag numbers A_n and rationals a_n = A_n / n! up to n_max."""

    n_max: int
    a: tuple  # Fractions a_0 .. a_{n_max}

    @property
    def A(self):
        return tuple(an * math.factorial(n) for n, an in enumerate(self.a))

    def a_float(self, n):
        return float(self.a[n])

    def A_int(self, n):
        A = self.a[n] * math.factorial(n)
        assert A.denominator == 1
        return int(A)


def zigzag(n_max: int) -> ZigzagTable:
    """Generate a_n exactly by the sec/tan product recursions.

    a_0 = a_1 = 1, then
        a_{2m}   = sum_{j=1..m}   (-1)^{j-1} a_{2(m-j)}   / (2j)!
        a_{2m+1} = sum_{j=1..m+1} (-1)^{j-1} a_{2(m-j+1)} / (2j-1)!
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    a = [Fraction(1)] * (n_max + 1)
    for n in range(2, n_max + 1):
        if n % 2 == 0:
            m = n // 2
            a[n] = sum((Fraction(-1) ** (j - 1)) * a[2 * (m - j)]
                       / math.factorial(2 * j) for j in range(1, m + 1))
        else:
            m = (n - 1) // 2
            a[n] = sum((Fraction(-1) ** (j - 1)) * a[2 * (m - j + 1)]
                       / math.factorial(2 * j - 1) for j in range(1, m + 2))
    return ZigzagTable(n_max, tuple(a[: n_max + 1]))


def is_alternating(seq) -> bool:
    """Down-up test: seq[j] >= seq[j-1] for odd j (1-based), <= for even."""
    prev = None
    for j, v in enumerate(seq, start=1):
        if prev is not None:
            if j % 2 == 0 and v > prev:
                return False
            if j % 2 == 1 and v < prev:
                return False
        prev = v
    return True


def alternating_count_bruteforce(n: int, exhaustive_limit: int = 12) -> int:
    """Count alternating permutations of 1..n by explicit enumeration.

    For n <= 8 every one of the n! permutations is generated and filtered.
    For larger n the same exhaustive search runs as a depth-first
    enumeration that abandons a prefix as soon as it breaks the down-up
    ordering (no closed form or recursion is consulted).
    """
    if n > exhaustive_limit:
        raise TooLarge(f"brute-force enumeration capped at n={exhaustive_limit}")
    if n == 0:
        return 1
    if n <= 8:
        return sum(1 for p in permutations(range(n)) if is_alternating(p))

    count = 0
    items = list(range(n))

    def extend(prefix_last, remaining, depth):
        nonlocal count
        if not remaining:
            count += 1
            return
        j = depth + 1  # 1-based index of the next element
        for i, v in enumerate(remaining):
            if depth > 0:
                if j % 2 == 0 and v > prefix_last:
                    continue
                if j % 2 == 1 and v < prefix_last:
                    continue
            extend(v, remaining[:i] + remaining[i + 1:], depth + 1)

    extend(None, items, 0)
    return count


def simplex_volume(n: int, alpha: float, beta: float) -> float:
    """Volume of the alternating-sequence region in [alpha, beta]^n.

    Equals (A_n / n!) (beta - alpha)^n.
    """
    if beta < alpha:
        raise ValueError("requires beta >= alpha")
    table = zigzag(n)
    return float(table.a[n]) * (beta - alpha) ** n


def asymptotic_term(kind: str, n: int, c_green: float) -> float:
    """Long-time limit of a single series term for step initial data.

    kind 'T' needs even n, kind 'R' odd n.
    """
    if kind == "T":
        if n % 2 != 0:
            raise ParityMismatch("transmission terms have even order")
        m = n // 2
        return ((-1.0) ** m) * zigzag(n).a_float(n) * c_green * math.log(c_green) ** n
    if kind == "R":
        if n % 2 != 1:
            raise ParityMismatch("reflection terms have odd order")
        m = (n - 1) // 2
        return ((-1.0) ** m) * zigzag(n).a_float(n) * math.log(c_green) ** n
    raise ValueError("kind must be 'T' or 'R'")


def closed_form_coefficients(c_green: float):
    """(C_T, C_R) from the amplification factor alone.

    C_T = C_G sech(log C_G) and C_R = tanh(log C_G); these agree with the
    sharp-interface formulas for any impedance ratio C_G**2.
    """
    if c_green <= 0.0:
        raise ValueError("amplification factor must be positive")
    y = math.log(c_green)
    return c_green / math.cosh(y), math.tanh(y)


def andre_partial_sum(z: float, n_terms: int) -> float:
    """Partial sum sum_{n<=N} (A_n/n!) z^n of the sec + tan series."""
    if abs(z) >= math.pi / 2.0:
        raise OutOfDisk("series for sec + tan requires |z| < pi/2")
    table = zigzag(n_terms)
    return float(sum(table.a_float(n) * z ** n for n in range(n_terms + 1)))


@dataclass(frozen=True)
class StrongBound:
    """Geometric tail bound with a flag for non-contracting ratios."""

    value: float
    ratio: float
    contracting: bool


def tail_bound_strong(kind: str, n_terms: int, c_green: float,
                      leading_term_abs: float, *, monotone: bool = True) -> StrongBound:
    """Tail bound (C_G^2 / 2)^N |leading term| for monotone impedance.

    Valid for monotone Z with e^{-2 sqrt 2} < Z_+/Z_- < e^{2 sqrt 2}.  A
    ratio C_G^2/2 >= 1 is reported but flagged as non-contracting rather
    than rejected, since the hypothesis range admits it.
    """
    if kind not in ("T", "R"):
        raise ValueError("kind must be 'T' or 'R'")
    if not monotone:
        raise HypothesisViolated("strong bound requires monotone impedance")
    log_ratio = 2.0 * math.log(c_green)
    if abs(log_ratio) >= STRONG_LOG_RATIO_LIMIT:
        raise HypothesisViolated(
            f"impedance ratio outside (e^-2sqrt2, e^2sqrt2): log ratio {log_ratio:.4g}")
    ratio = 0.5 * c_green ** 2
    return StrongBound(ratio ** n_terms * abs(leading_term_abs), ratio, ratio < 1.0)


@dataclass(frozen=True)
class BoundInputs:
    """Quantities entering the uniform convergence bound.

    C is the speed maximum, zeta the reflectivity-magnitude maximum, M and
    D the initial-data magnitude and slope maxima.
    """

    c_max: float
    zeta: float
    data_max: float
    data_slope_max: float = 0.0

    def __post_init__(self):
        for v in (self.c_max, self.zeta, self.data_max, self.data_slope_max):
            if not (v >= 0.0 and math.isfinite(v)):
                raise ValueError("bound inputs must be nonnegative and finite")

    @classmethod
    def from_profile(cls, profile, data_max=1.0, data_slope_max=0.0, samples=2048):
        xs = np.linspace(0.0, profile.x_plus, samples) if profile.x_plus > 0 else np.array([0.0])
        c_max = float(max(np.max(profile.speed(xs)), profile.c_left, profile.c_right))
        if profile.x_plus > 0:
            zeta = float(np.max(np.abs(profile.reflectivity(xs))))
        else:
            zeta = 0.0
        return cls(c_max, zeta, data_max, data_slope_max)


def tail_bound_uniform(inputs: BoundInputs, n_terms: int, x: float, t: float,
                       ttmap, c_green_at_x: float):
    """Factorial tail bounds on the interior field sums beyond order N.

    Returns (bound_w1, bound_w2):

        bound_w1 = M C_G(x) (zeta C (t + tau(x)))^{2N+2} / (2N+2)! * sinh(zeta C t)
        bound_w2 = M C_G(x) (zeta C (t - tau(x)))^{2N+2} / (2N+2)! * cosh(zeta C t)

    with the worst-case internal time t_* = t.
    """
    zc = inputs.zeta * inputs.c_max
    tau_x = float(ttmap.tau(x))
    k = 2 * n_terms + 2
    fac = math.factorial(k)
    common = inputs.data_max * c_green_at_x
    b1 = common * (zc * (t + tau_x)) ** k / fac * math.sinh(zc * t)
    b2 = common * abs(zc * (t - tau_x)) ** k / fac * math.cosh(zc * t)
    return b1, b2


def volume_bound(n: int, t: float, c_max: float) -> float:
    """Upper bound (C t)^n / n! on the time-constrained path-set volume."""
    if t <= 0.0:
        return 0.0
    return (c_max * t) ** n / math.factorial(n)
