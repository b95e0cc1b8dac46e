"""Series terms as nested integrals over alternating reflection sequences.

Each term of order n is an n-fold iterated integral over the alternating
region: x_1 anywhere in [0, x_plus], x_2 in [0, x_1], x_3 in [x_2, x_plus],
and so on, with the initial data evaluated at the path origin and a factor
r(x_j) per turning point.  The innermost integral carries the arrival-time
cut; for step data it reduces to an exact impedance-log difference, and for
delta data to the analytic time derivative of the step term.

The quadrature is recursive tensor Gauss-Legendre with variable limits.
The interval one level above the innermost is split at the points where the
moving cut limit meets the region boundary, so each Gauss panel sees a
smooth integrand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss

from . import asymptotics
from .characteristics import TravelTimeMap
from .errors import OrderTooDeep, ToleranceNotMet, UnsupportedTopology
from .medium import MediumProfile, interface_coefficients

__all__ = [
    "InitialData",
    "QuadratureSpec",
    "SeriesTerm",
    "PartialSum",
    "term_T",
    "term_R",
    "field_w1",
    "field_w2",
    "partial_sum",
    "r1_piecewise",
    "nested_simplex_quadrature",
]


@dataclass(frozen=True)
class InitialData:
    """Right-going initial pressure disturbance, supported in x <= 0.

    kind is one of "step" (p0 = 1 for x <= 0), "delta" (p0 = delta(x),
    realized as the time derivative of the step solution), or "general"
    (callable p0 with known support and magnitude/slope maxima).
    """

    kind: str
    p0: Optional[Callable] = None
    support: tuple = (-math.inf, 0.0)
    max_abs: float = 1.0
    max_slope: float = 0.0

    def __post_init__(self):
        if self.kind not in ("step", "delta", "general"):
            raise ValueError(f"unknown initial data kind {self.kind!r}")
        if self.kind == "general":
            if self.p0 is None:
                raise ValueError("general data requires a callable p0")
            if self.support[1] > 0.0:
                raise ValueError("initial data must be supported in x <= 0")

    @classmethod
    def step(cls):
        return cls("step", max_abs=1.0)

    @classmethod
    def delta(cls):
        return cls("delta")

    @classmethod
    def gaussian(cls, width, center=None):
        """Unit-mass Gaussian pulse approximating delta(x), shifted into x < 0."""
        if center is None:
            center = -5.0 * width
        if center + 5.0 * width > 0.0:
            raise ValueError("gaussian must fit inside x <= 0")
        amp = 1.0 / (width * math.sqrt(2.0 * math.pi))

        def p0(x):
            x = np.asarray(x, dtype=float)
            return amp * np.exp(-0.5 * ((x - center) / width) ** 2)

        return cls("general", p0=p0,
                   support=(center - 8.0 * width, min(0.0, center + 8.0 * width)),
                   max_abs=amp, max_slope=amp / width * math.exp(-0.5))

    def eval(self, xi):
        xi = np.asarray(xi, dtype=float)
        if self.kind == "step":
            out = np.where(xi <= 0.0, 1.0, 0.0)
        elif self.kind == "general":
            lo, hi = self.support
            inside = (xi >= lo) & (xi <= hi)
            out = np.where(inside, self.p0(np.clip(xi, lo, hi)), 0.0)
        else:
            raise ValueError("delta data has no pointwise values")
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts and tolerances for the nested quadrature.

    ``nodes`` is the Gauss-Legendre order per level; terms of order
    >= ``deep_from`` drop to ``nodes_deep`` to keep the tensor count sane.
    The error estimate compares against ``nodes + error_nodes_extra``.
    """

    nodes: int = 24
    nodes_deep: int = 12
    deep_from: int = 4
    rel_tol: float = 1e-4
    n_max: int = 9
    max_refinements: int = 2
    error_nodes_extra: int = 8
    delta_literal: bool = False  # use the printed delta-term form (no chain factor)

    def __post_init__(self):
        if self.nodes < 4 or self.nodes_deep < 4:
            raise ValueError("need at least 4 Gauss nodes per level")
        if self.n_max < 0:
            raise ValueError("n_max must be >= 0")

    def base_nodes(self, order):
        return self.nodes if order < self.deep_from else self.nodes_deep


@dataclass(frozen=True)
class SeriesTerm:
    """One evaluated series term with its quadrature error estimate."""

    kind: str  # "R", "T", "w1", "w2"
    n: int
    x: float
    t: float
    value: float
    sign: int
    error: float
    nodes: int

    def __post_init__(self):
        if self.kind in ("R", "w1") and self.n % 2 != 1:
            raise ValueError("reflection-type terms have odd order")
        if self.kind in ("T", "w2") and self.n % 2 != 0:
            raise ValueError("transmission-type terms have even order")


@dataclass(frozen=True)
class PartialSum:
    value: float
    terms: tuple
    strong_tail: object = None  # StrongBound or None if hypotheses fail
    uniform_tail: tuple = None  # (bound_w1, bound_w2) or None


# ---------------------------------------------------------------------------
# nested quadrature engine
# ---------------------------------------------------------------------------

def _panel_nodes(lo, hi, splits, xi, wk):
    """Gauss nodes over [lo, hi] split at the candidate points.

    lo, hi: (S,) arrays; splits: (S, K) candidates (clipped internally).
    Returns nodes and weights of shape (S, (K+1)*G).
    """
    S = lo.shape[0]
    if splits is None:
        edges = np.stack([lo, hi], axis=1)
    else:
        clipped = np.clip(splits, lo[:, None], hi[:, None])
        edges = np.concatenate([lo[:, None], np.sort(clipped, axis=1), hi[:, None]], axis=1)
    e0 = edges[:, :-1]  # (S, P)
    e1 = edges[:, 1:]
    half = 0.5 * (e1 - e0)
    mid = 0.5 * (e1 + e0)
    x = mid[:, :, None] + half[:, :, None] * xi  # (S, P, G)
    w = half[:, :, None] * wk
    return x.reshape(S, -1), w.reshape(S, -1)


# flattened prefix arrays are processed in blocks of at most this many
# elements so deep orders stream instead of materializing the full tensor
_CHUNK = 2_000_000


def _nested_raw(profile, ttmap, data, n, x_arr, t, G):
    """Raw nested integral (without the parity sign and C_G prefactor)."""
    if n == 0:
        if data.kind == "delta":
            return 0.0  # singular front carries the mass; zero away from it
        return float(data.eval(-ttmap.c_minus * (t - ttmap.tau(x_arr))))

    xp = profile.x_plus
    tau_x = float(ttmap.tau(x_arr))
    t_plus = ttmap.t_plus
    xi, wk = leggauss(G)
    odd_inner = n % 2 == 1

    def finish(xprev, tpref, w):
        if data.kind in ("step", "delta"):
            if odd_inner:
                lo = np.maximum(x_arr, xprev)
                arg = 0.5 * (t + tau_x - tpref)
                xcut = np.asarray(ttmap.X(arg))
                if data.kind == "step":
                    y_hi = np.asarray(profile.log_impedance_half(xcut))
                    y_lo = np.asarray(profile.log_impedance_half(lo))
                    inner = np.where(xcut > lo, y_hi - y_lo, 0.0)
                else:
                    mask = (arg < t_plus) & (xcut > lo)
                    inner = np.where(mask, _delta_weight(profile, ttmap, xcut), 0.0)
            else:
                hi = np.minimum(x_arr, xprev)
                arg = 0.5 * (tpref + tau_x - t)
                xcut = np.asarray(ttmap.X(arg))
                if data.kind == "step":
                    y_hi = np.asarray(profile.log_impedance_half(hi))
                    y_lo = np.asarray(profile.log_impedance_half(xcut))
                    inner = np.where(hi > xcut, y_hi - y_lo, 0.0)
                else:
                    mask = (arg > 0.0) & (xcut < hi)
                    inner = np.where(mask, _delta_weight(profile, ttmap, xcut), 0.0)
            return float(np.sum(w * inner))

        # general data: quadrature of p0(xi(x_n)) r(x_n) with support splitting
        s_lo, s_hi = data.support
        s_lo_c = s_lo / ttmap.c_minus if np.isfinite(s_lo) else -1e30
        if odd_inner:
            lo = np.maximum(x_arr, xprev)
            hi = np.full_like(xprev, xp)
            K = t - tpref + tau_x
            cut_a = np.asarray(ttmap.X(0.5 * (K + s_lo_c)))
            cut_b = np.asarray(ttmap.X(0.5 * (K + s_hi / ttmap.c_minus)))
        else:
            lo = np.zeros_like(xprev)
            hi = np.minimum(x_arr, xprev)
            K = t - tpref - tau_x
            cut_a = np.asarray(ttmap.X(-0.5 * (K + s_hi / ttmap.c_minus)))
            cut_b = np.asarray(ttmap.X(-0.5 * (K + s_lo_c)))
        splits = np.stack([cut_a, cut_b], axis=1)
        xn, wn = _panel_nodes(lo, hi, splits, xi, wk)
        rn = np.asarray(profile.reflectivity(xn))
        taun = np.asarray(ttmap.tau(xn))
        if odd_inner:
            xi_origin = -ttmap.c_minus * (t - tpref[:, None] - 2.0 * taun + tau_x)
        else:
            xi_origin = -ttmap.c_minus * (t - tpref[:, None] + 2.0 * taun - tau_x)
        vals = data.eval(xi_origin) * rn
        mask = np.asarray(hi)[:, None] > np.asarray(lo)[:, None]
        inner = np.sum(np.where(mask, wn * vals, 0.0), axis=1)
        return float(np.sum(w * inner))

    def descend(j, xprev, tpref, w):
        if j == n:
            return finish(xprev, tpref, w)
        if xprev.size * 4 * G > _CHUNK and xprev.size > 1:
            k = max(1, _CHUNK // (4 * G))
            return math.fsum(
                descend(j, xprev[i:i + k], tpref[i:i + k], w[i:i + k])
                for i in range(0, xprev.size, k))
        odd = j % 2 == 1
        if odd:
            lo, hi = xprev, np.full_like(xprev, xp)
        else:
            lo, hi = np.zeros_like(xprev), xprev

        splits = None
        if j == n - 1:
            # split where the innermost cut limit meets the region boundary;
            # for general data, one locus per (finite) support edge
            if data.kind in ("step", "delta"):
                shifts = [0.0]
            else:
                shifts = [s / ttmap.c_minus for s in data.support
                          if np.isfinite(s)]
            cands = []
            for sh in shifts:
                if odd_inner:  # odd innermost, upper cut x_hat = X(A + tau(x_j))
                    A = 0.5 * (t + tau_x - tpref) + 0.5 * sh
                    cands.append(np.asarray(ttmap.X(t_plus - A)))
                    cands.append(np.asarray(ttmap.X(tau_x - A)))
                else:  # even innermost, lower cut x_check = X(B + tau(x_j))
                    B = 0.5 * (tpref + tau_x - t) - 0.5 * sh
                    cands.append(np.asarray(ttmap.X(-B)))
                    cands.append(np.asarray(ttmap.X(tau_x - B)))
            cands.append(np.full_like(cands[0], x_arr))
            splits = np.stack(cands, axis=1)

        xj, wj = _panel_nodes(lo, hi, splits, xi, wk)
        rj = np.asarray(profile.reflectivity(xj))
        tauj = np.asarray(ttmap.tau(xj))
        sgn = 2.0 if odd else -2.0
        tpref_new = (tpref[:, None] + sgn * tauj).ravel()
        w_new = (w[:, None] * wj * rj).ravel()
        return descend(j + 1, xj.ravel(), tpref_new, w_new)

    return descend(1, np.array([0.0]), np.array([0.0]), np.array([1.0]))


def _delta_weight(profile, ttmap, xcut):
    """Chain-rule weight r(x) c(x) / (2 c_-) at the moving cut point."""
    r = np.asarray(profile.reflectivity(xcut))
    if _DELTA_LITERAL:
        return r
    c = np.asarray(profile.speed(xcut))
    return r * c / (2.0 * ttmap.c_minus)


# the literal (printed) delta form is selected per call via QuadratureSpec
_DELTA_LITERAL = False


def _eval_term(profile, ttmap, data, kind, n, x_arr, t, spec):
    if not profile.is_continuous:
        raise UnsupportedTopology(
            "series terms require a continuous medium; use r1_piecewise for one jump")
    if profile.x_plus == 0.0 and n > 0:
        raise UnsupportedTopology(
            "zero-width region: reflection terms are defined only as the "
            "sharp-interface limit; use interface_coefficients")
    if n > spec.n_max:
        raise OrderTooDeep(f"order {n} exceeds configured maximum {spec.n_max}")

    m = n // 2
    prefactor = ((-1.0) ** m) * float(profile.green_coefficient(x_arr))
    # tolerance is relative to the natural term magnitude, which grows with
    # the impedance contrast like C_G^2
    scale = max(1.0, profile.green_coefficient() ** 2)

    global _DELTA_LITERAL
    _DELTA_LITERAL = spec.delta_literal
    try:
        if n <= 1 and data.kind in ("step", "delta"):
            # innermost handled analytically: no quadrature error
            raw = _nested_raw(profile, ttmap, data, n, x_arr, t, max(spec.nodes, 4))
            return SeriesTerm(kind, n, float(x_arr), float(t), prefactor * raw,
                              (-1) ** m, 0.0, 0)

        G = spec.base_nodes(n)
        err = math.inf
        value = 0.0
        for attempt in range(spec.max_refinements + 1):
            v1 = _nested_raw(profile, ttmap, data, n, x_arr, t, G)
            v2 = _nested_raw(profile, ttmap, data, n, x_arr, t, G + spec.error_nodes_extra)
            err = abs(v1 - v2) * abs(prefactor)
            value = prefactor * v2
            if err <= spec.rel_tol * scale:
                break
            if attempt < spec.max_refinements:
                G += spec.error_nodes_extra
        if err > spec.rel_tol * scale:
            raise ToleranceNotMet(
                f"{kind}_{n} error estimate {err:.3e} exceeds "
                f"{spec.rel_tol * scale:.3e} at {G} nodes")
        return SeriesTerm(kind, n, float(x_arr), float(t), value, (-1) ** m, err, G)
    finally:
        _DELTA_LITERAL = False


# ---------------------------------------------------------------------------
# public term evaluators
# ---------------------------------------------------------------------------

def term_T(profile, ttmap, data, m, t, spec=QuadratureSpec()):
    """Transmitted-wave term of order n = 2m at the right edge x = x_plus."""
    if math.isinf(t):
        if data.kind != "step":
            raise ValueError("long-time limits are defined for step data")
        v = asymptotics.asymptotic_term("T", 2 * m, profile.green_coefficient())
        return SeriesTerm("T", 2 * m, profile.x_plus, t, v, (-1) ** m, 0.0, 0)
    return _eval_term(profile, ttmap, data, "T", 2 * m, profile.x_plus, t, spec)


def term_R(profile, ttmap, data, m, t, spec=QuadratureSpec()):
    """Reflected-wave term of order n = 2m + 1 at the left edge x = 0."""
    if math.isinf(t):
        if data.kind != "step":
            raise ValueError("long-time limits are defined for step data")
        v = asymptotics.asymptotic_term("R", 2 * m + 1, profile.green_coefficient())
        return SeriesTerm("R", 2 * m + 1, 0.0, t, v, (-1) ** m, 0.0, 0)
    return _eval_term(profile, ttmap, data, "R", 2 * m + 1, 0.0, t, spec)


def field_w1(profile, ttmap, data, m, x, t, spec=QuadratureSpec()):
    """Left-going interior field term w1 of order 2m + 1 at (x, t)."""
    if not 0.0 <= x <= profile.x_plus:
        raise ValueError("interior fields are defined on [0, x_plus]")
    return _eval_term(profile, ttmap, data, "w1", 2 * m + 1, x, t, spec)


def field_w2(profile, ttmap, data, m, x, t, spec=QuadratureSpec()):
    """Right-going interior field term w2 of order 2m at (x, t)."""
    if not 0.0 <= x <= profile.x_plus:
        raise ValueError("interior fields are defined on [0, x_plus]")
    return _eval_term(profile, ttmap, data, "w2", 2 * m, x, t, spec)


def partial_sum(profile, ttmap, data, n_order, x, t, spec=QuadratureSpec(),
                with_bounds=True):
    """Pressure partial sum through even order N = n_order at (x, t).

    Inside [0, x_plus] the pressure is the sum of the interior field terms
    w2_{2m} (2m <= N) and w1_{2m+1} (2m+1 <= N+1).  Outside, terms are the
    edge series evaluated at the appropriately retarded time, plus the
    incident disturbance on the left.
    """
    if n_order > spec.n_max:
        raise OrderTooDeep(f"order {n_order} exceeds configured maximum {spec.n_max}")
    terms = []
    incident = 0.0
    if x < 0.0:
        t_ret = t + x / profile.c_left
        if data.kind != "delta":
            incident = float(data.eval(x - profile.c_left * t))
        for m in range(0, (n_order + 1) // 2 + 1):
            if 2 * m + 1 > n_order + 1:
                break
            terms.append(term_R(profile, ttmap, data, m, t_ret, spec))
    elif x > profile.x_plus:
        t_ret = t - (x - profile.x_plus) / profile.c_right
        for m in range(0, n_order // 2 + 1):
            terms.append(term_T(profile, ttmap, data, m, t_ret, spec))
    else:
        for m in range(0, n_order // 2 + 1):
            terms.append(field_w2(profile, ttmap, data, m, x, t, spec))
        for m in range(0, (n_order + 1) // 2 + 1):
            if 2 * m + 1 > n_order + 1:
                break
            terms.append(field_w1(profile, ttmap, data, m, x, t, spec))

    value = incident + math.fsum(term.value for term in terms)

    strong = None
    uniform = None
    if with_bounds:
        try:
            lead = next((abs(tt_.value) for tt_ in terms if tt_.n in (0, 1)), 0.0)
            strong = asymptotics.tail_bound_strong(
                "T", n_order // 2 + 1, profile.green_coefficient(), lead,
                monotone=profile.impedance_monotone())
        except asymptotics.HypothesisViolated:
            strong = None
        if data.kind != "delta":
            inputs = asymptotics.BoundInputs.from_profile(
                profile, data_max=data.max_abs, data_slope_max=data.max_slope)
            xc = min(max(x, 0.0), profile.x_plus)
            uniform = asymptotics.tail_bound_uniform(
                inputs, n_order // 2, xc, t, ttmap,
                float(profile.green_coefficient(xc)))
    return PartialSum(value, tuple(terms), strong, uniform)


def r1_piecewise(profile, ttmap, t):
    """Once-reflected amplitude for step data with one interior impedance jump.

    The continuous contribution integrates r over the portions of [0, X(t/2)]
    on either side of the jump, with the through-jump paths weighted by the
    two transmission factors; the jump itself contributes its reflection
    coefficient once the round trip to it has completed.
    """
    if len(profile.discontinuities) != 1:
        raise UnsupportedTopology("r1_piecewise supports exactly one interior jump")
    d = profile.discontinuities[0]
    xf = float(ttmap.X(t / 2.0))
    tau_d = float(ttmap.tau(d.x))
    z_minus = profile.z_left
    if xf <= d.x:
        cont = 0.5 * math.log(profile.impedance(xf) / z_minus)
        disc = 0.0
    else:
        ct_lr, _ = interface_coefficients(d.z_left, d.z_right)
        ct_rl, _ = interface_coefficients(d.z_right, d.z_left)
        cont = (0.5 * math.log(d.z_left / z_minus)
                + 0.5 * ct_lr * ct_rl * math.log(profile.impedance(xf) / d.z_right))
        _, disc = interface_coefficients(d.z_left, d.z_right)
        assert t >= 2.0 * tau_d - 1e-12
    return cont + disc


def nested_simplex_quadrature(n, G=12):
    """n-deep nested Gauss quadrature of 1 over the alternating region in [0,1]^n.

    Ties the quadrature recursion to the exact volume A_n / n!.
    """
    if n == 0:
        return 1.0
    xi, wk = leggauss(G)
    xprev = np.array([0.0])
    w = np.array([1.0])
    for j in range(1, n):
        odd = j % 2 == 1
        if odd:
            lo, hi = xprev, np.ones_like(xprev)
        else:
            lo, hi = np.zeros_like(xprev), xprev
        xj, wj = _panel_nodes(lo, hi, None, xi, wk)
        w = (w[:, None] * wj).ravel()
        xprev = xj.ravel()
    inner = (1.0 - xprev) if n % 2 == 1 else xprev
    return float(np.sum(w * inner))
