"""Independent finite-volume reference solver for variable-coefficient acoustics.

Solves p_t + K(x) u_x = 0, u_t + (1/rho(x)) p_x = 0 with K = Z c and
rho = Z / c, by Godunov's wave-propagation method.  Each cell interface is
decomposed with the exact two-material Riemann solution using the
neighboring (Z_{i-1}, Z_i), so sharp impedance contrasts reproduce the
interface transmission/reflection coefficients exactly.  First-order
upwind by default; optional second-order corrections with a flux limiter.

Boundaries are outflow (zero-order extrapolation).  The solver is the
oracle the series solution is validated against, so it shares no code
with the quadrature path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import CFLViolation, UnresolvedDelta
from .medium import MediumProfile

__all__ = ["Grid1D", "WaveField", "solve", "self_convergence"]

_LIMITERS = ("none", "minmod", "superbee", "mc")


@dataclass(frozen=True)
class Grid1D:
    """Uniform cell-centered grid with sampled material coefficients."""

    x_lo: float
    x_hi: float
    cells: int
    z: np.ndarray
    c: np.ndarray
    cfl: float = 0.9

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise CFLViolation(f"CFL number {self.cfl} outside (0, 1]")
        if self.cells < 10:
            raise ValueError("grid needs at least 10 cells")
        if self.x_hi <= self.x_lo:
            raise ValueError("empty domain")

    @property
    def dx(self):
        return (self.x_hi - self.x_lo) / self.cells

    @property
    def centers(self):
        return self.x_lo + (np.arange(self.cells) + 0.5) * self.dx

    @classmethod
    def from_profile(cls, profile: MediumProfile, t_final, cells=8000,
                     cfl=0.9, margin=None, x_lo=None, x_hi=None):
        """Domain wide enough that nothing reaches the boundaries by t_final."""
        if margin is None:
            margin = 0.25 * (1.0 + profile.x_plus)
        if x_lo is None:
            x_lo = -profile.c_left * t_final - margin
        if x_hi is None:
            x_hi = profile.x_plus + profile.c_right * t_final + margin
        dx = (x_hi - x_lo) / cells
        xs = x_lo + (np.arange(cells) + 0.5) * dx
        z = np.asarray(profile.impedance(xs), dtype=float)
        c = np.asarray(profile.speed(xs), dtype=float)
        return cls(x_lo, x_hi, cells, z, c, cfl)


@dataclass(frozen=True)
class WaveField:
    """Snapshot of the pressure and velocity fields at time t."""

    t: float
    x: np.ndarray
    p: np.ndarray
    u: np.ndarray
    grid: Grid1D = None

    def reflected_history(self, profile, incident):
        """Recover the left-edge signal s -> p(0, s) - incident from x < 0.

        For right-going data the left outgoing profile at the final time is
        the reflection history read backwards: p(x, t) - p_inc(x, t)
        equals the reflected sum at retarded time t + x / c_-.
        """
        mask = self.x < 0.0
        times = self.t + self.x[mask] / profile.c_left
        vals = self.p[mask] - incident(self.x[mask], self.t)
        order = np.argsort(times)
        return times[order], vals[order]

    def transmitted_history(self, profile):
        """Recover s -> p(x_+, s) from the profile on x > x_+."""
        mask = self.x > profile.x_plus
        times = self.t - (self.x[mask] - profile.x_plus) / profile.c_right
        vals = self.p[mask]
        order = np.argsort(times)
        return times[order], vals[order]


def _limit(theta, limiter):
    if limiter == "minmod":
        return np.maximum(0.0, np.minimum(1.0, theta))
    if limiter == "superbee":
        return np.maximum.reduce([np.zeros_like(theta),
                                  np.minimum(1.0, 2.0 * theta),
                                  np.minimum(2.0, theta)])
    if limiter == "mc":
        return np.maximum(0.0, np.minimum.reduce(
            [(1.0 + theta) / 2.0, 2.0 * np.ones_like(theta), 2.0 * theta]))
    return np.zeros_like(theta)


def _initial_state(profile, data, grid, delta_width):
    xs = grid.centers
    if data.kind == "step":
        p = np.where(xs <= 0.0, 1.0, 0.0)
    elif data.kind == "delta":
        if delta_width is None:
            delta_width = 6.0 * grid.dx
        if delta_width < 4.0 * grid.dx:
            raise UnresolvedDelta(
                f"delta width {delta_width:g} under 4 cells (dx={grid.dx:g})")
        center = -5.0 * delta_width
        amp = 1.0 / (delta_width * math.sqrt(2.0 * math.pi))
        p = amp * np.exp(-0.5 * ((xs - center) / delta_width) ** 2)
    else:
        p = np.asarray(data.eval(xs), dtype=float)
    # right-going disturbance: u = p / Z in the (homogeneous) support region
    u = p / grid.z
    return p, u


def solve(profile, data, t_final, grid=None, limiter="none", delta_width=None):
    """March the acoustic system to t_final and return the final snapshot."""
    if limiter not in _LIMITERS:
        raise ValueError(f"limiter must be one of {_LIMITERS}")
    if grid is None:
        grid = Grid1D.from_profile(profile, t_final)
    p, u = _initial_state(profile, data, grid, delta_width)
    dx = grid.dx
    c_max = float(np.max(grid.c))
    dt = grid.cfl * dx / c_max
    if dt <= 0.0 or c_max * dt / dx > 1.0 + 1e-12:
        raise CFLViolation("time step violates the CFL condition")

    # material arrays padded with two outflow ghost cells per side
    zg = np.pad(grid.z, 2, mode="edge")
    cg = np.pad(grid.c, 2, mode="edge")
    zl, zr = zg[:-1], zg[1:]
    cl, cr = cg[:-1], cg[1:]
    zsum = zl + zr
    n = grid.cells
    second_order = limiter != "none"

    t = 0.0
    while t < t_final - 1e-14:
        step = min(dt, t_final - t)
        nu = step / dx
        pg = np.pad(p, 2, mode="edge")
        ug = np.pad(u, 2, mode="edge")
        dp = np.diff(pg)
        du = np.diff(ug)
        b1 = (-dp + zr * du) / zsum   # left-going wave strength, speed -c_l
        b2 = (dp + zl * du) / zsum    # right-going wave strength, speed +c_r
        # fluctuations: A- dq goes to the left cell, A+ dq to the right cell
        am_p = b1 * cl * zl
        am_u = -b1 * cl
        ap_p = b2 * cr * zr
        ap_u = b2 * cr
        # interface k sits between padded cells k and k+1; interior cell i
        # (0-based) is padded cell i+2, with left interface k = i+1
        p_new = p - nu * (ap_p[1:1 + n] + am_p[2:2 + n])
        u_new = u - nu * (ap_u[1:1 + n] + am_u[2:2 + n])

        if second_order:
            # wave vectors W1 = b1(-zl, 1), W2 = b2(zr, 1)
            w1p, w1u = -b1 * zl, b1
            w2p, w2u = b2 * zr, b2
            # upwind comparison by projection onto the local wave vector
            n1 = w1p * w1p + w1u * w1u
            n2 = w2p * w2p + w2u * w2u
            th1 = np.ones_like(b1)
            th2 = np.ones_like(b2)
            np.divide(w1p[1:] * w1p[:-1] + w1u[1:] * w1u[:-1], n1[:-1],
                      out=th1[:-1], where=n1[:-1] > 0.0)
            np.divide(w2p[:-1] * w2p[1:] + w2u[:-1] * w2u[1:], n2[1:],
                      out=th2[1:], where=n2[1:] > 0.0)
            phi1 = _limit(th1, limiter)
            phi2 = _limit(th2, limiter)
            f1 = 0.5 * cl * (1.0 - cl * nu)
            f2 = 0.5 * cr * (1.0 - cr * nu)
            fp = f1 * phi1 * w1p + f2 * phi2 * w2p
            fu = f1 * phi1 * w1u + f2 * phi2 * w2u
            p_new -= nu * (fp[2:2 + n] - fp[1:1 + n])
            u_new -= nu * (fu[2:2 + n] - fu[1:1 + n])

        p, u = p_new, u_new
        t += step
    return WaveField(t_final, grid.centers, p, u, grid)


def self_convergence(profile, data, t_final, levels, limiter="none",
                     base_cells=500, delta_width=None):
    """Richardson estimate of the scheme's observed convergence order.

    Runs ``levels`` grids, each doubling the cell count, restricts finer
    solutions onto the coarsest grid by cell averaging, and fits the order
    from successive L1 differences.
    """
    if levels < 3:
        raise ValueError("need at least 3 grid levels")
    fields = []
    for k in range(levels):
        grid = Grid1D.from_profile(profile, t_final, cells=base_cells * 2 ** k)
        fields.append(solve(profile, data, t_final, grid, limiter=limiter,
                            delta_width=delta_width))
    coarse_n = fields[0].p.size
    restricted = [f.p.reshape(coarse_n, -1).mean(axis=1) for f in fields]
    diffs = [float(np.mean(np.abs(restricted[k] - restricted[k + 1])))
             for k in range(levels - 1)]
    if all(d == 0.0 for d in diffs):
        return math.inf  # exactly resolved (e.g. zero data)
    orders = [math.log2(diffs[k] / diffs[k + 1]) for k in range(len(diffs) - 1)
              if diffs[k + 1] > 0.0]
    return float(np.mean(orders)) if orders else math.inf
