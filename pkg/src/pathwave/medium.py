"""Spatially varying acoustic medium on a three-region layout.

The medium is homogeneous for x < 0 (impedance ``z_left``, speed ``c_left``)
and for x > ``x_plus`` (``z_right``, ``c_right``), with a variable region on
[0, x_plus] described by an interior profile.  The impedance field Z(x)
controls reflections through the infinitesimal reflection coefficient
r(x) = Z'(x) / (2 Z(x)); the sound speed c(x) controls travel times.

Interior profiles:

- :class:`LinearInterp` -- Z and c linear across the region.
- :class:`SineOverlay` -- Z(x) = 0.25 + 0.75 x + sin(10 pi x)/10, c linear.
- :class:`PiecewiseLinear` -- ordered breakpoints with one-sided impedance
  values, allowing interior jumps; c linear.
- :class:`Tabulated` -- sampled Z and c with monotone (PCHIP) cubic
  interpolation, so monotone samples yield a monotone field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DiscontinuityPoint, NonPositiveDepth, NonPositiveSpeed

__all__ = [
    "LinearInterp",
    "SineOverlay",
    "PiecewiseLinear",
    "Tabulated",
    "Discontinuity",
    "MediumProfile",
    "interface_coefficients",
    "from_shallow_water",
]


@dataclass(frozen=True)
class LinearInterp:
    """Z and c interpolate linearly between the endpoint values."""


@dataclass(frozen=True)
class SineOverlay:
    """Z(x) = 0.25 + 0.75 x + sin(10 pi x)/10 on [0, 1]; c linear.

    Only meaningful with ``x_plus == 1`` and matching endpoint impedances
    Z(0) = 0.25, Z(1) = 1.0.
    """

    def z(self, x):
        return 0.25 + 0.75 * x + np.sin(10.0 * np.pi * x) / 10.0

    def dz(self, x):
        return 0.75 + np.pi * np.cos(10.0 * np.pi * x)


@dataclass(frozen=True)
class PiecewiseLinear:
    """Piecewise-linear impedance with one-sided values at breakpoints.

    ``xs`` are the interior node positions (must start at 0 and end at
    x_plus); ``z_right_of`` and ``z_left_of`` give the impedance just right
    of each node and just left of the following node, i.e. segment i spans
    [xs[i], xs[i+1]] with endpoint values (z_right_of[i], z_left_of[i+1]).
    A node where z_left_of != z_right_of is a jump and must be declared in
    the profile's ``discontinuities``.
    """

    xs: tuple
    z_left_of: tuple
    z_right_of: tuple

    def segment_index(self, x):
        xs = np.asarray(self.xs)
        return np.clip(np.searchsorted(xs, x, side="right") - 1, 0, len(xs) - 2)

    def z(self, x):
        x = np.asarray(x, dtype=float)
        i = self.segment_index(x)
        x0 = np.asarray(self.xs)[i]
        x1 = np.asarray(self.xs)[i + 1]
        z0 = np.asarray(self.z_right_of)[i]
        z1 = np.asarray(self.z_left_of)[i + 1]
        frac = np.where(x1 > x0, (x - x0) / np.where(x1 > x0, x1 - x0, 1.0), 0.0)
        return z0 + frac * (z1 - z0)

    def z_at_left(self, x):
        """Value approaching x from the left (differs from z() at a node)."""
        xs = np.asarray(self.xs)
        i = np.clip(np.searchsorted(xs, x, side="left") - 1, 0, len(xs) - 2)
        x0, x1 = xs[i], xs[i + 1]
        z0 = np.asarray(self.z_right_of)[i]
        z1 = np.asarray(self.z_left_of)[i + 1]
        frac = np.where(x1 > x0, (x - x0) / np.where(x1 > x0, x1 - x0, 1.0), 0.0)
        return z0 + frac * (z1 - z0)

    def dz(self, x):
        i = self.segment_index(x)
        xs = np.asarray(self.xs)
        x0, x1 = xs[i], xs[i + 1]
        z0 = np.asarray(self.z_right_of)[i]
        z1 = np.asarray(self.z_left_of)[i + 1]
        return (z1 - z0) / np.where(x1 > x0, x1 - x0, 1.0)


@dataclass(frozen=True)
class Tabulated:
    """Sampled Z(x), c(x) on [0, x_plus], monotone cubic interpolation."""

    xs: tuple
    zs: tuple
    cs: tuple
    _z_interp: PchipInterpolator = field(init=False, repr=False, compare=False)
    _c_interp: PchipInterpolator = field(init=False, repr=False, compare=False)
    _dz_interp: PchipInterpolator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        zi = PchipInterpolator(np.asarray(self.xs), np.asarray(self.zs))
        ci = PchipInterpolator(np.asarray(self.xs), np.asarray(self.cs))
        object.__setattr__(self, "_z_interp", zi)
        object.__setattr__(self, "_c_interp", ci)
        object.__setattr__(self, "_dz_interp", zi.derivative())

    def z(self, x):
        return self._z_interp(x)

    def dz(self, x):
        # interpolant's analytic derivative, never finite differences
        return self._dz_interp(x)

    def c(self, x):
        return self._c_interp(x)


@dataclass(frozen=True)
class Discontinuity:
    """An interior impedance jump at ``x`` with one-sided values."""

    x: float
    z_left: float
    z_right: float


@dataclass(frozen=True)
class MediumProfile:
    """Immutable description of the medium; safe for concurrent read use.

    Parameters
    ----------
    x_plus : float
        Width of the variable region (>= 0; zero only for the
        sharp-interface limit).
    z_left, z_right : float
        Exterior impedances Z_-, Z_+ (positive).
    c_left, c_right : float
        Exterior sound speeds c_-, c_+ (positive).
    interior : profile descriptor
        One of LinearInterp, SineOverlay, PiecewiseLinear, Tabulated.
    discontinuities : tuple of Discontinuity
        Declared interior jumps, ordered by position.  Jumps are first-class
        data; they are never inferred from steep gradients.
    """

    x_plus: float
    z_left: float
    z_right: float
    c_left: float
    c_right: float
    interior: object = field(default_factory=LinearInterp)
    discontinuities: tuple = ()

    def __post_init__(self):
        if self.x_plus < 0.0:
            raise ValueError("x_plus must be >= 0")
        for z in (self.z_left, self.z_right):
            if z <= 0.0:
                raise ValueError("impedances must be positive")
        for c in (self.c_left, self.c_right):
            if c <= 0.0:
                raise NonPositiveSpeed("sound speeds must be positive")
        xs = [d.x for d in self.discontinuities]
        if xs != sorted(xs):
            raise ValueError("discontinuities must be ordered by position")

    # -- impedance ---------------------------------------------------------

    def impedance(self, x):
        """Z(x), clamped to the exterior values; left value at a jump."""
        x = np.asarray(x, dtype=float)
        if self.x_plus == 0.0:
            out = np.where(x < 0.0, self.z_left, self.z_right)
            return out if out.ndim else float(out)
        xi = np.clip(x, 0.0, self.x_plus)
        if isinstance(self.interior, LinearInterp):
            zi = self.z_left + (self.z_right - self.z_left) * xi / self.x_plus
        elif isinstance(self.interior, SineOverlay):
            zi = self.interior.z(xi)
        elif isinstance(self.interior, PiecewiseLinear):
            zi = self.interior.z_at_left(np.where(xi > 0.0, xi, 0.0))
            zi = np.where(xi == 0.0, self.interior.z(0.0), zi)
        elif isinstance(self.interior, Tabulated):
            zi = self.interior.z(xi)
        else:  # pragma: no cover - descriptor contract
            raise TypeError(f"unknown interior kind {self.interior!r}")
        out = np.where(x < 0.0, self.z_left, np.where(x > self.x_plus, self.z_right, zi))
        return out if out.ndim else float(out)

    def impedance_right(self, x):
        """Companion query: the value just to the right of x."""
        x = np.asarray(x, dtype=float)
        if isinstance(self.interior, PiecewiseLinear) and self.x_plus > 0.0:
            xi = np.clip(x, 0.0, self.x_plus)
            zi = self.interior.z(xi)
            out = np.where(x < 0.0, self.z_left, np.where(x >= self.x_plus, self.z_right, zi))
            return out if out.ndim else float(out)
        eps = 1e-300  # continuous kinds: right value equals left value
        return self.impedance(x + 0.0 * eps)

    def speed(self, x):
        """c(x), clamped to the exterior values."""
        x = np.asarray(x, dtype=float)
        if self.x_plus == 0.0:
            out = np.where(x < 0.0, self.c_left, self.c_right)
            return out if out.ndim else float(out)
        xi = np.clip(x, 0.0, self.x_plus)
        if isinstance(self.interior, Tabulated):
            ci = self.interior.c(xi)
        else:
            ci = self.c_left + (self.c_right - self.c_left) * xi / self.x_plus
        out = np.where(x < 0.0, self.c_left, np.where(x > self.x_plus, self.c_right, ci))
        return out if out.ndim else float(out)

    # -- derived coefficients ---------------------------------------------

    def reflectivity(self, x):
        """r(x) = Z'(x) / (2 Z(x)) on [0, x_plus].

        Raises
        ------
        DiscontinuityPoint
            If x coincides with a declared jump, where r is undefined.
        """
        x = np.asarray(x, dtype=float)
        for d in self.discontinuities:
            if np.any(x == d.x):
                raise DiscontinuityPoint(f"r(x) undefined at declared jump x={d.x}")
        xi = np.clip(x, 0.0, self.x_plus)
        if isinstance(self.interior, LinearInterp):
            dz = (self.z_right - self.z_left) / self.x_plus
            z = self.z_left + dz * xi
        elif isinstance(self.interior, SineOverlay):
            dz = self.interior.dz(xi)
            z = self.interior.z(xi)
        elif isinstance(self.interior, PiecewiseLinear):
            dz = self.interior.dz(xi)
            z = self.interior.z(xi)
        elif isinstance(self.interior, Tabulated):
            dz = self.interior.dz(xi)
            z = self.interior.z(xi)
        else:  # pragma: no cover
            raise TypeError(f"unknown interior kind {self.interior!r}")
        out = np.asarray(dz / (2.0 * z))
        return out if out.ndim else float(out)

    def green_coefficient(self, x=None):
        """Amplification sqrt(Z(x)/Z_-); with no argument, the full-region value."""
        if x is None:
            return math.sqrt(self.z_right / self.z_left)
        z = self.impedance(x)
        return np.sqrt(np.asarray(z) / self.z_left) if np.ndim(z) else math.sqrt(z / self.z_left)

    def log_impedance_half(self, x):
        """Y(x) = log(Z(x)) / 2; differences of Y are integrals of r."""
        return 0.5 * np.log(self.impedance(x))

    @property
    def is_continuous(self):
        return len(self.discontinuities) == 0

    def impedance_monotone(self, samples=512):
        """True if Z is (weakly) monotone across the variable region."""
        if self.x_plus == 0.0:
            return True
        xs = np.linspace(0.0, self.x_plus, samples)
        zs = np.asarray(self.impedance(xs))
        dz = np.diff(zs)
        return bool(np.all(dz >= -1e-13) or np.all(dz <= 1e-13))


def interface_coefficients(z_minus, z_plus):
    """Sharp-interface transmission and reflection coefficients.

    C_T = 2 Z_+ / (Z_- + Z_+) and C_R = (Z_+ - Z_-) / (Z_- + Z_+) for a
    right-going wave incident from the Z_- side; C_T = 1 + C_R identically.
    """
    if z_minus <= 0.0 or z_plus <= 0.0:
        raise ValueError("impedances must be positive")
    denom = z_minus + z_plus
    return 2.0 * z_plus / denom, (z_plus - z_minus) / denom


def from_shallow_water(h_left, h_right, x_plus=1.0, gravity=1.0,
                       depth=None, samples=257):
    """Medium for linearized shallow water: c = sqrt(g h), Z = 1 / sqrt(g h).

    ``depth`` may be a callable h(x) on [0, x_plus]; by default h varies
    linearly between ``h_left`` and ``h_right``.  The amplification
    green_coefficient() then equals (h_-/h_+)**(1/4).
    """
    if h_left <= 0.0 or h_right <= 0.0:
        raise NonPositiveDepth("depths must be positive")
    if gravity <= 0.0:
        raise ValueError("gravity must be positive")

    def h_of(x):
        if depth is not None:
            return np.asarray(depth(x), dtype=float)
        return h_left + (h_right - h_left) * np.asarray(x, dtype=float) / max(x_plus, 1e-300)

    z_l = 1.0 / math.sqrt(gravity * h_left)
    z_r = 1.0 / math.sqrt(gravity * h_right)
    c_l = math.sqrt(gravity * h_left)
    c_r = math.sqrt(gravity * h_right)
    if x_plus == 0.0:
        return MediumProfile(0.0, z_l, z_r, c_l, c_r)
    xs = np.linspace(0.0, x_plus, samples)
    hs = h_of(xs)
    if np.any(hs <= 0.0):
        raise NonPositiveDepth("depth profile must be positive on [0, x_plus]")
    zs = 1.0 / np.sqrt(gravity * hs)
    cs = np.sqrt(gravity * hs)
    interior = Tabulated(tuple(xs), tuple(zs), tuple(cs))
    return MediumProfile(x_plus, z_l, z_r, c_l, c_r, interior=interior)
