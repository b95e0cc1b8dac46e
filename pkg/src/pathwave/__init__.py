"""Reflection-series solution of the 1D variable-coefficient acoustic wave
equation, with zigzag-number asymptotics, truncation bounds, and an
independent finite-volume reference solver."""

__version__ = "0.1.0"

from .asymptotics import (BoundInputs, StrongBound, ZigzagTable,
                          alternating_count_bruteforce, andre_partial_sum,
                          asymptotic_term, closed_form_coefficients,
                          simplex_volume, tail_bound_strong,
                          tail_bound_uniform, volume_bound, zigzag)
from .characteristics import (ReflectionSequence, TravelTimeMap,
                              build_travel_time, frontier_point,
                              origin_reflected, origin_transmitted,
                              path_travel_time)
from .errors import (CFLViolation, ComputeError, ConfigError,
                     DiscontinuityPoint, HypothesisViolated, NonPositiveDepth,
                     NonPositiveSpeed, OrderTooDeep, OutOfDisk, ParityMismatch,
                     PathwaveError, ToleranceNotMet, TooLarge,
                     UnresolvedDelta, UnsupportedTopology)
from .fv_oracle import Grid1D, WaveField, self_convergence, solve
from .medium import (Discontinuity, LinearInterp, MediumProfile,
                     PiecewiseLinear, SineOverlay, Tabulated,
                     from_shallow_water, interface_coefficients)
from .path_series import (InitialData, PartialSum, QuadratureSpec, SeriesTerm,
                          field_w1, field_w2, nested_simplex_quadrature,
                          partial_sum, r1_piecewise, term_R, term_T)

__all__ = [name for name in dir() if not name.startswith("_")]
