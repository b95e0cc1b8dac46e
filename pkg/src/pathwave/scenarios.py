"""Scenario configuration: presets, config parsing, and execution.

A scenario bundles a medium, initial data, an evaluation time, the series
orders to sum, quadrature and oracle settings, and sampling/output
options.  Times (and lengths) may be given as plain numbers or as unit
expressions such as ``"3 t_plus"``; they resolve against the scenario's
own crossing time.

Presets reproduce the published experiments: ``example1``–``example4``,
``greenslaw``, ``limit-sequence`` (a four-variant sharp-interface limit),
and ``piecewise``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
import yaml

from . import fv_oracle, path_series
from .asymptotics import BoundInputs, closed_form_coefficients, tail_bound_strong, tail_bound_uniform
from .characteristics import build_travel_time
from .errors import ComputeError, ConfigError, HypothesisViolated, PathwaveError
from .medium import (Discontinuity, LinearInterp, MediumProfile, PiecewiseLinear,
                     SineOverlay, from_shallow_water, interface_coefficients)
from .path_series import InitialData, QuadratureSpec

__all__ = ["Scenario", "ScenarioResult", "PRESETS", "load_config",
           "build_scenario", "run_scenario", "worker_count"]

WORKERS_ENV = "PATHWAVE_WORKERS"


def worker_count():
    """Worker pool size from the environment (default 1, deterministic)."""
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}")
    return max(1, n)


PRESETS = {
    "example1": {
        "description": "linear Z 1/2 -> 1, c 2 -> 1; step data at t = 3 t_plus",
        "medium": {"kind": "linear", "x_plus": 1.0, "z_left": 0.5,
                   "z_right": 1.0, "c_left": 2.0, "c_right": 1.0},
        "data": {"kind": "step"},
        "time": "3 t_plus",
        "series": {"orders": [2]},
    },
    "example2": {
        "description": "stronger contrast Z 1/8 -> 1; N=4 visibly improves on N=2",
        "medium": {"kind": "linear", "x_plus": 1.0, "z_left": 0.125,
                   "z_right": 1.0, "c_left": 2.0, "c_right": 1.0},
        "data": {"kind": "step"},
        "time": "3 t_plus",
        "series": {"orders": [2, 4]},
    },
    "example3": {
        "description": "extreme ratio Z 1 -> 20; low orders work only for short times",
        "medium": {"kind": "linear", "x_plus": 1.0, "z_left": 1.0,
                   "z_right": 20.0, "c_left": 2.0, "c_right": 1.0},
        "data": {"kind": "step"},
        "time": "3 t_plus",
        "series": {"orders": [2, 4]},
    },
    "example4": {
        "description": "oscillatory non-monotone Z(x) = 0.25 + 0.75x + sin(10 pi x)/10",
        "medium": {"kind": "sine", "x_plus": 1.0, "z_left": 0.25,
                   "z_right": 1.0, "c_left": 2.0, "c_right": 1.0},
        "data": {"kind": "step"},
        "time": "3 t_plus",
        "series": {"orders": [2, 4]},
    },
    "greenslaw": {
        "description": "amplitude growth to C_G across Z 1 -> 3 at constant speed",
        "medium": {"kind": "linear", "x_plus": 1.0, "z_left": 1.0,
                   "z_right": 3.0, "c_left": 1.0, "c_right": 1.0},
        "data": {"kind": "step"},
        "time": "1.5 t_plus",
        "series": {"orders": [2]},
    },
    "limit-sequence": {
        "description": "sharp-interface limit: region width 1, 1/2, 1/10, 0",
        "medium": {"kind": "linear", "x_plus": 1.0, "z_left": 0.5,
                   "z_right": 1.0, "c_left": 2.0, "c_right": 1.0},
        "data": {"kind": "gaussian", "width": 0.02},
        "time": 1.5,
        "series": {"orders": [2]},
        "samples": 81,
        "variants": [{"medium": {"x_plus": 1.0}},
                     {"medium": {"x_plus": 0.5}},
                     {"medium": {"x_plus": 0.1}},
                     {"medium": {"x_plus": 0.0}}],
    },
    "piecewise": {
        "description": "impedance 1 -> 1.2 | 1.8 -> 2 with an interior jump at 0.5",
        "medium": {"kind": "piecewise", "x_plus": 1.0, "z_left": 1.0,
                   "z_right": 2.0, "c_left": 1.0, "c_right": 1.0,
                   "jumps": [{"x": 0.5, "z_left": 1.2, "z_right": 1.8}]},
        "data": {"kind": "step"},
        "time": "2 t_plus",
        "series": {"orders": []},
    },
}


@dataclass(frozen=True)
class Scenario:
    """Fully validated scenario ready to execute."""

    name: str
    profile: MediumProfile
    data: InitialData
    time_spec: object           # number or "a t_plus" expression
    orders: tuple
    quad: QuadratureSpec
    oracle_cells: int = 8000
    oracle_cfl: float = 0.9
    oracle_limiter: str = "superbee"
    samples: int = 241
    delta_width: float = None
    figures: bool = True
    variants: tuple = ()


@dataclass(frozen=True)
class ScenarioResult:
    """Sampled series/oracle comparison plus term tables and checks."""

    scenario: Scenario
    t: float
    t_plus: float
    x: np.ndarray
    series: dict                # order N -> sampled partial sums
    oracle: np.ndarray
    terms: tuple                # SeriesTerm records at the evaluation time
    checks: tuple               # (name, status, detail) triples
    summary: dict


def resolve_units(value, t_plus, x_plus):
    """Resolve a number or 'a t_plus' / 'a x_plus' expression."""
    if isinstance(value, (int, float)):
        return float(value)
    parts = str(value).split()
    if len(parts) == 2 and parts[1] in ("t_plus", "x_plus"):
        try:
            scale = float(parts[0])
        except ValueError:
            raise ConfigError(f"bad unit expression {value!r}")
        return scale * (t_plus if parts[1] == "t_plus" else x_plus)
    try:
        return float(parts[0]) if len(parts) == 1 else float(value)
    except (ValueError, TypeError):
        raise ConfigError(f"cannot interpret quantity {value!r}")


def load_config(path_or_name):
    """Load a config mapping from a preset name or a YAML file path."""
    if path_or_name in PRESETS:
        return dict(PRESETS[path_or_name]), path_or_name
    if not os.path.exists(path_or_name):
        raise ConfigError(
            f"config {path_or_name!r} is neither a preset nor an existing file")
    with open(path_or_name) as fh:
        cfg = yaml.safe_load(fh)
    if not isinstance(cfg, dict):
        raise ConfigError(f"config file {path_or_name!r} must be a mapping")
    if "preset" in cfg:
        name = cfg["preset"]
        if name not in PRESETS:
            raise ConfigError(f"unknown preset {name!r} in key 'preset'")
        merged = dict(PRESETS[name])
        _deep_update(merged, {k: v for k, v in cfg.items() if k != "preset"})
        return merged, name
    return cfg, os.path.splitext(os.path.basename(path_or_name))[0]


def _deep_update(base, overrides):
    for k, v in overrides.items():
        if isinstance(v, dict) and isinstance(base.get(k), dict):
            base[k] = dict(base[k])
            _deep_update(base[k], v)
        else:
            base[k] = v
    return base


def _build_medium(mcfg):
    try:
        kind = mcfg.get("kind", "linear")
        x_plus = float(mcfg.get("x_plus", 1.0))
        z_l = float(mcfg.get("z_left", 1.0))
        z_r = float(mcfg.get("z_right", 1.0))
        c_l = float(mcfg.get("c_left", 1.0))
        c_r = float(mcfg.get("c_right", 1.0))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad medium parameter: {exc}")
    if kind == "shallow":
        return from_shallow_water(float(mcfg["h_left"]), float(mcfg["h_right"]),
                                  x_plus=x_plus,
                                  gravity=float(mcfg.get("gravity", 1.0)))
    if kind == "linear" or x_plus == 0.0:
        return MediumProfile(x_plus, z_l, z_r, c_l, c_r, interior=LinearInterp())
    if kind == "sine":
        return MediumProfile(x_plus, z_l, z_r, c_l, c_r, interior=SineOverlay())
    if kind == "piecewise":
        jumps = mcfg.get("jumps", [])
        if not jumps:
            raise ConfigError("piecewise medium requires key 'jumps'")
        xs = [0.0] + [float(j["x"]) for j in jumps] + [x_plus]
        z_left_of = [z_l] + [float(j["z_left"]) for j in jumps] + [z_r]
        z_right_of = [z_l] + [float(j["z_right"]) for j in jumps] + [z_r]
        interior = PiecewiseLinear(tuple(xs), tuple(z_left_of), tuple(z_right_of))
        disc = tuple(Discontinuity(float(j["x"]), float(j["z_left"]),
                                   float(j["z_right"])) for j in jumps)
        return MediumProfile(x_plus, z_l, z_r, c_l, c_r,
                             interior=interior, discontinuities=disc)
    raise ConfigError(f"unknown medium kind {kind!r}")


def _build_data(dcfg):
    kind = dcfg.get("kind", "step")
    if kind == "step":
        return InitialData.step()
    if kind == "delta":
        return InitialData.delta()
    if kind == "gaussian":
        width = float(dcfg.get("width", 0.02))
        center = dcfg.get("center")
        return InitialData.gaussian(width, None if center is None else float(center))
    raise ConfigError(f"unknown data kind {kind!r} (step, delta, gaussian)")


def build_scenario(cfg, name, order=None, nodes=None, tol=None,
                   oracle_cells=None):
    """Validate a config mapping; CLI flag overrides win over config keys."""
    profile = _build_medium(cfg.get("medium", {}))
    data = _build_data(cfg.get("data", {}))
    scfg = cfg.get("series", {})
    orders = tuple(int(n) for n in scfg.get("orders", [2]))
    if order is not None:
        orders = (int(order),)
    for n in orders:
        if n < 0 or n % 2 != 0:
            raise ConfigError(f"series order {n} must be a nonnegative even N")
    qcfg = dict(scfg.get("quadrature", {}))
    quad_kwargs = {}
    for key, target in (("nodes", "nodes"), ("nodes_deep", "nodes_deep"),
                        ("tol", "rel_tol"), ("n_max", "n_max")):
        if key in qcfg:
            quad_kwargs[target] = type(QuadratureSpec.__dataclass_fields__[target].default)(qcfg[key])
    if nodes is not None:
        # an explicit node count disables refinement so that tolerance
        # failures surface instead of being silently repaired
        quad_kwargs.update(nodes=int(nodes), nodes_deep=min(int(nodes), 12),
                           max_refinements=0)
    if tol is not None:
        quad_kwargs["rel_tol"] = float(tol)
    quad = QuadratureSpec(**quad_kwargs)

    ocfg = cfg.get("oracle", {})
    cells = int(oracle_cells if oracle_cells is not None
                else ocfg.get("cells", 8000))
    variants = tuple(cfg.get("variants", ()))
    return Scenario(
        name=name, profile=profile, data=data,
        time_spec=cfg.get("time", "3 t_plus"),
        orders=orders, quad=quad,
        oracle_cells=cells,
        oracle_cfl=float(ocfg.get("cfl", 0.9)),
        oracle_limiter=str(ocfg.get("limiter", "superbee")),
        samples=int(cfg.get("samples", 241)),
        delta_width=(float(cfg["data"]["width"])
                     if cfg.get("data", {}).get("kind") == "delta"
                     and "width" in cfg.get("data", {}) else None),
        figures=bool(cfg.get("output", {}).get("figures", True)),
        variants=variants,
    )


def scenario_variants(scenario, cfg, name):
    """Expand a multi-run scenario into its concrete variants."""
    out = []
    for i, override in enumerate(scenario.variants):
        sub_cfg = _deep_update({k: (dict(v) if isinstance(v, dict) else v)
                                for k, v in cfg.items() if k != "variants"},
                               override)
        out.append(build_scenario(sub_cfg, f"{name}-{i}"))
    return out


def _sample_points(grid, n_samples):
    return np.linspace(grid.x_lo + 2 * grid.dx, grid.x_hi - 2 * grid.dx,
                       n_samples)


def _series_profile(scenario, ttmap, t, xs, order, workers):
    """Partial sums at the sample points, deterministic across worker counts."""
    out = np.empty(xs.size, dtype=float)

    def eval_at(i):
        ps = path_series.partial_sum(scenario.profile, ttmap, scenario.data,
                                     order, float(xs[i]), t, scenario.quad,
                                     with_bounds=False)
        return i, ps.value

    if workers <= 1:
        for i in range(xs.size):
            out[i] = eval_at(i)[1]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for i, v in pool.map(eval_at, range(xs.size)):
                out[i] = v
    return out


def run_scenario(scenario: Scenario, workers=None) -> ScenarioResult:
    """Execute one scenario: oracle solve, series profiles, checks."""
    if workers is None:
        workers = worker_count()
    profile = scenario.profile
    try:
        ttmap = build_travel_time(profile)
        t = resolve_units(scenario.time_spec, max(ttmap.t_plus, 1e-300),
                          max(profile.x_plus, 1e-300))
        grid = fv_oracle.Grid1D.from_profile(
            profile, t, cells=scenario.oracle_cells, cfl=scenario.oracle_cfl)
        field = fv_oracle.solve(profile, scenario.data, t, grid,
                                limiter=scenario.oracle_limiter,
                                delta_width=scenario.delta_width)
        xs = _sample_points(grid, scenario.samples)
        oracle = np.interp(xs, field.x, field.p)

        series = {}
        terms = []
        if profile.is_continuous and profile.x_plus > 0.0:
            for N in scenario.orders:
                series[N] = _series_profile(scenario, ttmap, t, xs, N, workers)
            n_top = max(scenario.orders, default=0)
            for m in range(0, n_top // 2 + 1):
                terms.append(path_series.term_T(profile, ttmap, scenario.data,
                                                m, t, scenario.quad))
            for m in range(0, (n_top + 1) // 2 + 1):
                if 2 * m + 1 <= n_top + 1:
                    terms.append(path_series.term_R(profile, ttmap, scenario.data,
                                                    m, t, scenario.quad))
        checks, summary = _scenario_checks(scenario, ttmap, t, xs, series,
                                           oracle, terms, field)
    except PathwaveError:
        raise
    except Exception as exc:  # pragma: no cover - wrapped for the CLI
        raise ComputeError(f"scenario {scenario.name!r} failed: {exc}") from exc
    return ScenarioResult(scenario, t, ttmap.t_plus, xs, series, oracle,
                          tuple(terms), tuple(checks), summary)


def _front_mask(scenario, ttmap, t, xs, grid_dx, pad_cells=3):
    """Mask excluding a few cells around each pressure discontinuity."""
    profile = scenario.profile
    fronts = []
    if scenario.data.kind == "step":
        if t >= ttmap.t_plus:
            fronts.append(profile.x_plus + profile.c_right * (t - ttmap.t_plus))
        else:
            fronts.append(float(ttmap.X(t)))
    mask = np.ones(xs.size, dtype=bool)
    for xf in fronts:
        mask &= np.abs(xs - xf) > pad_cells * grid_dx
    return mask


def _scenario_checks(scenario, ttmap, t, xs, series, oracle, terms, field):
    profile = scenario.profile
    checks = []
    summary = {
        "time": t,
        "t_plus": ttmap.t_plus,
        "green_coefficient": float(profile.green_coefficient()),
        "orders": list(scenario.orders),
        "quadrature_nodes": scenario.quad.nodes,
        "oracle_cells": scenario.oracle_cells,
    }

    ct_closed, cr_closed = closed_form_coefficients(profile.green_coefficient())
    ct_sharp, cr_sharp = interface_coefficients(profile.z_left, profile.z_right)
    ident = max(abs(ct_closed - ct_sharp), abs(cr_closed - cr_sharp))
    summary["coefficient_identity_error"] = ident
    checks.append(("coefficient_identity",
                   "pass" if ident < 1e-14 else "fail",
                   f"max |closed-form - interface| = {ident:.3e}"))

    dx = field.grid.dx
    mask = _front_mask(scenario, ttmap, t, xs, dx)
    diffs = {}
    for N, vals in series.items():
        diff = np.abs(vals - oracle)
        scale = float(np.max(np.abs(oracle))) or 1.0
        diffs[N] = {
            "linf_away_from_front": float(np.max(diff[mask])) if mask.any() else 0.0,
            "l2": float(np.sqrt(np.mean(diff[mask] ** 2))) if mask.any() else 0.0,
            "relative_linf": (float(np.max(diff[mask])) / scale) if mask.any() else 0.0,
        }
    summary["oracle_comparison"] = {str(N): d for N, d in diffs.items()}

    try:
        lead = next((abs(tm.value) for tm in terms if tm.n == 0), 1.0)
        top = max(scenario.orders, default=0)
        sb = tail_bound_strong("T", top // 2 + 1, profile.green_coefficient(),
                               lead, monotone=profile.impedance_monotone())
        summary["strong_tail_bound"] = {"value": sb.value, "ratio": sb.ratio,
                                        "contracting": sb.contracting}
        checks.append(("strong_tail_bound", "pass",
                       f"ratio {sb.ratio:.4g}, bound {sb.value:.4g}"))
    except HypothesisViolated as exc:
        summary["strong_tail_bound"] = {"skipped": str(exc)}
        checks.append(("strong_tail_bound", "skipped", str(exc)))

    if scenario.data.kind != "delta" and profile.is_continuous:
        inputs = BoundInputs.from_profile(profile,
                                          data_max=scenario.data.max_abs,
                                          data_slope_max=scenario.data.max_slope)
        top = max(scenario.orders, default=0)
        b1, b2 = tail_bound_uniform(inputs, top // 2, profile.x_plus / 2.0, t,
                                    ttmap,
                                    float(profile.green_coefficient(profile.x_plus / 2.0)))
        summary["uniform_tail_bound"] = {"w1": b1, "w2": b2}

    tol_ok = all(tm.error <= scenario.quad.rel_tol
                 * max(1.0, profile.green_coefficient() ** 2) + 1e-300
                 for tm in terms)
    checks.append(("quadrature_tolerance", "pass" if tol_ok else "fail",
                   f"{len(terms)} terms at tolerance {scenario.quad.rel_tol:g}"))
    return checks, summary
