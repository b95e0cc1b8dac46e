"""Command-line scenario runner.

``pathwave run <config>`` executes a scenario (preset name or YAML file)
and writes profile.csv, terms.csv, summary.json, and rendered figures to
the output directory.  ``pathwave verify <config>`` runs the built-in
identity and tolerance checks and exits nonzero on any failure.
``pathwave list-presets`` enumerates the bundled experiments.

The worker count for series sampling is read from the environment
variable ``PATHWAVE_WORKERS`` (default 1); results are identical for any
worker count.
"""

from __future__ import annotations

import json
import math
import os
import sys

import click
import numpy as np

from . import __version__, asymptotics, path_series, report, scenarios
from .asymptotics import closed_form_coefficients, zigzag
from .characteristics import build_travel_time
from .errors import (ComputeError, ConfigError, HypothesisViolated,
                     PathwaveError, ToleranceNotMet)
from .medium import interface_coefficients


@click.group()
@click.version_option(version=__version__)
def main():
    """Reflection-series solver for 1D variable-coefficient acoustics."""


_common = [
    click.option("--order", type=int, default=None,
                 help="Override the series order N (even)."),
    click.option("--nodes", type=int, default=None,
                 help="Gauss nodes per level; disables refinement."),
    click.option("--tol", type=float, default=None,
                 help="Quadrature relative tolerance."),
    click.option("--out-dir", type=click.Path(), default=None,
                 help="Output directory (default results/<name>)."),
    click.option("--oracle-cells", type=int, default=None,
                 help="Finite-volume oracle cell count."),
]


def _with_common(cmd):
    for opt in reversed(_common):
        cmd = opt(cmd)
    return cmd


def _build(config, order, nodes, tol, oracle_cells):
    cfg, name = scenarios.load_config(config)
    scenario = scenarios.build_scenario(cfg, name, order=order, nodes=nodes,
                                        tol=tol, oracle_cells=oracle_cells)
    return cfg, scenario


@main.command()
@click.argument("config")
@_with_common
def run(config, order, nodes, tol, out_dir, oracle_cells):
    """Execute a scenario and write result files."""
    try:
        cfg, scenario = _build(config, order, nodes, tol, oracle_cells)
        out_dir = out_dir or os.path.join("results", scenario.name)
        if scenario.variants:
            os.makedirs(out_dir, exist_ok=True)
            combined = {"variants": []}
            for sub in scenarios.scenario_variants(scenario, cfg, scenario.name):
                result = scenarios.run_scenario(sub)
                sub_dir = os.path.join(
                    out_dir, f"x_plus_{sub.profile.x_plus:g}".replace(".", "p"))
                report.write_result(sub_dir, result)
                combined["variants"].append({
                    "name": sub.name,
                    "x_plus": sub.profile.x_plus,
                    "t_plus": result.t_plus,
                    "peak_p": float(np.max(result.oracle)),
                    "out_dir": os.path.basename(sub_dir),
                })
            with open(os.path.join(out_dir, "summary.json"), "w") as fh:
                json.dump(combined, fh, indent=2, sort_keys=True)
                fh.write("\n")
        else:
            result = scenarios.run_scenario(scenario)
            report.write_result(out_dir, result)
        click.echo(f"wrote {out_dir}")
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    except PathwaveError as exc:
        click.echo(f"compute error: {exc}", err=True)
        sys.exit(1)


@main.command()
@click.argument("config")
@_with_common
def verify(config, order, nodes, tol, out_dir, oracle_cells):
    """Run identity/tolerance checks for a scenario; nonzero exit on failure."""
    try:
        cfg, scenario = _build(config, order, nodes, tol, oracle_cells)
        checks = _verify_checks(scenario, with_oracle=oracle_cells is not None)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    except PathwaveError as exc:
        click.echo(f"compute error: {exc}", err=True)
        sys.exit(1)

    failed = False
    for name, status, detail in checks:
        click.echo(f"[{status.upper():7s}] {name}: {detail}")
        failed = failed or status == "fail"
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        report.write_summary(os.path.join(out_dir, "summary.json"),
                             {"scenario": scenario.name}, checks)
    sys.exit(1 if failed else 0)


def _verify_checks(scenario, with_oracle=False):
    checks = []
    profile = scenario.profile

    table = zigzag(8)
    brute_ok = all(table.A_int(n) == asymptotics.alternating_count_bruteforce(n)
                   for n in range(0, 8))
    checks.append(("zigzag_table", "pass" if brute_ok else "fail",
                   "recursion vs brute-force enumeration, n <= 7"))

    ct_c, cr_c = closed_form_coefficients(profile.green_coefficient())
    ct_i, cr_i = interface_coefficients(profile.z_left, profile.z_right)
    ident = max(abs(ct_c - ct_i), abs(cr_c - cr_i))
    checks.append(("coefficient_identity", "pass" if ident < 1e-14 else "fail",
                   f"max deviation {ident:.3e}"))

    vol_err = max(abs(path_series.nested_simplex_quadrature(n)
                      - asymptotics.simplex_volume(n, 0.0, 1.0))
                  for n in range(1, 5))
    checks.append(("simplex_volume", "pass" if vol_err < 1e-10 else "fail",
                   f"max deviation {vol_err:.3e} for n <= 4"))

    if profile.is_continuous and profile.x_plus > 0.0:
        ttmap = build_travel_time(profile)
        t_eval = scenarios.resolve_units(scenario.time_spec, ttmap.t_plus,
                                         profile.x_plus)
        data = path_series.InitialData.step()
        err_r1 = 0.0
        for t in np.linspace(0.1 * ttmap.t_plus, 3.0 * ttmap.t_plus, 7):
            got = path_series.term_R(profile, ttmap, data, 0, float(t),
                                     scenario.quad).value
            want = 0.5 * math.log(profile.impedance(float(ttmap.X(t / 2.0)))
                                  / profile.z_left)
            err_r1 = max(err_r1, abs(got - want))
        checks.append(("once_reflected_closed_form",
                       "pass" if err_r1 < 1e-9 else "fail",
                       f"max deviation {err_r1:.3e}"))

        top = max(scenario.orders, default=2)
        try:
            for m in range(0, top // 2 + 1):
                path_series.term_T(profile, ttmap, scenario.data, m, t_eval,
                                   scenario.quad)
            for m in range(0, (top + 1) // 2 + 1):
                if 2 * m + 1 <= top + 1:
                    path_series.term_R(profile, ttmap, scenario.data, m, t_eval,
                                       scenario.quad)
            checks.append(("quadrature_tolerance", "pass",
                           f"orders through {top} at {scenario.quad.nodes} nodes"))
        except ToleranceNotMet as exc:
            checks.append(("quadrature_tolerance", "fail", str(exc)))

        try:
            sb = asymptotics.tail_bound_strong(
                "T", top // 2 + 1, profile.green_coefficient(), 1.0,
                monotone=profile.impedance_monotone())
            checks.append(("strong_tail_bound", "pass",
                           f"ratio {sb.ratio:.4g} "
                           f"({'contracting' if sb.contracting else 'non-contracting'})"))
        except HypothesisViolated as exc:
            checks.append(("strong_tail_bound", "skipped", str(exc)))

        if with_oracle:
            result = scenarios.run_scenario(scenario)
            rel = max((d["relative_linf"] for d in
                       result.summary["oracle_comparison"].values()),
                      default=0.0)
            checks.append(("oracle_comparison",
                           "pass" if rel < 0.05 else "fail",
                           f"relative L-inf away from front {rel:.3e}"))
    return checks


@main.command(name="list-presets")
def list_presets():
    """List the bundled scenario presets."""
    width = max(len(k) for k in scenarios.PRESETS)
    for name in sorted(scenarios.PRESETS):
        desc = scenarios.PRESETS[name].get("description", "")
        click.echo(f"{name:<{width}}  {desc}")


if __name__ == "__main__":  # pragma: no cover
    main()
