"""Result serialization: delimited output, summary JSON, and figures.

All numeric CSV cells use 17-significant-digit decimal formatting so that
reruns with identical configuration are byte-identical and round-trip to
the same doubles.  No wall-clock content appears in any data file.
"""

from __future__ import annotations

import json
import os

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

__all__ = ["fmt", "write_profile_csv", "write_terms_csv", "write_summary",
           "write_figures", "write_result"]


def fmt(x):
    """Shortest decimal that round-trips a double (up to 17 significant digits)."""
    return "%.17g" % float(x)


def write_profile_csv(path, x, series, oracle):
    """Columns x, p_series_N (per requested N), p_oracle, abs_diff."""
    orders = sorted(series)
    header = ["x"] + [f"p_series_{N}" for N in orders] + ["p_oracle", "abs_diff"]
    top = orders[-1] if orders else None
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(len(x)):
            row = [fmt(x[i])]
            row += [fmt(series[N][i]) for N in orders]
            row.append(fmt(oracle[i]))
            diff = abs(series[top][i] - oracle[i]) if top is not None else 0.0
            row.append(fmt(diff))
            fh.write(",".join(row) + "\n")


def write_terms_csv(path, terms):
    """Columns kind, n, t, value, quadrature_error."""
    with open(path, "w", newline="") as fh:
        fh.write("kind,n,t,value,quadrature_error\n")
        for tm in terms:
            fh.write(f"{tm.kind},{tm.n},{fmt(tm.t)},{fmt(tm.value)},{fmt(tm.error)}\n")


def write_summary(path, summary, checks):
    payload = dict(summary)
    payload["checks"] = [{"name": n, "status": s, "detail": d}
                         for n, s, d in checks]
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_figures(out_dir, result):
    """Render the profile comparison and term-magnitude figures."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(result.x, result.oracle, "k-", lw=1.2, label="finite-volume oracle")
    for N in sorted(result.series):
        ax.plot(result.x, result.series[N], "--", lw=1.0, label=f"series N={N}")
    ax.axvspan(0.0, result.scenario.profile.x_plus, color="0.9", zorder=0)
    ax.set_xlabel("x")
    ax.set_ylabel("p(x, t)")
    ax.set_title(f"{result.scenario.name}: t = {result.t:.4g}")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(os.path.join(out_dir, "profile.png"), dpi=150)
    plt.close(fig)

    if result.terms:
        fig, ax = plt.subplots(figsize=(6, 4))
        ns = [tm.n for tm in result.terms]
        vals = [abs(tm.value) for tm in result.terms]
        colors = ["C0" if tm.kind in ("T", "w2") else "C3" for tm in result.terms]
        ax.bar(ns, vals, color=colors)
        ax.set_yscale("log")
        ax.set_xlabel("term order n")
        ax.set_ylabel("|term value|")
        ax.set_title(f"{result.scenario.name}: term magnitudes")
        fig.tight_layout()
        fig.savefig(os.path.join(out_dir, "terms.png"), dpi=150)
        plt.close(fig)


def write_result(out_dir, result):
    """Write profile.csv, terms.csv, summary.json, and figures."""
    os.makedirs(out_dir, exist_ok=True)
    write_profile_csv(os.path.join(out_dir, "profile.csv"),
                      result.x, result.series, result.oracle)
    write_terms_csv(os.path.join(out_dir, "terms.csv"), result.terms)
    write_summary(os.path.join(out_dir, "summary.json"),
                  result.summary, result.checks)
    if result.scenario.figures:
        write_figures(out_dir, result)
