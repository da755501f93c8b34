"""Render experiment figures from harness CSV files.

The harness stores raw untransformed columns; every plotting transform
(log of the inverse failure rate, samples over squared truncation) is
applied here at render time.  Output images are deterministic: fixed
size, fixed metadata, no timestamps.

Figure kinds:

    1  estimation error vs sample count, one panel per truncation k,
       with the concentration-bound reference curve
    2  log(1/failure rate) vs n/k^2 per k, bootstrap CIs, least-squares
       slope per k in the legend
    4  success proportion vs sample count, one line per problem labelled
       by its inverse separation
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

REQUIRED_COLUMNS = {
    1: ["k", "n", "trials", "mean_err", "err_2std", "theory_n"],
    2: ["k", "n", "trials", "delta_hat", "delta_lo", "delta_hi"],
    4: ["beta_inv", "n", "trials", "prop", "ci_lo", "ci_hi"],
}

_PNG_METADATA = {"Software": "irlfigures"}
_FIGSIZE = (8.0, 4.5)
_DPI = 120


class SchemaError(Exception):
    """The CSV does not match the harness schema for this figure kind."""


@dataclass(frozen=True)
class FigureJob:
    csv_path: str
    kind: int
    out_path: str

    def __post_init__(self) -> None:
        if self.kind not in REQUIRED_COLUMNS:
            raise ValueError(f"unknown figure kind {self.kind}; use 1, 2, or 4")


def load_rows(path, kind: int) -> list[dict]:
    """Read and validate the CSV; numeric fields are parsed as floats."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in REQUIRED_COLUMNS[kind]:
            if column not in header:
                raise SchemaError(
                    f"missing required column {column!r} for figure kind {kind}")
        rows = []
        for raw in reader:
            row = {}
            for key, value in raw.items():
                try:
                    row[key] = float(value)
                except (TypeError, ValueError):
                    row[key] = value
            rows.append(row)
    if not rows:
        raise SchemaError("no data rows in CSV")
    return rows


def _clamped_log_inv(delta: float, trials: float) -> float:
    floor = 1.0 / (trials + 1.0)
    return float(np.log(1.0 / max(delta, floor)))


def _render_estimation(rows):
    ks = sorted({row["k"] for row in rows})
    fig, axes = plt.subplots(1, len(ks), figsize=_FIGSIZE, sharey=True)
    axes = np.atleast_1d(axes)
    for ax, k in zip(axes, ks):
        sub = sorted((r for r in rows if r["k"] == k), key=lambda r: r["n"])
        n = np.array([r["n"] for r in sub])
        err = np.array([r["mean_err"] for r in sub])
        bars = np.array([r["err_2std"] for r in sub])
        theory = np.array([r["theory_n"] for r in sub])
        ax.errorbar(n, err, yerr=bars, marker="o", color="tab:red",
                    label="measured error")
        ax.plot(theory, err, marker="s", color="tab:blue",
                label="samples needed by the bound")
        ax.set_xscale("log")
        ax.set_title(f"k = {int(k)}")
        ax.set_xlabel("samples n")
    axes[0].set_ylabel("max-row-sum error")
    axes[0].legend(fontsize=8)
    fig.tight_layout()
    return fig


def _render_success_rate(rows):
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    for k in sorted({row["k"] for row in rows}):
        sub = sorted((r for r in rows if r["k"] == k), key=lambda r: r["n"])
        x = np.array([r["n"] / (r["k"] ** 2) for r in sub])
        y = np.array([_clamped_log_inv(r["delta_hat"], r["trials"])
                      for r in sub])
        lo = np.array([_clamped_log_inv(r["delta_hi"], r["trials"])
                       for r in sub])
        hi = np.array([_clamped_log_inv(r["delta_lo"], r["trials"])
                       for r in sub])
        slope = float(np.polyfit(x, y, 1)[0]) if x.size > 1 else float("nan")
        ax.errorbar(x, y, yerr=[y - lo, hi - y], marker="o",
                    label=f"k={int(k)} (slope {slope:.2e})")
        if x.size > 1:
            coeffs = np.polyfit(x, y, 1)
            ax.plot(x, np.polyval(coeffs, x), linestyle="--", alpha=0.6)
    ax.set_xlabel("n / k^2")
    ax.set_ylabel("log(1 / failure rate)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def _render_separation_sweep(rows):
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    for beta_inv in sorted({row["beta_inv"] for row in rows}):
        sub = sorted((r for r in rows if r["beta_inv"] == beta_inv),
                     key=lambda r: r["n"])
        n = np.array([r["n"] for r in sub])
        prop = np.array([r["prop"] for r in sub])
        lo = np.array([r["ci_lo"] for r in sub])
        hi = np.array([r["ci_hi"] for r in sub])
        ax.errorbar(n, prop, yerr=[prop - lo, hi - prop], marker="o",
                    label=f"1/separation = {beta_inv:.1f}")
    ax.set_xscale("log")
    ax.set_ylim(-0.05, 1.05)
    ax.set_xlabel("samples n")
    ax.set_ylabel("success proportion")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


_RENDERERS = {1: _render_estimation, 2: _render_success_rate,
              4: _render_separation_sweep}


def render(job: FigureJob) -> Path:
    """Render the figure; the output file is written only on success."""
    rows = load_rows(job.csv_path, job.kind)
    fig = _RENDERERS[job.kind](rows)
    out = Path(job.out_path)
    try:
        fig.savefig(out, dpi=_DPI, metadata=_PNG_METADATA)
    finally:
        plt.close(fig)
    return out
