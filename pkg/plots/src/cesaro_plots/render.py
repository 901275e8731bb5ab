"""Render cesaro-lab experiment CSVs into publication figures.

Four figure kinds, each reading only the documented result-table schema
(columns: experiment, family, n, threshold, statistic, value, ci_low,
ci_high, replications, seed):

* ``tail_vs_k``      -- tail-probability estimates along dyadic k with their
  confidence band and the analytic lower-margin overlay;
* ``l1_decay``       -- scaled-L1 estimates vs n (log-log) with a band;
* ``bound_overlay``  -- empirical exceedance probabilities vs the analytic
  bound, one trace per level y;
* ``decomposition``  -- online-estimator traces (estimate, martingale part,
  averaged and per-step remainder) along dyadic prefixes.

Every figure embeds the config hash from the run manifest (the sibling
``<basename>_manifest.json`` unless given explicitly).  Inputs are never
modified; existing outputs are only overwritten with ``--force``.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["PlotSpec", "SchemaError", "read_table", "render", "main", "FIGURE_KINDS"]

REQUIRED_COLUMNS = (
    "experiment",
    "family",
    "n",
    "threshold",
    "statistic",
    "value",
    "ci_low",
    "ci_high",
    "replications",
    "seed",
)

FIGURE_KINDS = ("tail_vs_k", "l1_decay", "bound_overlay", "decomposition")


class SchemaError(ValueError):
    """The input table does not conform to the result-table schema."""


@dataclass(frozen=True)
class PlotSpec:
    inputs: tuple[str, ...]
    kind: str
    output: str
    logx: bool = False
    logy: bool = False
    overwrite: bool = False
    manifest: str | None = None

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; one of {FIGURE_KINDS}")
        if not self.inputs:
            raise SchemaError("at least one input CSV is required")


def _maybe_float(cell: str):
    return None if cell == "" else float(cell)


def read_table(path) -> list[dict]:
    """Read and validate one result CSV; returns typed row dicts."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing columns {missing}")
        if tuple(header) != REQUIRED_COLUMNS:
            raise SchemaError(
                f"{path}: column order must be {','.join(REQUIRED_COLUMNS)}"
            )
        rows = []
        for raw in reader:
            if len(raw) != len(REQUIRED_COLUMNS):
                raise SchemaError(f"{path}: row with {len(raw)} cells")
            rec = dict(zip(REQUIRED_COLUMNS, raw))
            rows.append(
                {
                    "experiment": rec["experiment"],
                    "family": rec["family"],
                    "n": int(rec["n"]),
                    "threshold": _maybe_float(rec["threshold"]),
                    "statistic": rec["statistic"],
                    "value": float(rec["value"]),
                    "ci_low": _maybe_float(rec["ci_low"]),
                    "ci_high": _maybe_float(rec["ci_high"]),
                    "replications": int(rec["replications"]),
                    "seed": int(rec["seed"]),
                }
            )
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def _config_hash(spec: PlotSpec) -> str:
    if spec.manifest is not None:
        manifest_path = Path(spec.manifest)
    else:
        first = Path(spec.inputs[0])
        manifest_path = first.with_name(first.stem + "_manifest.json")
    try:
        manifest = json.loads(manifest_path.read_text())
    except OSError as exc:
        raise SchemaError(
            f"cannot read run manifest {manifest_path} (pass --manifest explicitly): {exc}"
        ) from exc
    try:
        return manifest["config_hash"]
    except (TypeError, KeyError) as exc:
        raise SchemaError(f"{manifest_path}: no config_hash field") from exc


def _select(rows, statistic, path_hint):
    out = [r for r in rows if r["statistic"] == statistic]
    if not out:
        raise SchemaError(f"{path_hint}: no rows with statistic {statistic!r}")
    return sorted(out, key=lambda r: (r["family"], r["n"], r["threshold"] or 0.0))


def _band(ax, xs, rows, color):
    los = [r["ci_low"] for r in rows]
    his = [r["ci_high"] for r in rows]
    if all(v is not None for v in los + his):
        ax.fill_between(xs, los, his, alpha=0.25, color=color, linewidth=0)


def _legend_tag(rows) -> str:
    reps = rows[0]["replications"]
    seed = rows[0]["seed"]
    return f"R={reps}, seed={seed}"


def _figure_tail_vs_k(rows, hint):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    tail = _select(rows, "tail_prob", hint)
    ks = [math.log2(r["n"] + 1) for r in tail]
    line = ax.plot(ks, [r["value"] for r in tail], marker="o",
                   label=f"estimate ({_legend_tag(tail)})")[0]
    _band(ax, ks, tail, line.get_color())
    margin = [r for r in rows if r["statistic"] == "be_margin"]
    if margin:
        margin.sort(key=lambda r: r["n"])
        ax.plot(
            [math.log2(r["n"] + 1) for r in margin],
            [r["value"] for r in margin],
            linestyle="--",
            label="analytic lower margin",
        )
    ax.set_xlabel("k (prefix length 2^k - 1)")
    ax.set_ylabel("pr(scaled running mean >= M)")
    ax.set_title("Tail probability of the scaled running mean")
    ax.legend()
    return fig


def _figure_l1_decay(rows, hint):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for family in sorted({r["family"] for r in rows}):
        fam_rows = [r for r in rows if r["family"] == family]
        sel = _select(fam_rows, "scaled_l1", hint)
        xs = [r["n"] for r in sel]
        line = ax.plot(xs, [r["value"] for r in sel], marker="o",
                       label=f"{family} ({_legend_tag(sel)})")[0]
        _band(ax, xs, sel, line.get_color())
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("n^beta * E|running mean|")
    ax.set_title("Scaled L1 decay")
    ax.legend()
    return fig


def _figure_bound_overlay(rows, hint):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    emp = _select(rows, "empirical_exceedance", hint)
    bound = {(r["n"], r["threshold"]): r["value"]
             for r in rows if r["statistic"] == "analytic_bound"}
    if not bound:
        raise SchemaError(f"{hint}: no rows with statistic 'analytic_bound'")
    levels = sorted({r["threshold"] for r in emp})
    floor = 1.0 / (2 * max(r["replications"] for r in emp))
    for y in levels:
        sel = [r for r in emp if r["threshold"] == y]
        sel.sort(key=lambda r: r["n"])
        xs = [r["n"] for r in sel]
        vals = [max(r["value"], floor) for r in sel]
        line = ax.plot(xs, vals, marker="o", label=f"empirical, y={y:g} ({_legend_tag(sel)})")[0]
        clipped = [
            {**r, "ci_low": max(r["ci_low"], floor) if r["ci_low"] is not None else None,
             "ci_high": max(r["ci_high"], floor) if r["ci_high"] is not None else None}
            for r in sel
        ]
        _band(ax, xs, clipped, line.get_color())
        ax.plot(
            xs,
            [max(bound[(r["n"], y)], floor) for r in sel],
            linestyle="--",
            color=line.get_color(),
            label=f"analytic bound, y={y:g}",
        )
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("exceedance probability (floored at 1/(2R))")
    ax.set_title("Empirical exceedance vs analytic running-mean bound")
    ax.legend(fontsize=8)
    return fig


def _figure_decomposition(rows, hint):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    estimate_stat = "r_hat" if any(r["statistic"] == "r_hat" for r in rows) else "psi_hat"
    for stat, style in (
        (estimate_stat, {"marker": "o"}),
        ("martingale_part", {"linestyle": "--"}),
        ("remainder_avg", {"linestyle": "-."}),
        ("remainder_step", {"linestyle": ":"}),
    ):
        sel = _select(rows, stat, hint)
        xs = [r["n"] for r in sel]
        ax.plot(xs, [r["value"] for r in sel], label=stat, **style)
    ax.set_xscale("log", base=2)
    ax.set_xlabel("prefix length n")
    ax.set_ylabel("value")
    ax.set_title("Online estimator decomposition")
    ax.legend()
    return fig


_BUILDERS = {
    "tail_vs_k": _figure_tail_vs_k,
    "l1_decay": _figure_l1_decay,
    "bound_overlay": _figure_bound_overlay,
    "decomposition": _figure_decomposition,
}


def build_figure(spec: PlotSpec):
    """Validate inputs and build the matplotlib figure (no file output)."""
    rows = []
    for path in spec.inputs:
        rows.extend(read_table(path))
    hint = ", ".join(str(p) for p in spec.inputs)
    fig = _BUILDERS[spec.kind](rows, hint)
    if spec.logx:
        fig.axes[0].set_xscale("log")
    if spec.logy:
        fig.axes[0].set_yscale("log")
    cfg_hash = _config_hash(spec)
    fig.text(0.99, 0.01, f"config {cfg_hash[:12]}", ha="right", va="bottom",
             fontsize=7, color="0.4")
    fig.tight_layout(rect=(0, 0.03, 1, 1))
    return fig


def render(spec: PlotSpec) -> Path:
    """Render the figure described by ``spec`` and write the image file."""
    out = Path(spec.output)
    if out.exists() and not spec.overwrite:
        raise FileExistsError(f"{out} exists; pass --force to overwrite")
    fig = build_figure(spec)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cesaro-plots",
        description="Render cesaro-lab result CSVs into figures.",
    )
    parser.add_argument("--in", dest="inputs", action="append", required=True,
                        help="input CSV (repeatable)")
    parser.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--manifest", default=None,
                        help="run manifest JSON (default: sibling of the first input)")
    parser.add_argument("--logx", action="store_true")
    parser.add_argument("--logy", action="store_true")
    parser.add_argument("--force", action="store_true",
                        help="overwrite the output file if it exists")
    args = parser.parse_args(argv)
    spec = PlotSpec(
        inputs=tuple(args.inputs),
        kind=args.kind,
        output=args.out,
        logx=args.logx,
        logy=args.logy,
        overwrite=args.force,
        manifest=args.manifest,
    )
    try:
        out = render(spec)
    except (SchemaError, FileExistsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
