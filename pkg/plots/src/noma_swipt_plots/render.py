"""Render the standard simulator figures from CSV files.

Consumes only the documented CSV schemas (sweep and trace); nothing is
recomputed, the files are plotted as-is. Outage curves default to a
logarithmic y axis.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

SWEEP_COLUMNS = (
    "scenario",
    "power_dbm",
    "scheme",
    "user",
    "avg_se_bps_hz",
    "outage_prob",
    "dps_infeasible_frac",
    "n_trials",
    "seed",
)
TRACE_COLUMNS = ("scenario", "realization", "scheme", "user", "se_bps_hz", "reference_rate")

FIGURE_KINDS = ("relay-outage", "se-sweep", "outage-sweep", "trace")

_SWEEP_NUMERIC = ("power_dbm", "avg_se_bps_hz", "outage_prob", "dps_infeasible_frac")
_TRACE_NUMERIC = ("realization", "se_bps_hz", "reference_rate")


class SchemaError(ValueError):
    """CSV does not match the expected schema; message names the problem column."""


@dataclass(frozen=True)
class FigureSpec:
    csv_path: Path
    kind: str
    out_path: Path
    xlabel: str = ""
    ylabel: str = ""
    log_y: bool | None = None  # None: kind default (log for outage kinds)
    title: str = ""

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"kind: expected one of {FIGURE_KINDS}, got {self.kind!r}")

    @property
    def uses_log_y(self) -> bool:
        if self.log_y is not None:
            return self.log_y
        return self.kind in ("relay-outage", "outage-sweep")


def _read_rows(path: Path, columns: tuple[str, ...], numeric: tuple[str, ...]) -> list[dict]:
    try:
        with open(path, newline="") as handle:
            reader = csv.reader(handle)
            try:
                header = next(reader)
            except StopIteration:
                raise SchemaError(f"{path}: empty file, expected header {','.join(columns)}")
            for col in columns:
                if col not in header:
                    raise SchemaError(f"{path}: missing column {col!r}")
            for col in header:
                if col not in columns:
                    raise SchemaError(f"{path}: unexpected column {col!r}")
            index = {col: header.index(col) for col in columns}
            rows = []
            for lineno, record in enumerate(reader, start=2):
                if len(record) != len(header):
                    raise SchemaError(f"{path}:{lineno}: expected {len(header)} fields")
                row = {col: record[index[col]] for col in columns}
                for col in numeric:
                    try:
                        row[col] = float(row[col])
                    except ValueError:
                        raise SchemaError(
                            f"{path}:{lineno}: column {col!r} is not numeric: {row[col]!r}"
                        ) from None
                rows.append(row)
    except OSError as exc:
        raise SchemaError(f"{path}: cannot read file ({exc})") from exc
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def _series(rows, key_fields, x_field, y_field):
    grouped: dict[tuple, list] = {}
    for row in rows:
        grouped.setdefault(tuple(row[f] for f in key_fields), []).append(
            (row[x_field], row[y_field])
        )
    for key in grouped:
        grouped[key].sort()
    return grouped


def _plot_grouped(ax, grouped, label_fn):
    for key in sorted(grouped):
        points = grouped[key]
        ax.plot([p[0] for p in points], [p[1] for p in points], marker="o", label=label_fn(key))


def render(spec: FigureSpec):
    """Render one figure and save it to ``spec.out_path``; returns the figure."""
    fig, ax = plt.subplots(figsize=(7.0, 5.0))

    if spec.kind == "relay-outage":
        rows = [r for r in _read_rows(spec.csv_path, SWEEP_COLUMNS, _SWEEP_NUMERIC) if r["user"] == "far"]
        if not rows:
            raise SchemaError(f"{spec.csv_path}: no far-user rows to plot")
        grouped = _series(rows, ("scenario", "scheme"), "power_dbm", "outage_prob")
        _plot_grouped(ax, grouped, lambda key: f"{key[1]} {key[0]}")
        ax.set_xlabel(spec.xlabel or "transmit power (dBm)")
        ax.set_ylabel(spec.ylabel or "far-user outage probability")
    elif spec.kind == "se-sweep":
        rows = _read_rows(spec.csv_path, SWEEP_COLUMNS, _SWEEP_NUMERIC)
        grouped = _series(rows, ("scheme", "user"), "power_dbm", "avg_se_bps_hz")
        _plot_grouped(ax, grouped, lambda key: f"{key[0]} {key[1]} user")
        ax.set_xlabel(spec.xlabel or "transmit power (dBm)")
        ax.set_ylabel(spec.ylabel or "average spectral efficiency (bps/Hz)")
    elif spec.kind == "outage-sweep":
        rows = _read_rows(spec.csv_path, SWEEP_COLUMNS, _SWEEP_NUMERIC)
        grouped = _series(rows, ("scheme", "user"), "power_dbm", "outage_prob")
        _plot_grouped(ax, grouped, lambda key: f"{key[0]} {key[1]} user")
        ax.set_xlabel(spec.xlabel or "transmit power (dBm)")
        ax.set_ylabel(spec.ylabel or "outage probability")
    else:  # trace
        rows = _read_rows(spec.csv_path, TRACE_COLUMNS, _TRACE_NUMERIC)
        grouped = _series(rows, ("scheme", "user"), "realization", "se_bps_hz")
        _plot_grouped(ax, grouped, lambda key: f"{key[0]} {key[1]} user")
        reference = rows[0]["reference_rate"]
        ax.axhline(reference, color="red", linestyle="--", label=f"reference rate {reference:g}")
        ax.set_xlabel(spec.xlabel or "channel realization")
        ax.set_ylabel(spec.ylabel or "spectral efficiency (bps/Hz)")

    if spec.uses_log_y:
        ax.set_yscale("log")
    if spec.title:
        ax.set_title(spec.title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    spec.out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.out_path, dpi=150)
    return fig


def standard_specs(in_dir: Path, out_dir: Path) -> list[FigureSpec]:
    """The five canonical figures produced from one simulator run."""
    return [
        FigureSpec(in_dir / "fig2.csv", "relay-outage", out_dir / "fig2.png",
                   title="Far-user outage with and without relaying"),
        FigureSpec(in_dir / "fig3.csv", "se-sweep", out_dir / "fig3.png",
                   title="Average spectral efficiency vs transmit power"),
        FigureSpec(in_dir / "fig4.csv", "outage-sweep", out_dir / "fig4.png",
                   title="Outage probability vs transmit power"),
        FigureSpec(in_dir / "trace-near.csv", "trace", out_dir / "trace-near.png",
                   title="Near-user spectral efficiency per realization"),
        FigureSpec(in_dir / "trace-far.csv", "trace", out_dir / "trace-far.png",
                   title="Far-user spectral efficiency per realization"),
    ]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="noma-swipt-plots", description="Render figures from noma-swipt CSV outputs"
    )
    parser.add_argument("--in", dest="in_dir", type=Path, required=True,
                        help="directory containing the simulator CSVs")
    parser.add_argument("--out", dest="out_dir", type=Path, required=True,
                        help="directory for the rendered images")
    args = parser.parse_args(argv)

    try:
        for spec in standard_specs(args.in_dir, args.out_dir):
            fig = render(spec)
            plt.close(fig)
            print(f"wrote {spec.out_path}")
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
