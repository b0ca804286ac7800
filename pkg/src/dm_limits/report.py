"""Machine-readable command reports: deterministic JSON, CSV tables, figures.

Every CLI invocation produces a Report.  JSON output is byte-reproducible:
keys sorted, floats printed with 12 significant digits.  Table-producing
commands write CSV, and when the table goes to a file a matplotlib figure is
rendered next to it (same basename, .png).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["Report", "rows_to_csv", "write_table", "render_curve_figure", "render_table_figure"]


def _render_floats(obj):
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _render_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_render_floats(v) for v in obj]
    return obj


@dataclass
class Report:
    """Inputs, outputs, and warnings of one command invocation."""

    command: str
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def add(self, name: str, op: str, value, **extra) -> None:
        """Record an output quantity tagged with the operation that produced it."""
        entry = {"op": op, "value": value}
        entry.update(extra)
        self.outputs[name] = entry

    def to_json(self) -> str:
        payload = {
            "command": self.command,
            "inputs": _render_floats(self.inputs),
            "outputs": _render_floats(self.outputs),
            "warnings": list(self.warnings),
        }
        return json.dumps(payload, sort_keys=True, indent=2)


def rows_to_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: f"{v:.12g}" if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


def write_table(rows: list[dict], columns: list[str], out: str | Path) -> Path:
    path = Path(out)
    path.write_text(rows_to_csv(rows, columns))
    return path


def _figure_path(out: str | Path) -> Path:
    return Path(out).with_suffix(".png")


def render_curve_figure(rows: list[dict], out: str | Path) -> Path:
    """Plot the divergence-to-1 curves next to the CSV they came from."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ns = [r["n"] for r in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(ns, [r["rho_n_star"] for r in rows], "o-", label="floor (renewal conditions)")
    ax.plot(ns, [r["rosenthal_side_lower"] for r in rows], "s-", label="floor (coupling conditions)")
    if "baxendale_optimum" in rows[0]:
        ax.plot(ns, [r["baxendale_optimum"] for r in rows], "^-", label="optimized upper bound")
    ax.axhline(0.5, color="gray", ls="--", lw=1, label="true rate")
    ax.set_xscale("log")
    ax.set_xlabel("dimension n")
    ax.set_ylabel("rate bound")
    ax.set_ylim(0.0, 1.02)
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    path = _figure_path(out)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_table_figure(rows: list[dict], out: str | Path) -> Path:
    """Plot the polynomially scaled gaps of the asymptotic table on log-log axes."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ns = [r["n"] for r in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(ns, [max(r["scaled_gap_a"], 1e-300) for r in rows], "o-", label="scaled gap, renewal floor")
    ax.loglog(ns, [max(r["scaled_gap_b"], 1e-300) for r in rows], "s-", label="scaled gap, coupling floor")
    ax.set_xlabel("dimension n")
    ax.set_ylabel("n^gamma' (1 - floor)")
    ax.legend(loc="lower left", fontsize=8)
    fig.tight_layout()
    path = _figure_path(out)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
