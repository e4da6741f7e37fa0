"""Render regret-curve CSV files into a single comparison figure.

Input files must carry the simulator's exact header. The bound column may
contain the token ``undefined``; a dashed bound overlay is drawn only where
the values are finite.
"""

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

REQUIRED_HEADER = ["n", "mean_regret", "stderr", "g_of_n", "normalized_regret", "bound"]
MODES = ("raw", "normalized")


@dataclass
class FigureSpec:
    inputs: list
    output: Path
    mode: str = "normalized"
    labels: list = field(default_factory=list)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")
        if self.labels and len(self.labels) != len(self.inputs):
            raise ValueError("need exactly one label per input CSV")
        if not self.labels:
            self.labels = [Path(p).stem for p in self.inputs]


def load_curve(path) -> dict:
    """Parse one regret-curve CSV, enforcing the exact expected header."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty CSV") from None
        if header != REQUIRED_HEADER:
            missing = [c for c in REQUIRED_HEADER if c not in header]
            extra = [c for c in header if c not in REQUIRED_HEADER]
            what = []
            if missing:
                what.append(f"missing column {missing[0]!r}")
            if extra:
                what.append(f"unexpected column {extra[0]!r}")
            if not what:
                what.append("columns out of order")
            raise ValueError(f"{path}: bad header: {', '.join(what)}")
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: no data rows")

    def col(i, allow_undefined=False):
        out = np.empty(len(rows))
        for r, row in enumerate(rows):
            v = row[i]
            if allow_undefined and v == "undefined":
                out[r] = np.nan
            else:
                out[r] = float(v)
        return out

    return {
        "n": col(0),
        "mean_regret": col(1),
        "stderr": col(2),
        "g_of_n": col(3),
        "normalized_regret": col(4),
        "bound": col(5, allow_undefined=True),
    }


def render_figures(spec: FigureSpec) -> dict:
    """Draw one line per input plus dashed bound overlays; write a PNG.

    Returns a summary with the plotted arrays, so callers can verify the
    rendered data independently of the image bytes.
    """
    curves = [load_curve(p) for p in spec.inputs]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    summary = {"series": [], "bound_overlays": 0, "output": str(spec.output)}
    for label, curve in zip(spec.labels, curves):
        n = curve["n"]
        if spec.mode == "normalized":
            y = curve["normalized_regret"]
            bound = curve["bound"] / (curve["g_of_n"] * np.log(n))
        else:
            y = curve["mean_regret"]
            bound = curve["bound"]
        ax.plot(n, y, label=label)
        summary["series"].append({"label": label, "n": n, "y": y})
        finite = np.isfinite(bound)
        if finite.any():
            ax.plot(n[finite], bound[finite], linestyle="--", alpha=0.7,
                    label=f"{label} bound")
            summary["bound_overlays"] += 1
            summary["series"][-1]["bound"] = bound
    ax.set_xscale("log")
    ax.set_xlabel("slots n")
    ax.set_ylabel("regret / (G(n) ln n)" if spec.mode == "normalized" else "regret")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return summary
