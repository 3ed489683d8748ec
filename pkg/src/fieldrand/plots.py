"""Quick-look rendering of sweep results to PNG, next to the CSV.

These are diagnostic views of the same rows the CSV carries, not styled
reproductions: two numeric axes become a heat map, anything else becomes
lines against the innermost axis with one line per outer combination.
"""

from __future__ import annotations

import os

import numpy as np

from .params import FreeSpace, Scenario, scenario_name
from .sweep import SweepResult

__all__ = ["render_plot"]


def _scenario_label(scen: Scenario) -> str:
    if isinstance(scen, FreeSpace):
        return "free_space"
    return f"{scenario_name(scen)} L={scen.length:.4g}"


def _axis_label(name: str, value) -> str:
    if name == "scenario":
        return _scenario_label(value)
    return f"{name}={value:.4g}"


def _value_grid(result: SweepResult) -> tuple[np.ndarray, str]:
    compare = result.spec.compare_rwa
    label = "overestimate ratio" if compare else "min-entropy (bits)"
    raw = [row.ratio if compare else row.min_entropy_bits for row in result.rows]
    flat = np.array([np.nan if v is None else v for v in raw], dtype=float)
    shape = tuple(len(values) for _, values in result.spec.axes)
    return flat.reshape(shape), label


def _log_worthy(values: tuple) -> bool:
    arr = np.asarray(values, dtype=float)
    return bool(arr.min() > 0.0 and arr.max() / arr.min() > 50.0)


def render_plot(result: SweepResult, csv_path: str) -> str:
    """Render the sweep to ``<csv_path stem>.png`` and return that path."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    grid, value_label = _value_grid(result)
    axes = result.spec.axes
    out_path = os.path.splitext(csv_path)[0] + ".png"

    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    numeric = [name for name, _ in axes if name != "scenario"]
    if len(axes) == 2 and len(numeric) == 2:
        (y_name, y_vals), (x_name, x_vals) = axes
        mesh = ax.pcolormesh(x_vals, y_vals, grid, shading="nearest")
        fig.colorbar(mesh, ax=ax, label=value_label)
        if _log_worthy(x_vals):
            ax.set_xscale("log")
        if _log_worthy(y_vals):
            ax.set_yscale("log")
        ax.set_xlabel(x_name)
        ax.set_ylabel(y_name)
    else:
        inner_name, inner_vals = axes[-1]
        lines = grid.reshape(-1, len(inner_vals))
        outer = axes[:-1]
        combos = [()]
        for name, values in outer:
            combos = [prefix + ((name, v),) for prefix in combos for v in values]
        if inner_name == "scenario":
            x = np.arange(len(inner_vals))
            ax.set_xticks(x)
            ax.set_xticklabels([_scenario_label(s) for s in inner_vals], rotation=45)
        else:
            x = np.asarray(inner_vals, dtype=float)
            if _log_worthy(inner_vals):
                ax.set_xscale("log")
            ax.set_xlabel(inner_name)
        for row, combo in zip(lines, combos):
            label = ", ".join(_axis_label(n, v) for n, v in combo) or None
            ax.plot(x, row, label=label)
        if outer and lines.shape[0] <= 16:
            ax.legend(fontsize="small")
        ax.set_ylabel(value_label)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
