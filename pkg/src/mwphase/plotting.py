"""Figure rendering for sweeps, trajectories and fringe profiles.

Figures are drawn on bare ``Figure`` objects (no pyplot state) and written
with fixed metadata so repeated runs give identical files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib as mpl
import numpy as np
from matplotlib.figure import Figure

from .experiment import SweepResult, classical_reference
from .phase import PhaseRecord

__all__ = ["curve_id", "plot_sweep", "plot_trajectory", "plot_fringes"]

STYLE = {
    "font.size": 10,
    "axes.labelsize": 11,
    "legend.fontsize": 8,
    "xtick.direction": "in",
    "ytick.direction": "in",
    "svg.hashsalt": "mwphase",
    "svg.fonttype": "none",
    "path.simplify": False,
}


MAX_LEGEND_CURVES = 10


def curve_id(n_total: int) -> str:
    """SVG group id of the sweep curve for ``n_total`` atoms."""
    return f"curve-N{n_total}"


def _save(fig: Figure, path: str | Path) -> Path:
    path = Path(path)
    fmt = path.suffix.lstrip(".").lower()
    metadata = {"Date": None} if fmt in ("svg", "pdf") else None
    if fmt == "png":
        metadata = {"Software": None}
    fig.savefig(path, format=fmt, metadata=metadata)
    return path


def plot_sweep(result: SweepResult, path: str | Path) -> Path:
    """<S12> against <N2>, one curve per total atom number."""
    timeavg = result.config.averaging == "timeavg"
    n_values = [run.n_total for run in result.runs]
    many = len(n_values) > MAX_LEGEND_CURVES
    with mpl.rc_context(STYLE):
        fig = Figure(figsize=(6.0, 4.2), layout="constrained")
        ax = fig.add_subplot()
        cmap = mpl.colormaps["viridis"]
        norm = mpl.colors.LogNorm(min(n_values), max(n_values) + 1)
        for run in result.runs:
            if timeavg:
                x, y = run.avg_n2, run.avg_sin
            else:
                x, y = run.column("mean_n2"), run.column("mean_sin")
            label = None
            if not many:
                label = f"N = {run.n_total}" + ("" if run.transfer.crossed else " (no crossing)")
            (line,) = ax.plot(x, y, color=cmap(norm(run.n_total)), lw=1.4, label=label)
            line.set_gid(curve_id(run.n_total))
        ax.axhline(classical_reference(), color="k", ls="--", lw=0.8, label="classical")
        ax.set_xlabel(r"$\langle \hat N_2 \rangle$" + (" (time average)" if timeavg else ""))
        ax.set_ylabel(r"$\langle \hat S_{12} \rangle$" + (" (time average)" if timeavg else ""))
        ax.legend(loc="lower right", ncol=2, frameon=False)
        if many:
            fig.colorbar(mpl.cm.ScalarMappable(norm=norm, cmap=cmap), ax=ax, label="N")
        return _save(fig, path)


def plot_trajectory(records: Sequence[PhaseRecord], n_total: int, path: str | Path) -> Path:
    with mpl.rc_context(STYLE):
        fig = Figure(figsize=(6.0, 5.0), layout="constrained")
        top, bottom = fig.subplots(2, 1, sharex=True)
        t = np.array([r.t for r in records])
        top.plot(t, [r.mean_n2 / n_total for r in records], label=r"$\langle N_2\rangle/N$")
        top.plot(t, [r.mean_w / n_total for r in records], label=r"$\langle W\rangle/N$")
        top.legend(frameon=False)
        bottom.plot(t, [r.mean_sin for r in records], label=r"$\langle S_{12}\rangle$")
        bottom.plot(t, [r.mean_cos for r in records], label=r"$\langle C_{12}\rangle$")
        bottom.plot(t, [r.phase_fluct for r in records], label=r"$\Delta E_\phi$")
        bottom.set_xlabel("t  [1/J]")
        bottom.legend(frameon=False)
        top.set_title(f"N = {n_total}")
        return _save(fig, path)


def plot_fringes(x: np.ndarray, intensity: np.ndarray, phase: float, path: str | Path) -> Path:
    with mpl.rc_context(STYLE):
        fig = Figure(figsize=(6.0, 3.0), layout="constrained")
        ax = fig.add_subplot()
        ax.plot(x, intensity, color="C0", lw=1.2)
        ax.set_xlabel("x")
        ax.set_ylabel("density")
        ax.set_title(f"phase = {phase:.6f} rad")
        return _save(fig, path)
