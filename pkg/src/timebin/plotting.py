"""Render sweep results to figure files next to their CSV output.

Uses the Agg backend unconditionally; nothing here opens a window.  Each
sweep kind gets a fixed layout so repeated runs produce comparable figures.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .model import ParameterError
from .sweeps import SweepResult


def _title(md: dict) -> str:
    return (f"T1vac={md['t1_vac_ps']:g} ps, T2*={md['t2_star_ps']:g} ps, "
            f"F={md['purcell_factor']:g}")


def render_sweep_figure(result: SweepResult, path) -> Path:
    """Write a PNG for the given sweep result; returns the path written."""
    path = Path(path)
    md = result.metadata
    kind = md.get("kind")
    data = np.asarray(result.records, dtype=float)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    try:
        if kind == "purcell":
            ax.semilogx(data[:, 0], data[:, 1], lw=1.8, color="#1f77b4",
                        label="max visibility")
            ax.axhline(md["threshold"], ls="--", lw=1.2, color="crimson",
                       label=f"threshold {md['threshold']:.4f}")
            ax.set_xlabel("Purcell factor")
            ax.set_ylabel("visibility")
            ax.legend(loc="lower right")
        elif kind == "delay":
            ax.plot(data[:, 0], data[:, 1], lw=1.8, color="#1f77b4",
                    label="visibility")
            ax.axhline(md["threshold"], ls="--", lw=1.2, color="crimson",
                       label=f"threshold {md['threshold']:.4f}")
            ax.set_xlabel("arm-imbalance difference d_tau1 - d_tau2 (ps)")
            ax.set_ylabel("visibility")
            ax.legend(loc="upper right")
        elif kind == "jitter":
            ax.plot(data[:, 0], data[:, 1], lw=1.8, color="#1f77b4")
            ax.set_xlabel("emission-delay jitter (ps)")
            ax.set_ylabel("visibility (first order)")
        elif kind == "map2d":
            nx, ny = md["axis_steps"], md["axis2_steps"]
            xs = data[:, 0].reshape(nx, ny)[:, 0]
            ys = data[:, 1].reshape(nx, ny)[0, :]
            vv = data[:, 2].reshape(nx, ny)
            mesh = ax.pcolormesh(xs, ys, vv.T, shading="auto", cmap="viridis")
            fig.colorbar(mesh, ax=ax, label="visibility")
            ax.set_xlabel("T - d_tau1 (ps)")
            ax.set_ylabel("T - d_tau2 (ps)")
            ax.set_aspect("equal")
        else:
            raise ParameterError(f"cannot render sweep kind {kind!r}")
        ax.set_title(_title(md), fontsize=10)
        fig.tight_layout()
        fig.savefig(path, dpi=150)
    finally:
        plt.close(fig)
    return path
