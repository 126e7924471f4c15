"""Figure rendering for the CLI report path.

Each trajectory command can drop a PNG next to its CSV: density
components over time in the top panel, the command's monitor series in
the bottom one.  Rendering uses the Agg backend so it works headless.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

plt.rcParams.update(
    {
        "figure.dpi": 120,
        "savefig.dpi": 150,
        "font.size": 9,
        "axes.linewidth": 0.6,
        "lines.linewidth": 1.2,
        "axes.grid": True,
        "grid.alpha": 0.3,
    }
)


def render_flow_figure(
    times: np.ndarray,
    density_matrix: np.ndarray,
    path: Path,
    monitor_name: Optional[str] = None,
    monitor: Optional[np.ndarray] = None,
    labels: Optional[Sequence[str]] = None,
    title: str = "",
) -> Path:
    """Render a two-panel trajectory figure and return the written path."""
    n_rows = 2 if monitor is not None else 1
    fig, axes = plt.subplots(n_rows, 1, figsize=(6.4, 2.6 * n_rows), sharex=True)
    axes = np.atleast_1d(axes)

    ax = axes[0]
    n = density_matrix.shape[1]
    names = labels if labels is not None else [f"q[{i}]" for i in range(n)]
    for i in range(n):
        ax.plot(times, density_matrix[:, i], label=names[i])
    ax.set_ylabel("density")
    if title:
        ax.set_title(title)
    if n <= 10:
        ax.legend(loc="best", fontsize=7, ncol=2)

    if monitor is not None:
        ax2 = axes[1]
        ax2.plot(times, monitor, color="#d62728")
        ax2.set_ylabel(monitor_name or "monitor")
    axes[-1].set_xlabel("t")

    fig.tight_layout()
    fig.savefig(path, metadata={"Software": "statbundle"})
    plt.close(fig)
    return path
