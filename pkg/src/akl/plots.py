"""Matplotlib rendering of report series to PNG files (Agg backend only)."""
from __future__ import annotations

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def render_series_figure(path, name, x, y, slope=None, intercept=None) -> None:
    """Log-log scatter of a series with its fitted power law, saved to PNG."""
    fig, ax = plt.subplots(figsize=(4.8, 3.4))
    ax.loglog(x, y, "o", ms=3.5, label="measured")
    if slope is not None and intercept is not None:
        xf = np.geomspace(x.min(), x.max(), 64)
        ax.loglog(xf, np.exp(intercept) * xf**slope, "-", lw=1.2, label=f"fit slope {slope:.3f}")
        ax.legend(fontsize=8, frameon=False)
    ax.set_title(name, fontsize=9)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.grid(True, which="both", alpha=0.25, lw=0.4)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
