"""Figures for the bench and dynamic reports (written to files, never shown)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def scaling_figure(path, sizes, seconds, label: str = "strict-local") -> None:
    """Log-log wall time against n, with an n^2 reference line through the first point."""
    fig, ax = plt.subplots(figsize=(5, 3.6))
    ax.loglog(sizes, seconds, "o-", label=label)
    if sizes and seconds[0] > 0:
        ref = [seconds[0] * (n / sizes[0]) ** 2 for n in sizes]
        ax.loglog(sizes, ref, "--", color="grey", label="n^2 reference")
    ax.set_xlabel("n")
    ax.set_ylabel("median wall time (s)")
    ax.legend(frameon=False)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def dynamic_figure(path, max_colours, ceilings, deltas=None) -> None:
    """Largest colour in use after each update next to ceil((1+eps) Delta)."""
    fig, ax = plt.subplots(figsize=(6, 3.6))
    xs = range(1, len(max_colours) + 1)
    ax.plot(xs, ceilings, color="grey", lw=1, label="ceil((1+eps) Delta)")
    ax.plot(xs, max_colours, lw=1, label="max colour")
    if deltas is not None:
        ax.plot(xs, deltas, lw=0.8, ls=":", label="Delta")
    ax.set_xlabel("update")
    ax.set_ylabel("colour")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
