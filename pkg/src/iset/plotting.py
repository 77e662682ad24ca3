"""Figure rendering for CLI reports.

Sweep CSVs get a companion PNG next to the delimited output; the
Cantor iterate command can draw the classic interval ladder. Matplotlib
is imported lazily with the Agg backend so data-only runs never touch
it.
"""

from __future__ import annotations

import math
from fractions import Fraction


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_sweep(experiment: str, header, rows, path: str) -> None:
    """Render a sweep's rows to a PNG at ``path``."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    xs = [float(r[0]) for r in rows]
    if experiment == "chsh-vs-N":
        ys = [float(r[2]) for r in rows]
        ax.plot(xs, ys, "o-", label="exact A'")
        ax.axhline(2 * math.sqrt(2), ls="--", c="gray", label="2*sqrt(2)")
        ax.axhline(2.0, ls=":", c="black", label="classical bound")
        ax.set_xlabel("admissibility level N")
        ax.set_ylabel("A'")
    elif experiment == "dim-vs-p":
        ys = [float(r[1]) for r in rows]
        ax.semilogx(xs, ys, "-")
        ax.axhline(1.0, ls="--", c="gray")
        ax.set_xlabel("p")
        ax.set_ylabel("Hausdorff dimension of C(p)")
    elif experiment == "snap-error-vs-N":
        ys = [float(r[1]) for r in rows]
        bound = [float(r[2]) for r in rows]
        ax.semilogy(xs, ys, "o-", label="max angular snap error")
        ax.semilogy(xs, bound, "--", c="gray", label="bound")
        ax.set_xlabel("admissibility level N")
        ax.set_ylabel("radians")
    else:
        ys = [float(r[1]) for r in rows]
        ax.plot(xs, ys, "o-")
        ax.set_xlabel(header[0])
        ax.set_ylabel(header[1])
    if ax.get_legend_handles_labels()[0]:
        ax.legend(frameon=False)
    ax.set_title(experiment)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_cantor(p: int, depth: int, path: str, budget: int | None = None) -> None:
    """Draw the interval ladder of C_k(p) for k = 0..depth."""
    from .cantor import construct_iterate

    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 0.6 + 0.45 * (depth + 1)))
    for level in range(depth + 1):
        for lo, hi in construct_iterate(p, level, budget=budget):
            ax.hlines(-level, float(lo), float(hi), colors="black", lw=6)
    ax.set_yticks([-k for k in range(depth + 1)])
    ax.set_yticklabels([str(k) for k in range(depth + 1)])
    ax.set_ylabel("level")
    ax.set_xlim(-0.02, 1.02)
    ax.set_title(f"C_k({p}) iterates")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
