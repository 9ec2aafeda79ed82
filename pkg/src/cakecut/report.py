"""Figure rendering for the report command.

matplotlib is imported lazily and pinned to the Agg backend, so the rest of
the package stays importable without a display and without matplotlib on
the hot path.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .welfare import (
    HALF_THETA_RATIO,
    ThetaSweepRow,
    WelfareReport,
    randomized_pot_bound,
)


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def render_eta_heatmap(reports: Sequence[WelfareReport], path: str) -> None:
    """Efficiency over the (a, b) grid for one family member."""
    plt = _pyplot()
    a_values = sorted({float(r.profile.a) for r in reports})
    b_values = sorted({float(r.profile.b) for r in reports})
    index_a = {v: i for i, v in enumerate(a_values)}
    index_b = {v: i for i, v in enumerate(b_values)}
    grid = [[1.0] * len(a_values) for _ in b_values]
    for r in reports:
        grid[index_b[float(r.profile.b)]][index_a[float(r.profile.a)]] = r.eta

    fig, ax = plt.subplots(figsize=(6.4, 5.4))
    theta = float(reports[0].theta.value) if reports else 0.5
    image = ax.imshow(
        grid,
        origin="lower",
        extent=(a_values[0], a_values[-1], b_values[0], b_values[-1]),
        aspect="auto",
        vmin=min(min(row) for row in grid),
        vmax=1.0,
        cmap="viridis",
    )
    ax.set_xlabel("a (player I demand)")
    ax.set_ylabel("b (player II demand)")
    ax.set_title(f"efficiency of the theta = {theta:g} mechanism")
    fig.colorbar(image, ax=ax, label="sw / sw_max")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_theta_curve(rows: Sequence[ThetaSweepRow], path: str) -> None:
    """Worst-case efficiency across the family, with the probe certificates."""
    plt = _pyplot()
    thetas = [float(r.theta) for r in rows]

    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    ax.plot(thetas, [r.eta_min for r in rows], "o-", label="eta_min")
    ax.plot(thetas, [r.eta_probe_wide_a for r in rows], "--", label="probe (1, sqrt3-1)")
    ax.plot(thetas, [r.eta_probe_wide_b for r in rows], "--", label="probe (sqrt3-1, 1)")
    ax.axhline(HALF_THETA_RATIO, color="gray", lw=0.8, label="0.9330 bound")
    ax.set_xlabel("theta")
    ax.set_ylabel("worst-case sw / sw_max")
    ax.set_title("only theta = 1/2 attains the bound")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_pot_curve(p: float, tau_star: float, bound: float, path: str) -> None:
    """The lottery's guarantee as a function of the split point."""
    plt = _pyplot()
    taus = [t / 1000.0 for t in range(0, 991)]
    values = [randomized_pot_bound(p, t) for t in taus]

    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    ax.plot(taus, values, lw=1.2)
    ax.plot([tau_star], [bound], "ro", label=f"minimum at tau = {tau_star:.6f}")
    ax.set_xlabel("tau")
    ax.set_ylabel("guarantee")
    ax.set_ylim(0.5, 1.05)
    ax.set_title(f"randomized guarantee, p = {p:g}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
