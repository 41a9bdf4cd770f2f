"""Figure rendering for the report paths: CCDF comparisons per measure and
the learned scaling function. Written next to the delimited outputs so a
run's directory is self-contained."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .graph import Gender  # noqa: E402

_COLORS = {Gender.FEMALE: "tab:red", Gender.MALE: "tab:blue"}
_LABELS = {Gender.FEMALE: "female", Gender.MALE: "male"}


def plot_ccdf(curves, measure_name: str, path) -> None:
    """CCDF curves for both genders on log-log axes."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for curve in curves:
        xs = [v for v, _ in curve.points]
        ys = [f for _, f in curve.points]
        ax.step(xs, ys, where="post", color=_COLORS[curve.gender],
                label=_LABELS[curve.gender])
    ax.set_xlabel(measure_name)
    ax.set_ylabel("fraction of users $\\geq$ x")
    if any(v > 0 for curve in curves for v, _ in curve.points):
        ax.set_xscale("symlog", linthresh=1.0)
    ax.set_yscale("log")
    ax.legend(frameon=False)
    ax.set_title(f"CCDF: {measure_name}")
    fig.tight_layout()
    fig.savefig(Path(path), dpi=150)
    plt.close(fig)


def plot_scaling(table, zeta: float | None, chosen_r: float | None, path) -> None:
    """Achieved female ratio vs seeding ratio with the inversion point."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    rs = [r for r, _, _ in table.samples]
    ss = [s for _, s, _ in table.samples]
    ax.plot(rs, ss, "o-", color="tab:purple", label="achieved ratio")
    if zeta is not None:
        ax.axhline(zeta, linestyle="--", color="gray", label=f"target {zeta}")
    if chosen_r is not None:
        ax.axvline(chosen_r, linestyle=":", color="tab:green",
                   label=f"chosen r={chosen_r:.3f}")
    ax.set_xlabel("seeding ratio r")
    ax.set_ylabel("achieved female ratio s")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(Path(path), dpi=150)
    plt.close(fig)
