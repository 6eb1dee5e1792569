"""Companion figures for sweep outputs.

The CSV is the artifact of record; these renderings exist so a report
directory is readable at a glance.  Everything draws through the Agg
backend and goes straight to a file.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_RC = {
    "figure.figsize": (6.0, 4.0),
    "savefig.dpi": 150,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "legend.fontsize": 8,
}


def _groups(rows, keys):
    out: dict[tuple, list[dict]] = {}
    for row in rows:
        out.setdefault(tuple(row[k] for k in keys), []).append(row)
    return out


def _series(members, x_key, y_key):
    pts: dict[float, list[float]] = {}
    for m in members:
        pts.setdefault(m[x_key], []).append(m[y_key])
    xs = sorted(pts)
    means = np.array([np.mean(pts[x]) for x in xs])
    stds = np.array([np.std(pts[x]) for x in xs])
    return np.array(xs), means, stds


def plot_shots_rows(rows, path: str) -> None:
    """Mean Frobenius error (with spread) against shot count per
    state/method series; exact-probability rows (shots 0) are skipped."""
    rows = [r for r in rows if r["shots"]]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for key, members in sorted(_groups(rows, ("state", "method")).items()):
            xs, means, stds = _series(members, "shots", "frobenius")
            name = " ".join(str(k) for k in key if k != "")
            ax.errorbar(xs, means, yerr=stds, marker="o", capsize=2, label=name)
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("shots per basis")
        ax.set_ylabel("Frobenius error")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def plot_settings_rows(rows, path: str) -> None:
    """Mean fidelity against the number of measurement settings, one
    series per (rank, method)."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for key, members in sorted(_groups(rows, ("r", "method")).items()):
            xs, means, stds = _series(members, "settings", "fidelity")
            ax.errorbar(xs, means, yerr=stds, marker="o", capsize=2,
                        label=f"r={key[0]} {key[1]}")
        ax.set_xlabel("measurement settings")
        ax.set_ylabel("fidelity")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def plot_error_sweep(rows, slope, path: str) -> None:
    """Log-log squared error against perturbation strength with the
    fitted power law."""
    eps = np.array([r["eps"] for r in rows])
    err = np.array([r["frobenius_sq"] for r in rows])
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.loglog(eps, err, "o", label="measured")
        if slope is not None and len(eps) >= 2:
            anchor = err[0] * (eps / eps[0]) ** slope
            ax.loglog(eps, anchor, "--", label=f"fit slope {slope:.2f}")
        ax.set_xlabel("perturbation strength")
        ax.set_ylabel("squared Frobenius error")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def plot_experiment_rows(rows, path: str) -> None:
    """Dispatch on what actually varies in the rows: a settings sweep
    plots fidelity vs settings, a shots sweep error vs shots, anything
    else a per-method fidelity summary."""
    settings = {r["settings"] for r in rows}
    shots = {r["shots"] for r in rows if r["shots"]}
    if len(settings) > 1:
        plot_settings_rows(rows, path)
        return
    if len(shots) > 1:
        plot_shots_rows(rows, path)
        return
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for idx, (key, members) in enumerate(sorted(_groups(rows, ("state", "method")).items())):
            fids = [m["fidelity"] for m in members]
            name = " ".join(str(k) for k in key if k != "")
            ax.errorbar([idx], [np.mean(fids)], yerr=[np.std(fids)],
                        marker="s", capsize=3)
            ax.annotate(name, (idx, np.mean(fids)), textcoords="offset points",
                        xytext=(0, 8), ha="center")
        ax.set_xticks([])
        ax.set_ylabel("fidelity")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
