"""Report figures rendered straight to image files (non-interactive backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams.update({
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 120,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
    "svg.hashsalt": "dyonphase",
})

# fixed metadata keeps repeated renders byte-identical
_METADATA = {
    "png": {"Software": None},
    "svg": {"Date": None, "Creator": None},
    "pdf": {"CreationDate": None, "ModDate": None, "Producer": None, "Creator": None},
}


def _save(fig, out):
    fmt = str(out).rsplit(".", 1)[-1].lower()
    fig.savefig(out, metadata=_METADATA.get(fmt), bbox_inches="tight")
    plt.close(fig)
    return out


def plot_path(points: np.ndarray, radius: float, out, title: str = "", closed: bool = True):
    fig, ax = plt.subplots()
    pts = np.vstack([points, points[:1]]) if closed else np.asarray(points)
    ax.plot(pts[:, 0], pts[:, 1], "-", lw=1.2, color="C0", label="path")
    ax.add_patch(plt.Circle((0, 0), radius, color="C3", alpha=0.35, label="solenoid"))
    ax.plot([0], [0], "x", color="C3")
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.legend(loc="upper right")
    ax.set_title(title)
    return _save(fig, out)


def plot_profile(rho, numeric, analytic, radius: float, out, label: str = "A_phi"):
    fig, (ax, ax_err) = plt.subplots(2, 1, sharex=True, figsize=(6.0, 5.0))
    ax.plot(rho, analytic, "-", color="k", lw=1.0, label="analytic")
    ax.plot(rho, numeric, "--", color="C1", lw=1.0, label="finite difference")
    ax.axvline(radius, color="C3", lw=0.8, alpha=0.6)
    ax.set_ylabel(label)
    ax.legend()
    err = np.abs(np.asarray(numeric) - np.asarray(analytic))
    ax_err.semilogy(rho, np.maximum(err, 1e-18), color="C0", lw=0.8)
    ax_err.axvline(radius, color="C3", lw=0.8, alpha=0.6)
    ax_err.set_xlabel("rho")
    ax_err.set_ylabel("|error|")
    return _save(fig, out)


def plot_spectral_flow(alphas, analytic, numeric, out):
    fig, ax = plt.subplots()
    analytic = np.asarray(analytic)
    for j in range(analytic.shape[1]):
        ax.plot(alphas, analytic[:, j], "o-", color="k", lw=0.9, ms=5, mfc="none",
                label="analytic" if j == 0 else None)
    if numeric is not None:
        numeric = np.asarray(numeric)
        for j in range(numeric.shape[1]):
            ax.plot(alphas, numeric[:, j], ".", color="C1", ms=3, label="finite difference" if j == 0 else None)
    ax.set_xlabel("alpha_f")
    ax.set_ylabel("E")
    ax.legend()
    return _save(fig, out)


def plot_fringes(x, p0, p1, delta: float, out):
    fig, ax = plt.subplots()
    ax.plot(x, p0, "-", color="k", lw=0.9, label="delta = 0")
    ax.plot(x, p1, "-", color="C0", lw=0.9, label=f"delta = {delta:.4g}")
    ax.set_xlabel("screen coordinate")
    ax.set_ylabel("intensity")
    ax.legend()
    return _save(fig, out)


def plot_reductions(rows: list[dict], out):
    fig, ax = plt.subplots()
    names = [r["reduction"] for r in rows]
    ax.bar(names, [r["phase_after"] for r in rows], color="C0", alpha=0.7, label="reduced")
    if rows:
        ax.axhline(rows[0]["phase_before"], color="k", lw=1.0, label="invariant")
    ax.set_ylabel("phase")
    ax.legend()
    return _save(fig, out)


def plot_trajectory(positions: np.ndarray, radius: float, out):
    return plot_path(np.asarray(positions), radius, out, title="trajectory", closed=False)
