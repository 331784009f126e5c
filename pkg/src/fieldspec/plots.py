"""Matplotlib rendering of the report figures, written next to the CSVs."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "plot_reconstruction",
    "plot_histogram",
    "plot_cdf_loglog",
    "plot_min_bound",
    "plot_mirror",
    "plot_sweep",
]


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_reconstruction(t_grid, true_vals, recon_vals, sample_t, sample_vals, path, title=""):
    fig, ax = plt.subplots(figsize=(8, 4.5))
    if true_vals is not None and not np.all(np.isnan(true_vals)):
        ax.plot(t_grid, true_vals, "-", color="0.4", lw=1.2, label="signal")
    ax.plot(t_grid, recon_vals, "--", color="C3", lw=1.2, label="reconstruction")
    ax.plot(sample_t, sample_vals, "o", ms=4, color="C0", label="samples")
    ax.set_xlabel("t")
    ax.set_ylabel("p(t)")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=9)
    _save(fig, path)


def plot_histogram(centers, density, path, xlabel="eigenvalue", title="", loglog=False):
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    if loglog:
        pos = density > 0
        ax.loglog(centers[pos], density[pos], drawstyle="steps-mid")
    else:
        ax.plot(centers, density, drawstyle="steps-mid")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("density")
    if title:
        ax.set_title(title)
    _save(fig, path)


def plot_cdf_loglog(series, path, title="", fit=None):
    """series: iterable of (x, F, label); fit: optional TailFit overlay."""
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for x, F, label in series:
        pos = F > 0
        ax.loglog(x[pos], F[pos], "--", lw=1.1, label=label)
    if fit is not None:
        xw = np.logspace(np.log10(fit.fit_window[0]), np.log10(fit.fit_window[1]), 50)
        ax.loglog(xw, fit.b_hat * xw ** fit.a_hat, "-", color="k", lw=1.4,
                  label=f"fit: a={fit.a_hat:.3f}")
    ax.set_xlabel("x")
    ax.set_ylabel("F(x)")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=9)
    _save(fig, path)


def plot_min_bound(rows, path, title=""):
    """rows: BoundCheckRow list."""
    x = np.array([r.x for r in rows])
    fmin = np.array([r.f_min_emp for r in rows])
    bound = np.array([r.bound for r in rows])
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    m = fmin > 0
    ax.loglog(x[m], fmin[m], "o-", ms=3, lw=1.0, label="F_min empirical")
    m = bound > 0
    ax.loglog(x[m], bound[m], "--", lw=1.2, label="(2M+1) F pooled")
    ax.set_xlabel("x")
    ax.set_ylabel("probability")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=9)
    _save(fig, path)


def plot_mirror(check, path, title=""):
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    ax.plot(check.y, check.gamma_kappa, "o-", ms=3, lw=1.0, label="log10 f(log10 kappa)")
    ax.plot(check.y, check.gamma_mirror, "x--", lw=1.0,
            label=f"mirror (d = {check.d:.3f})")
    ax.set_xlabel("y = log10 x")
    ax.set_ylabel("log10 density")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=9)
    _save(fig, path)


def plot_table1(rows, path, title=""):
    """rows: (beta, p, sim, exact, limit) tuples."""
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    by_beta: dict[float, list] = {}
    for beta, p, sim, exact, limit in rows:
        by_beta.setdefault(beta, []).append((p, sim, exact, limit))
    for beta, group in sorted(by_beta.items()):
        group.sort()
        ps = [g[0] for g in group]
        ax.semilogy(ps, [g[1] for g in group], "o", ms=5, label=f"sim, beta={beta}")
        ax.semilogy(ps, [g[3] for g in group], "-", lw=1.2, label=f"limit, beta={beta}")
    ax.set_xlabel("moment order p")
    ax.set_ylabel("E[lambda^p]")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    _save(fig, path)


def plot_precond(rows, path, title=""):
    """rows: (M, r, delta, kappa_w, bound, ok) tuples."""
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    by_M: dict[int, list] = {}
    for M, r, delta, kappa_w, bound, ok in rows:
        by_M.setdefault(int(M), []).append((bound, kappa_w))
    for M, group in sorted(by_M.items()):
        ax.loglog([g[0] for g in group], [g[1] for g in group], "o", ms=3,
                  alpha=0.6, label=f"M={M}")
    lims = ax.get_xlim()
    xs = np.logspace(np.log10(lims[0]), np.log10(lims[1]), 20)
    ax.loglog(xs, xs, "k--", lw=1.0, label="kappa = bound")
    ax.set_xlabel("bound ((1+2dM)/(1-2dM))^2")
    ax.set_ylabel("computed kappa(T_w)")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=9)
    _save(fig, path)


def plot_sweep(cells, path, title=""):
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    by_M: dict[int, list] = {}
    for c in cells:
        by_M.setdefault(c.M, []).append(c)
    for M, group in sorted(by_M.items()):
        group = sorted(group, key=lambda c: c.r)
        ax.plot([c.r for c in group], [c.success_frac for c in group],
                "o-", ms=4, label=f"M={M}")
    ax.set_xlabel("r")
    ax.set_ylabel("success fraction")
    ax.set_ylim(-0.02, 1.02)
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=9)
    _save(fig, path)
