"""Monte Carlo spectral statistics of the random sampling matrix.

Ensembles draw r i.i.d. uniform positions on [0,1), build the Toeplitz
matrix for the requested M, and record the full spectrum per trial.  On
top of the raw eigenvalues this module provides empirical cdfs, power-law
tail fits of the small-eigenvalue behaviour, the minimum-eigenvalue union
bound check, and the condition-number / minimum-eigenvalue mirror
comparison.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field

import numpy as np

from .linsys import EigenSolveError, _clamp, generators, toeplitz_matrix, ToeplitzSystem

__all__ = [
    "EnsembleSpec",
    "SpectralEnsemble",
    "TailFit",
    "BoundCheckRow",
    "MirrorCheck",
    "FitError",
    "run_ensemble",
    "empirical_cdf",
    "linear_histogram",
    "log_histogram",
    "fit_tail",
    "check_min_eig_bound",
    "kappa_mirror_check",
    "EIG_FLOOR",
]

# Eigenvalues below this are numerically zero in double precision and are
# excluded from tail fits.
EIG_FLOOR = 1e-15


class FitError(RuntimeError):
    """Not enough data in the fit window; enlarge the ensemble."""


@dataclass(frozen=True)
class EnsembleSpec:
    """Ensemble parameters; r = round((2M+1)/beta) with realized beta kept."""

    M: int
    beta: float
    trials: int
    rng_seed: int = 0

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("M must be >= 1")
        if not 0.0 < self.beta <= 2.0:
            raise ValueError("beta must be in (0, 2]")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.r < 1:
            raise ValueError("derived r must be >= 1")

    @property
    def r(self) -> int:
        return int(round((2 * self.M + 1) / self.beta))

    @property
    def realized_beta(self) -> float:
        return (2 * self.M + 1) / self.r


@dataclass(frozen=True)
class SpectralEnsemble:
    """Raw per-trial spectra: pooled eigenvalues, minima, condition numbers."""

    spec: EnsembleSpec
    all_eigenvalues: np.ndarray = field(repr=False)
    min_eigs: np.ndarray = field(repr=False)
    kappas: np.ndarray = field(repr=False)
    failures: int = 0


@dataclass(frozen=True)
class TailFit:
    """Power-law fit F(x) ~ b_hat * x^a_hat over [x_lo, x_hi]."""

    a_hat: float
    b_hat: float
    fit_window: tuple[float, float]
    r_squared: float
    n_points: int


@dataclass(frozen=True)
class BoundCheckRow:
    x: float
    f_min_emp: float
    bound: float
    sigma: float
    satisfied: bool


@dataclass(frozen=True)
class MirrorCheck:
    """Bin-wise comparison of log-densities gamma_kappa(y) vs the mirror."""

    y: np.ndarray
    gamma_kappa: np.ndarray
    gamma_mirror: np.ndarray
    discrepancy: np.ndarray
    max_abs_discrepancy: float
    d: float


def _trial_seed_sequence(rng_seed: int, trial: int) -> np.random.SeedSequence:
    # splitting rule: child i = SeedSequence(master, spawn_key=(i,))
    return np.random.SeedSequence(rng_seed, spawn_key=(trial,))


def _ensemble_trial(args) -> tuple[int, np.ndarray | None]:
    M, r, rng_seed, trial = args
    rng = np.random.default_rng(_trial_seed_sequence(rng_seed, trial))
    t = np.sort(rng.uniform(0.0, 1.0, size=r))
    w = np.full(r, 1.0 / r)
    gen = generators(t, w, M)
    gen[2 * M] = 1.0  # exact weight total, matching build_system
    system = ToeplitzSystem(M=M, r=r, generators=gen,
                            rhs=np.zeros(2 * M + 1, dtype=complex), weighted=False)
    try:
        lam = np.linalg.eigvalsh(toeplitz_matrix(system))
    except np.linalg.LinAlgError:
        return trial, None
    return trial, _clamp(lam)


def run_ensemble(spec: EnsembleSpec, threads: int = 1) -> SpectralEnsemble:
    """Draw the ensemble; deterministic for a given seed regardless of threads.

    Failed eigendecompositions are skipped and counted in ``failures``
    (acceptance-scale runs must report 0).
    """
    jobs = [(spec.M, spec.r, spec.rng_seed, i) for i in range(spec.trials)]
    results: list[np.ndarray | None] = [None] * spec.trials
    if threads > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
            for trial, lam in pool.map(_ensemble_trial, jobs, chunksize=8):
                results[trial] = lam
    else:
        for job in jobs:
            trial, lam = _ensemble_trial(job)
            results[trial] = lam

    spectra = [lam for lam in results if lam is not None]
    failures = spec.trials - len(spectra)
    if not spectra:
        raise EigenSolveError("every trial failed to decompose")
    all_eigs = np.concatenate(spectra)
    min_eigs = np.array([lam[0] for lam in spectra])
    with np.errstate(divide="ignore"):
        kappas = np.array([lam[-1] / lam[0] if lam[0] > 0 else np.inf for lam in spectra])
    return SpectralEnsemble(spec=spec, all_eigenvalues=all_eigs,
                            min_eigs=min_eigs, kappas=kappas, failures=failures)


def empirical_cdf(values, grid):
    """F(x) = fraction of values <= x on the given ascending grid."""
    values = np.asarray(values, dtype=float)
    grid = np.asarray(grid, dtype=float)
    if values.size == 0:
        raise ValueError("values must be nonempty")
    if grid.size == 0 or np.any(np.diff(grid) <= 0) or grid[0] <= 0:
        raise ValueError("grid must be positive and strictly increasing")
    s = np.sort(values)
    F = np.searchsorted(s, grid, side="right") / len(s)
    return grid, F


def linear_histogram(values, bin_width: float = 0.1):
    """Density histogram with fixed-width linear bins from 0; (centers, density)."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("values must be nonempty")
    hi = values.max()
    nbins = max(int(np.ceil((hi + 1e-12) / bin_width)), 1)
    edges = np.arange(nbins + 1) * bin_width
    counts, _ = np.histogram(values, bins=edges)
    density = counts / (len(values) * bin_width)
    centers = (edges[:-1] + edges[1:]) / 2
    return centers, density


def log_histogram(values, bins_per_decade: int = 20, min_count: int = 5):
    """Density of Y = log10(values) on uniform log bins; (y centers, density).

    Bins with fewer than ``min_count`` samples are dropped (their density
    estimate is too noisy for log-scale comparison).
    """
    values = np.asarray(values, dtype=float)
    values = values[values > 0]
    if values.size == 0:
        raise ValueError("values must contain positive entries")
    lv = np.log10(values)
    lo, hi = lv.min(), lv.max()
    nb = max(int(np.ceil((hi - lo) * bins_per_decade)), 1)
    edges = np.linspace(lo, hi + 1e-12, nb + 1)
    counts, _ = np.histogram(lv, bins=edges)
    dy = edges[1] - edges[0]
    density = counts / (len(lv) * dy)
    centers = (edges[:-1] + edges[1:]) / 2
    keep = counts >= min_count
    return centers[keep], density[keep]


def fit_tail(cdf_pairs, anchor_prob: float = 1e-2) -> TailFit:
    """Fit log10 F = a*log10 x + log10 b over the decade below the anchor.

    The anchor is the first grid point where F crosses ``anchor_prob``; the
    window is [x*/10, x*].  Grid points with F = 0 or x below the
    double-precision floor are excluded.
    """
    x, F = cdf_pairs
    x = np.asarray(x, dtype=float)
    F = np.asarray(F, dtype=float)
    above = np.nonzero(F >= anchor_prob)[0]
    if len(above) == 0 or above[0] == 0:
        raise FitError("cdf has no points below the anchor; enlarge trials")
    x_star = x[above[0]]
    window = (x >= x_star / 10.0) & (x <= x_star) & (F > 0) & (x >= EIG_FLOOR)
    n = int(window.sum())
    if n < 3:
        raise FitError(f"only {n} usable points in the fit window; enlarge trials")
    lx = np.log10(x[window])
    lF = np.log10(F[window])
    design = np.vstack([lx, np.ones(n)]).T
    (slope, intercept), res, *_ = np.linalg.lstsq(design, lF, rcond=None)
    ss_tot = np.sum((lF - lF.mean()) ** 2)
    r2 = 1.0 - (float(res[0]) / ss_tot if len(res) and ss_tot > 0 else 0.0)
    if slope <= 0:
        raise FitError(f"fitted slope {slope:.3g} is not positive")
    return TailFit(a_hat=float(slope), b_hat=float(10.0 ** intercept),
                   fit_window=(float(x_star / 10.0), float(x_star)),
                   r_squared=float(r2), n_points=n)


def check_min_eig_bound(ensemble: SpectralEnsemble, x_grid=None) -> list[BoundCheckRow]:
    """Check F_min(x) <= (2M+1) F(x) (1 + 3 sigma) on the grid.

    sigma combines the relative binomial standard errors of both empirical
    cdfs; points where F_min = 0 are trivially satisfied.
    """
    n_eig = 2 * ensemble.spec.M + 1
    if x_grid is None:
        positive = ensemble.all_eigenvalues[ensemble.all_eigenvalues > 0]
        lo = max(positive.min(), EIG_FLOOR)
        x_grid = np.logspace(np.log10(lo), 0.0, 60)
    x_grid = np.asarray(x_grid, dtype=float)
    sorted_all = np.sort(ensemble.all_eigenvalues)
    sorted_min = np.sort(ensemble.min_eigs)
    n_pool = len(sorted_all)
    n_tr = len(sorted_min)
    rows = []
    for x in x_grid:
        F_pool = np.searchsorted(sorted_all, x, side="right") / n_pool
        F_min = np.searchsorted(sorted_min, x, side="right") / n_tr
        bound = n_eig * F_pool
        if F_min == 0.0:
            rows.append(BoundCheckRow(float(x), 0.0, float(bound), 0.0, True))
            continue
        var_rel = (1 - F_min) / (n_tr * F_min)
        if F_pool > 0:
            var_rel += (1 - F_pool) / (n_pool * F_pool)
        sigma = float(np.sqrt(var_rel))
        ok = F_min <= bound * (1.0 + 3.0 * sigma)
        rows.append(BoundCheckRow(float(x), float(F_min), float(bound), sigma, bool(ok)))
    return rows


def kappa_mirror_check(ensemble: SpectralEnsemble, d: float = 1.0 / 3.0,
                       reference: str = "min", bins_per_decade: int = 20,
                       min_count: int = 5) -> MirrorCheck:
    """Compare the log-density of log10 kappa with its mirrored counterpart.

    ``reference="min"`` mirrors the minimum-eigenvalue histogram about
    y = d/2 (i.e. evaluates it at d - y); ``reference="pooled"`` uses the
    pooled eigenvalue histogram scaled by (2M+1), the large-x form of the
    union bound.  The discrepancy is reported on kappa bins falling inside
    the reference's support.
    """
    finite = ensemble.kappas[np.isfinite(ensemble.kappas)]
    if finite.size == 0:
        raise FitError("no finite condition numbers in the ensemble")
    yk, fk = log_histogram(finite, bins_per_decade, min_count)
    if reference == "min":
        ref_vals = ensemble.min_eigs[ensemble.min_eigs > 0]
        offset = 0.0
    elif reference == "pooled":
        ref_vals = ensemble.all_eigenvalues[ensemble.all_eigenvalues > 0]
        offset = np.log10(2 * ensemble.spec.M + 1)
    else:
        raise ValueError("reference must be 'min' or 'pooled'")
    ym, fm = log_histogram(ref_vals, bins_per_decade, min_count)
    if len(yk) < 20 or len(ym) < 20:
        raise FitError("fewer than 20 nonempty log-bins; enlarge trials")
    gk = np.log10(fk)
    gm = np.log10(fm)
    mirrored_y = d - yk
    inside = (mirrored_y >= ym.min()) & (mirrored_y <= ym.max())
    if not inside.any():
        raise FitError("mirror image does not overlap the reference support")
    gamma_mirror = offset + np.interp(mirrored_y[inside], ym, gm)
    disc = gk[inside] - gamma_mirror
    return MirrorCheck(y=yk[inside], gamma_kappa=gk[inside], gamma_mirror=gamma_mirror,
                       discrepancy=disc, max_abs_discrepancy=float(np.abs(disc).max()), d=d)
