"""Hermitian Toeplitz normal equations for irregular-sampling reconstruction.

The (2M+1)x(2M+1) matrix T has entries (T)_{k,m} = r_{k-m} built from the
4M+1 exponential-sum generators

    r_l = sum_q w_q exp(2*pi*i*l*t_q),   l = -2M..2M,

with w_q = 1/r in the plain case or the circular midpoint weights in the
preconditioned case (both normalisations sum to 1, so trace T = 2M+1).
The stored right-hand side is b_k = sum_q w_q p(t_q) exp(-2*pi*i*k*t_q),
which makes the coefficient system read conj(T) a = b; `solve` accounts
for the conjugation so that a recovers the Fourier coefficients directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .field import SampleSet, gap_profile

__all__ = [
    "ToeplitzSystem",
    "EigenSpectrum",
    "SolveDiagnostics",
    "EigenSolveError",
    "build_system",
    "generators",
    "toeplitz_matrix",
    "eig_hermitian",
    "solve",
    "precond_bound",
    "DEFAULT_KAPPA_MAX",
]

DEFAULT_KAPPA_MAX = 1e12
_CLAMP_REL = 1e-10


class EigenSolveError(RuntimeError):
    """Hermitian eigendecomposition failed to converge."""


@dataclass(frozen=True)
class ToeplitzSystem:
    """Generators r_l (l = -2M..2M, stored at index l + 2M) and rhs b."""

    M: int
    r: int
    generators: np.ndarray
    rhs: np.ndarray
    weighted: bool

    def __post_init__(self):
        gen = np.asarray(self.generators, dtype=complex)
        rhs = np.asarray(self.rhs, dtype=complex)
        if len(gen) != 4 * self.M + 1:
            raise ValueError(f"generators must have length 4M+1 = {4 * self.M + 1}")
        if len(rhs) != 2 * self.M + 1:
            raise ValueError(f"rhs must have length 2M+1 = {2 * self.M + 1}")
        object.__setattr__(self, "generators", gen)
        object.__setattr__(self, "rhs", rhs)
        self.generators.setflags(write=False)
        self.rhs.setflags(write=False)

    def generator(self, ell: int) -> complex:
        if not -2 * self.M <= ell <= 2 * self.M:
            raise ValueError(f"generator index {ell} outside -2M..2M")
        return complex(self.generators[ell + 2 * self.M])


@dataclass(frozen=True)
class EigenSpectrum:
    """Real spectrum of T, ascending; kappa = lambda_max/lambda_min (inf if singular)."""

    eigenvalues: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        object.__setattr__(self, "eigenvalues", lam)
        self.eigenvalues.setflags(write=False)

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def kappa(self) -> float:
        if self.lambda_min > 0.0:
            return self.lambda_max / self.lambda_min
        return np.inf


@dataclass(frozen=True)
class SolveDiagnostics:
    kappa: float
    min_eig: float
    ill_conditioned: bool


def generators(positions, weights, M: int) -> np.ndarray:
    """Exponential sums r_l = sum_q w_q exp(2*pi*i*l*t_q), l = -2M..2M."""
    positions = np.asarray(positions, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if positions.shape != weights.shape:
        raise ValueError("positions and weights must have equal shape")
    return _generators(positions, weights, M)


def _generators(positions: np.ndarray, weights: np.ndarray, M: int) -> np.ndarray:
    ell = np.arange(-2 * M, 2 * M + 1)
    phases = np.exp(2j * np.pi * np.multiply.outer(ell, positions))
    return phases @ weights.astype(complex)


def build_system(samples: SampleSet, M: int, weighted: bool = False) -> ToeplitzSystem:
    """Assemble generators and right-hand side from a sample set.

    Unweighted uses w_q = 1/r; weighted uses the circular midpoint weights
    (needs r >= 2).  Both keep r_0 = sum w_q = 1.
    """
    if M < 0:
        raise ValueError("M must be nonnegative")
    t = samples.positions
    if weighted:
        w = gap_profile(t).weights
    else:
        w = np.full(samples.r, 1.0 / samples.r)
    gen = _generators(t, w, M)
    # r_0 is the plain weight total (every phase is e^0 = 1): exactly 1 in
    # the unweighted case, and the compensated sum is more accurate than
    # the complex dot product in the weighted case
    gen[2 * M] = 1.0 if not weighted else math.fsum(w)
    k = np.arange(-M, M + 1)
    b = np.exp(-2j * np.pi * np.multiply.outer(k, t)) @ (w * samples.values)
    return ToeplitzSystem(M=M, r=samples.r, generators=gen, rhs=b, weighted=weighted)


def toeplitz_matrix(system: ToeplitzSystem) -> np.ndarray:
    """Materialise the dense (2M+1)x(2M+1) matrix with (T)_{k,m} = r_{k-m}."""
    g = system.generators
    M = system.M
    col = g[2 * M:]            # r_0 .. r_{2M}
    row = g[2 * M::-1]         # r_0, r_{-1}, .., r_{-2M}
    return scipy.linalg.toeplitz(col, row)


def eig_hermitian(system: ToeplitzSystem) -> EigenSpectrum:
    """Full ascending spectrum of T; tiny negative roundoff is clamped to 0.

    Clamp policy: eigenvalues in [-1e-10*lambda_max, 0) become 0 (T is PSD
    by construction); anything more negative is left untouched so that a
    genuine bug remains visible.
    """
    T = toeplitz_matrix(system)
    try:
        lam = np.linalg.eigvalsh(T)
    except np.linalg.LinAlgError as exc:
        raise EigenSolveError(f"eigendecomposition did not converge: {exc}") from exc
    return EigenSpectrum(_clamp(lam))


def _clamp(lam: np.ndarray) -> np.ndarray:
    lam = np.array(lam, dtype=float)
    lam_max = lam[-1] if len(lam) else 0.0
    mask = (lam < 0.0) & (lam >= -_CLAMP_REL * max(lam_max, 0.0))
    lam[mask] = 0.0
    return lam


def solve(system: ToeplitzSystem, kappa_max: float = DEFAULT_KAPPA_MAX):
    """Solve for the coefficient vector via the spectral decomposition of T.

    Returns ``(coeffs, SolveDiagnostics)``.  When kappa exceeds
    ``kappa_max`` the system is flagged ill-conditioned and the returned
    coefficients are the best-effort spectral pseudo-inverse solution with
    eigenvalue cutoff lambda_max/kappa_max; this is a reportable outcome,
    not an exception.
    """
    T = toeplitz_matrix(system)
    try:
        lam, U = np.linalg.eigh(T)
    except np.linalg.LinAlgError as exc:
        raise EigenSolveError(f"eigendecomposition did not converge: {exc}") from exc
    lam = _clamp(lam)
    lam_max = lam[-1]
    lam_min = lam[0]
    kappa = lam_max / lam_min if lam_min > 0 else np.inf
    ill = not kappa <= kappa_max
    cutoff = lam_max / kappa_max if lam_max > 0 else 0.0
    keep = lam > cutoff
    inv = np.zeros_like(lam)
    inv[keep] = 1.0 / lam[keep]
    # conj(T) a = b  =>  a = conj(T^+ conj(b))
    x = U @ (inv * (U.conj().T @ np.conj(system.rhs)))
    coeffs = np.conj(x)
    return coeffs, SolveDiagnostics(kappa=float(kappa), min_eig=float(lam_min), ill_conditioned=bool(ill))


def precond_bound(delta: float, M: int) -> float:
    """Condition-number bound ((1+2*delta*M)/(1-2*delta*M))^2 for the weighted system.

    Valid only when delta < 1/(2M); returns +inf otherwise (the guarantee
    does not hold there).
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if M < 1:
        raise ValueError("M must be >= 1")
    x = 2.0 * delta * M
    if x >= 1.0:
        return np.inf
    return ((1.0 + x) / (1.0 - x)) ** 2
