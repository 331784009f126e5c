"""Bandlimited signals on [0,1) and irregular sampling topologies.

A signal is a finite Fourier series with harmonics -M..M; a topology is a
strictly increasing set of sample locations t_q in [0,1).  The circular gap
statistics (maximum gap delta, neighbour-midpoint weights w_q) treat [0,1)
as a circle, with t_0 = t_r - 1 and t_{r+1} = 1 + t_1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BandlimitedSignal",
    "SampleSet",
    "GapProfile",
    "evaluate_signal",
    "sample_signal",
    "random_signal",
    "random_topology",
    "gap_profile",
]

_REAL_SYM_TOL = 1e-12


@dataclass(frozen=True)
class BandlimitedSignal:
    """Fourier coefficients a_k, k = -M..M, stored as coeffs[k + M].

    With ``real_valued=True`` the constructor enforces a_{-k} = conj(a_k),
    so the signal is real on [0,1).
    """

    M: int
    coeffs: np.ndarray
    real_valued: bool = False

    def __post_init__(self):
        if self.M < 0:
            raise ValueError(f"M must be nonnegative, got {self.M}")
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.ndim != 1 or len(coeffs) != 2 * self.M + 1:
            raise ValueError(
                f"coeffs must have length 2M+1 = {2 * self.M + 1}, got {coeffs.shape}"
            )
        if self.real_valued:
            scale = max(np.abs(coeffs).max(), 1.0)
            if np.abs(coeffs[::-1].conj() - coeffs).max() > _REAL_SYM_TOL * scale:
                raise ValueError("real_valued signal requires a_{-k} = conj(a_k)")
        object.__setattr__(self, "coeffs", coeffs)
        self.coeffs.setflags(write=False)

    def coeff(self, k: int) -> complex:
        """Fourier coefficient a_k for k in -M..M."""
        if not -self.M <= k <= self.M:
            raise ValueError(f"harmonic index {k} outside -M..M")
        return complex(self.coeffs[k + self.M])


@dataclass(frozen=True)
class SampleSet:
    """Sample locations t_q in [0,1) (strictly increasing) and values p(t_q)."""

    positions: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        val = np.asarray(self.values, dtype=complex)
        if pos.ndim != 1 or len(pos) < 1:
            raise ValueError("positions must be a nonempty 1-D array")
        if len(pos) != len(val):
            raise ValueError("positions and values must have equal length")
        if pos.min() < 0.0 or pos.max() >= 1.0:
            raise ValueError("positions must lie in [0, 1)")
        order = np.argsort(pos, kind="stable")
        pos = pos[order]
        val = val[order]
        if len(pos) > 1 and np.any(np.diff(pos) <= 0.0):
            raise ValueError("duplicate sample positions are not allowed")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "values", val)
        self.positions.setflags(write=False)
        self.values.setflags(write=False)

    @property
    def r(self) -> int:
        return len(self.positions)


@dataclass(frozen=True)
class GapProfile:
    """Circular maximum gap delta and midpoint weights w_q (sum to 1)."""

    delta: float
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        self.weights.setflags(write=False)


def evaluate_signal(sig: BandlimitedSignal, t):
    """Evaluate p(t) = sum_k a_k exp(2*pi*i*k*t) at scalar or array t in [0,1)."""
    t_arr = np.asarray(t, dtype=float)
    if t_arr.size and (t_arr.min() < 0.0 or t_arr.max() >= 1.0):
        raise ValueError("t must lie in [0, 1)")
    k = np.arange(-sig.M, sig.M + 1)
    phases = np.exp(2j * np.pi * np.multiply.outer(t_arr, k))
    out = phases @ sig.coeffs
    return complex(out) if np.isscalar(t) or t_arr.ndim == 0 else out


def sample_signal(sig: BandlimitedSignal, positions) -> SampleSet:
    """Measure the signal at the given positions (canonically sorted)."""
    pos = np.asarray(positions, dtype=float)
    if pos.ndim != 1 or len(pos) == 0:
        raise ValueError("positions must be a nonempty 1-D array")
    return SampleSet(pos, evaluate_signal(sig, pos))


def random_signal(M: int, rng_seed, real_valued: bool = True) -> BandlimitedSignal:
    """Random signal with unit-variance complex-normal coefficients.

    With ``real_valued=True`` only a_0 (real normal) and a_1..a_M are drawn;
    a_{-k} is set to conj(a_k).
    """
    rng = _as_rng(rng_seed)
    coeffs = np.empty(2 * M + 1, dtype=complex)
    if real_valued:
        coeffs[M] = rng.normal()
        for k in range(1, M + 1):
            z = (rng.normal() + 1j * rng.normal()) / np.sqrt(2)
            coeffs[M + k] = z
            coeffs[M - k] = np.conj(z)
    else:
        coeffs[:] = (rng.normal(size=2 * M + 1) + 1j * rng.normal(size=2 * M + 1)) / np.sqrt(2)
    return BandlimitedSignal(M, coeffs, real_valued=real_valued)


def random_topology(r: int, support=(0.0, 1.0), rng_seed=0) -> np.ndarray:
    """r i.i.d. uniform draws on [lo, hi) subseteq [0,1), sorted ascending.

    ``rng_seed`` is an integer (or anything np.random.default_rng accepts:
    a Generator or SeedSequence); the generator is PCG64, so output is
    bit-reproducible across platforms for a given seed.
    """
    lo, hi = float(support[0]), float(support[1])
    if not (0.0 <= lo < hi <= 1.0):
        raise ValueError(f"support must satisfy 0 <= lo < hi <= 1, got [{lo}, {hi})")
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    rng = _as_rng(rng_seed)
    return np.sort(rng.uniform(lo, hi, size=r))


def gap_profile(positions) -> GapProfile:
    """Circular gap statistics of a sorted topology (needs >= 2 points).

    delta = max_q (t_q - t_{q-1}) with t_0 = t_r - 1;
    w_q = (t_{q+1} - t_{q-1}) / 2 with t_{r+1} = 1 + t_1.
    """
    t = np.asarray(positions, dtype=float)
    if t.ndim != 1 or len(t) < 2:
        raise ValueError("gap_profile needs at least 2 positions")
    if np.any(np.diff(t) <= 0) or t[0] < 0 or t[-1] >= 1:
        raise ValueError("positions must be strictly increasing within [0, 1)")
    gaps = np.empty(len(t))
    gaps[0] = t[0] - (t[-1] - 1.0)
    gaps[1:] = np.diff(t)
    nxt = np.concatenate([t[1:], [1.0 + t[0]]])
    prv = np.concatenate([[t[-1] - 1.0], t[:-1]])
    return GapProfile(delta=float(gaps.max()), weights=(nxt - prv) / 2.0)


def _as_rng(rng_seed) -> np.random.Generator:
    if isinstance(rng_seed, np.random.Generator):
        return rng_seed
    return np.random.default_rng(rng_seed)
