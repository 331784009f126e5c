"""Exact moments of the asymptotic eigenvalue distribution.

The p-th moment is a polynomial in beta = (2M+1)/r,

    E[lambda^p] = sum_{k=1..p} ( sum_{tau in T_{p,k}} v(tau) ) beta^{p-k},

where v(tau) is the volume coefficient of tau's counting polynomial.  The
pre-limit (finite M, r) moment keeps the falling factorial r!/(r-k)! and
the full counting polynomial evaluated at 2M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .partitions import (
    MAX_ORDER,
    SetPartition,
    _rgs_iter,
    zeta_polynomial,
)

__all__ = [
    "MomentPolynomial",
    "moment_polynomial",
    "finite_moment",
    "mgf_partial",
]


@dataclass(frozen=True)
class MomentPolynomial:
    """E[lambda^p] = sum_k coeffs[k-1] * beta^(p-k), coefficients exact."""

    p: int
    coeffs: tuple[Fraction, ...]  # c_k for k = 1..p

    def __post_init__(self):
        if len(self.coeffs) != self.p:
            raise ValueError("need one coefficient per block count k = 1..p")

    def coefficient(self, k: int) -> Fraction:
        """Coefficient of beta^(p-k), i.e. the sum of v(tau) over T_{p,k}."""
        if not 1 <= k <= self.p:
            raise ValueError(f"k must be in 1..{self.p}")
        return self.coeffs[k - 1]

    def beta_coefficients(self) -> tuple[Fraction, ...]:
        """Coefficients ascending in powers of beta (beta^0 .. beta^(p-1))."""
        return tuple(reversed(self.coeffs))

    def evaluate(self, beta):
        """Evaluate at beta; Fraction in, Fraction out, else float."""
        exact = isinstance(beta, (Fraction, int))
        b = Fraction(beta) if exact else float(beta)
        acc = b * 0
        for c in self.coeffs:  # c_1 * b^(p-1) + ... + c_p
            acc = acc * b + (c if exact else float(c))
        return acc


def _canonical_word(word: tuple[int, ...]) -> tuple[int, ...]:
    """Least relabelled word over all rotations and the reflection.

    Rotating positions around the cycle or reversing their order leaves the
    counting polynomial unchanged (the constraint multigraph is the same up
    to vertex relabelling / edge reversal), so canonical words key a cache.
    """
    p = len(word)
    best = None
    doubled = word + word
    for rot in range(p):
        for seq in (doubled[rot:rot + p], doubled[rot:rot + p][::-1]):
            lab: dict[int, int] = {}
            out = []
            for v in seq:
                if v not in lab:
                    lab[v] = len(lab)
                out.append(lab[v])
            t = tuple(out)
            if best is None or t < best:
                best = t
    return best


def _zeta_by_class(p: int):
    """Yield (k, counting polynomial) per partition, caching by symmetry class."""
    cache: dict[tuple[int, ...], object] = {}
    for word in _rgs_iter(p):
        k = max(word) + 1
        key = _canonical_word(word)
        poly = cache.get(key)
        if poly is None:
            poly = zeta_polynomial(SetPartition.from_word(word))
            cache[key] = poly
        yield k, poly


def moment_polynomial(p: int) -> MomentPolynomial:
    """Exact asymptotic moment E[lambda^p] as a polynomial in beta."""
    if not 1 <= p <= MAX_ORDER:
        raise ValueError(f"p must be in 1..{MAX_ORDER}, got {p}")
    coeffs = [Fraction(0)] * p
    for k, poly in _zeta_by_class(p):
        d = p - k + 1
        v = poly.coeffs[-1] if poly.degree == d else Fraction(0)
        coeffs[k - 1] += v
    return MomentPolynomial(p=p, coeffs=tuple(coeffs))


def finite_moment(p: int, M: int, r: int) -> float:
    """Pre-limit moment at finite M, r, evaluated in exact rationals.

    (1/((2M+1) r^p)) * sum_tau r!/(r-k(tau))! * zeta_{2M}(tau); the falling
    factorial is 0 when k(tau) > r.
    """
    if not 1 <= p <= MAX_ORDER:
        raise ValueError(f"p must be in 1..{MAX_ORDER}, got {p}")
    if M < 1 or r < 1:
        raise ValueError("M and r must be >= 1")
    total = Fraction(0)
    falling: dict[int, int] = {}
    for k, poly in _zeta_by_class(p):
        ff = falling.get(k)
        if ff is None:
            ff = 1
            for j in range(k):  # hits a zero factor when k > r
                ff *= r - j
            falling[k] = ff
        if ff:
            total += ff * poly(2 * M)
    return float(total / ((2 * M + 1) * Fraction(r) ** p))


def mgf_partial(beta: float, s: float, p_max: int = 5) -> float:
    """Truncated moment generating function sum_{p=0..p_max} E[lambda^p] s^p / p!.

    A truncation of the series, not the full transform: closed-form moments
    exist only up to order 12.
    """
    if not 0 <= p_max <= MAX_ORDER:
        raise ValueError(f"p_max must be in 0..{MAX_ORDER}")
    total = 1.0  # p = 0 term, E[lambda^0] = 1
    for p in range(1, p_max + 1):
        total += float(moment_polynomial(p).evaluate(float(beta))) * s**p / math.factorial(p)
    return total
