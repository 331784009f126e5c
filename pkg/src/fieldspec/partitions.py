"""Set partitions of {1..p}, their cyclic constraint systems, and exact
lattice-point counts.

A partition tau = {P_1, .., P_k} of {1..p} induces k homogeneous constraints

    sum_{i in P_j} (l_i - l_{[i+1]}) = 0,    [p] = p, [p+1] = 1,

of which exactly k-1 are independent.  zeta_N(tau) counts the integer
points of {0..N}^p satisfying them; it is a polynomial in N of degree
p-k+1 whose leading coefficient is the volume of the corresponding
polytope in [0,1]^p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

__all__ = [
    "SetPartition",
    "ConstraintSystem",
    "RationalPolynomial",
    "InterpolationGuardError",
    "RankInvariantError",
    "MAX_ORDER",
    "cyclic_successor",
    "partition_from_index_vector",
    "enumerate_partitions",
    "build_constraints",
    "count_lattice_points",
    "zeta_polynomial",
    "volume_coefficient",
]

# Enumeration beyond p = 12 is out of scope: the combinatorial explosion
# (B(12) = 4,213,597 partitions) is the practical frontier.
MAX_ORDER = 12


class InterpolationGuardError(RuntimeError):
    """The guard node disagreed with direct counting: zeta is not the
    interpolated polynomial on the sampled range."""


class RankInvariantError(RuntimeError):
    """A constraint system violated rank = k - 1 (implementation bug)."""


def cyclic_successor(i: int, p: int) -> int:
    """[i+1] with the convention [p] = p, [p+1] = 1 (indices are 1-based)."""
    return 1 if i == p else i + 1


@dataclass(frozen=True)
class SetPartition:
    """Partition of {1..p} into disjoint nonempty blocks.

    Blocks are canonically ordered by smallest element (order of first
    appearance), each block sorted ascending.
    """

    p: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be >= 1")
        seen: set[int] = set()
        for blk in self.blocks:
            if not blk:
                raise ValueError("blocks must be nonempty")
            if seen & set(blk):
                raise ValueError("blocks must be disjoint")
            seen |= set(blk)
        if seen != set(range(1, self.p + 1)):
            raise ValueError("blocks must cover {1..p}")
        canon = tuple(tuple(sorted(b)) for b in self.blocks)
        canon = tuple(sorted(canon, key=lambda b: b[0]))
        object.__setattr__(self, "blocks", canon)

    @property
    def k(self) -> int:
        return len(self.blocks)

    def word(self) -> tuple[int, ...]:
        """Block label of each position: word()[i-1] = j iff i in P_{j+1}.

        This is the partition's restricted growth string.
        """
        w = [0] * self.p
        for j, blk in enumerate(self.blocks):
            for i in blk:
                w[i - 1] = j
        return tuple(w)

    @classmethod
    def from_word(cls, word: Sequence[int]) -> "SetPartition":
        p = len(word)
        k = max(word) + 1
        blocks: list[list[int]] = [[] for _ in range(k)]
        for i, j in enumerate(word):
            blocks[j].append(i + 1)
        return cls(p=p, blocks=tuple(tuple(b) for b in blocks))


@dataclass(frozen=True)
class ConstraintSystem:
    """Integer matrix A (k x p, entries in {-1,0,1}) with A l = 0, rank k-1."""

    p: int
    k: int
    matrix: tuple[tuple[int, ...], ...]
    rank: int


def partition_from_index_vector(q: Sequence[int]) -> SetPartition:
    """Partition induced by equal entries of q, blocks in order of appearance."""
    if len(q) == 0:
        raise ValueError("index vector must be nonempty")
    first_seen: dict[int, int] = {}
    word = []
    for v in q:
        if v not in first_seen:
            first_seen[v] = len(first_seen)
        word.append(first_seen[v])
    return SetPartition.from_word(word)


def enumerate_partitions(p: int) -> Iterator[SetPartition]:
    """All partitions of {1..p} in restricted-growth-string (tree) order."""
    for word in _rgs_iter(p):
        yield SetPartition.from_word(word)


def _rgs_iter(p: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length p, lexicographic order."""
    if not 1 <= p <= MAX_ORDER:
        raise ValueError(f"p must be in 1..{MAX_ORDER}, got {p}")
    s = [0] * p
    m = [0] * p  # running prefix maximum of s
    while True:
        yield tuple(s)
        i = p - 1
        while i > 0 and s[i] == m[i - 1] + 1:
            i -= 1
        if i == 0:
            return
        s[i] += 1
        m[i] = max(m[i - 1], s[i])
        for j in range(i + 1, p):
            s[j] = 0
            m[j] = m[j - 1]


def build_constraints(tau: SetPartition) -> ConstraintSystem:
    """Constraint matrix of tau with its exact integer rank (always k-1).

    Row j encodes sum_{i in P_j} (l_i - l_{[i+1]}) = 0; the +1 from l_i and
    the -1 from the cyclic predecessor's successor cancel when both land on
    the same variable.
    """
    p, k = tau.p, tau.k
    word = tau.word()
    rows = [[0] * p for _ in range(k)]
    for i in range(1, p + 1):
        rows[word[i - 1]][i - 1] += 1
        succ = cyclic_successor(i, p)
        rows[word[i - 1]][succ - 1] -= 1
    rank = _rank_exact(rows)
    if rank != k - 1:
        raise RankInvariantError(f"rank {rank} != k-1 = {k - 1} for {tau}")
    return ConstraintSystem(p=p, k=k, matrix=tuple(tuple(r) for r in rows), rank=rank)


def _rank_exact(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in rows]
    n_rows = len(m)
    n_cols = len(m[0]) if n_rows else 0
    rank = 0
    for c in range(n_cols):
        piv = next((i for i in range(rank, n_rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = m[rank][c]
        m[rank] = [x / inv for x in m[rank]]
        for i in range(n_rows):
            if i != rank and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == n_rows:
            break
    return rank


def count_lattice_points(tau: SetPartition, N: int) -> int:
    """Exact number of l in {0..N}^p satisfying all block constraints.

    Dynamic programme over positions 1..p: the state is the vector of
    running block imbalances (last block dropped -- its constraint is the
    redundant one), updated by l_i times the incidence column
    e_{block(i)} - e_{block(i-1)}.  States that cannot return to zero with
    the remaining positions are pruned.  Counts are exact Python ints.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    p, k = tau.p, tau.k
    if k == 1:
        # single telescoping constraint is vacuous
        return (N + 1) ** p
    word = tau.word()
    return _count_word(word, p, k, N)


def _count_word(word: Sequence[int], p: int, k: int, N: int) -> int:
    # incidence columns over the first k-1 block rows
    cols = []
    for i in range(p):
        plus = word[i]
        minus = word[i - 1]  # i=0 wraps to the cyclic predecessor p
        col = [0] * (k - 1)
        if plus < k - 1:
            col[plus] += 1
        if minus < k - 1:
            col[minus] -= 1
        cols.append(tuple(col))
    # future +/- capacity per row, for pruning: after position i the
    # imbalance s_j must satisfy -N*plus_left[j] <= -s_j <= N*minus_left[j]
    plus_left = [[0] * (k - 1) for _ in range(p + 1)]
    minus_left = [[0] * (k - 1) for _ in range(p + 1)]
    for i in range(p - 1, -1, -1):
        plus_left[i] = plus_left[i + 1][:]
        minus_left[i] = minus_left[i + 1][:]
        for j in range(k - 1):
            if cols[i][j] > 0:
                plus_left[i][j] += 1
            elif cols[i][j] < 0:
                minus_left[i][j] += 1

    zero = (0,) * (k - 1)
    states: dict[tuple[int, ...], int] = {zero: 1}
    for i in range(p):
        col = cols[i]
        pl = plus_left[i + 1]
        ml = minus_left[i + 1]
        new: dict[tuple[int, ...], int] = {}
        for s, c in states.items():
            for ell in range(N + 1):
                t = tuple(sv + ell * cv for sv, cv in zip(s, col))
                ok = True
                for j, tv in enumerate(t):
                    # need a future decrease of tv (if positive) or increase
                    if tv > N * ml[j] or -tv > N * pl[j]:
                        ok = False
                        break
                if ok:
                    new[t] = new.get(t, 0) + c
        states = new
        if not states:
            return 0
    return states.get(zero, 0)


@dataclass(frozen=True)
class RationalPolynomial:
    """Polynomial with exact Fraction coefficients, ascending powers."""

    coeffs: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def leading_coefficient(self) -> Fraction:
        return self.coeffs[-1]


def zeta_polynomial(tau: SetPartition) -> RationalPolynomial:
    """The counting polynomial: zeta(N) = count_lattice_points(tau, N).

    Interpolates exactly through N = 0..(p-k+1) -- that is p-k+2 nodes for
    the degree-(p-k+1) polynomial -- then verifies one extra guard node at
    N = p-k+2.  All arithmetic is exact rational (several volume
    coefficients are non-integer, e.g. 2/3).
    """
    d = tau.p - tau.k + 1
    nodes = [(n, count_lattice_points(tau, n)) for n in range(d + 1)]
    poly = _interpolate(nodes)
    guard = d + 1
    if poly(guard) != count_lattice_points(tau, guard):
        raise InterpolationGuardError(
            f"guard node N={guard} mismatch for {tau}: zeta is not a "
            f"degree-{d} polynomial on the sampled range"
        )
    return poly


def _interpolate(nodes: list[tuple[int, int]]) -> RationalPolynomial:
    """Lagrange interpolation with Fraction arithmetic."""
    n = len(nodes)
    coeffs = [Fraction(0)] * n
    for j, (xj, yj) in enumerate(nodes):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for m, (xm, _) in enumerate(nodes):
            if m == j:
                continue
            nxt = [Fraction(0)] * (len(basis) + 1)
            for i, c in enumerate(basis):
                nxt[i + 1] += c
                nxt[i] -= c * xm
            basis = nxt
            denom *= xj - xm
        scale = Fraction(yj) / denom
        for i, c in enumerate(basis):
            coeffs[i] += c * scale
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return RationalPolynomial(tuple(coeffs))


def volume_coefficient(tau: SetPartition) -> Fraction:
    """Leading coefficient of the counting polynomial, in (0, 1]."""
    poly = zeta_polynomial(tau)
    v = poly.coeffs[-1] if poly.degree == tau.p - tau.k + 1 else Fraction(0)
    if not 0 < v <= 1:
        raise RankInvariantError(f"volume coefficient {v} outside (0, 1] for {tau}")
    return v
