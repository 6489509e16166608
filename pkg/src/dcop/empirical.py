"""Rank machinery and empirical copulas of multivariate samples.

The empirical copula of an M-point, tie-free sample evaluates to the
fraction of points dominated at each grid point; it is always irreducible
and is represented sparsely by the per-point rank vectors, which are exactly
the cells of the associated permutation array.

Ties are either rejected or broken by a deterministic pseudo-random stream
keyed by (seed, margin label), so results never depend on evaluation order
or parallelism.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .copula_core import DiscreteCopula, StochasticArray, is_irreducible, permutation_tuples
from .errors import DcopError, DimensionError, TieError


def derive_seed(seed: int, label: str) -> int:
    """Stable 64-bit stream seed for a (seed, label) pair.

    Hash-based so it does not depend on process state, platform, or the
    order in which labels are processed.
    """
    digest = hashlib.sha256(f"{seed}\x1f{label}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def label_rng(seed: int, label: str) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, label))


@dataclass(frozen=True)
class TiePolicy:
    """How exact ties are resolved when ranking: refuse, or break at random.

    Random mode is deterministic given (seed, margin label).
    """

    mode: str
    seed: int | None = None

    @classmethod
    def error(cls) -> "TiePolicy":
        return cls(mode="error")

    @classmethod
    def random(cls, seed: int) -> "TiePolicy":
        return cls(mode="random", seed=int(seed))


@dataclass(frozen=True)
class RankVector:
    """1-based ranks of one margin; a bijection of {1..M}."""

    ranks: tuple[int, ...]
    seed_used: int | None = None


@dataclass(frozen=True)
class SampleSet:
    """M points with L real coordinates each, margins labeled."""

    points: tuple[tuple[float, ...], ...]
    margin_ids: tuple[str, ...]

    def __init__(self, points, margin_ids=None):
        pts = tuple(tuple(float(c) for c in p) for p in points)
        if not pts:
            raise DimensionError("need at least one sample point")
        L = len(pts[0])
        if L < 2 or any(len(p) != L for p in pts):
            raise DimensionError("sample points must share a common length L >= 2")
        ids = tuple(margin_ids) if margin_ids is not None else tuple(
            f"x{j + 1}" for j in range(L)
        )
        if len(ids) != L:
            raise DimensionError(f"expected {L} margin ids, got {len(ids)}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "margin_ids", ids)

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def margin(self, axis: int) -> tuple[float, ...]:
        return tuple(p[axis] for p in self.points)


def ranks(values: Sequence[float], policy: TiePolicy, margin: str = "") -> RankVector:
    """1-based ranks: smallest value gets rank 1.

    Under the random policy, tied values receive a uniformly random relative
    order drawn from the (seed, margin)-keyed stream; under the error policy
    any exact tie raises.
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError("values must be a nonempty 1-d sequence")
    m = arr.size
    if policy.mode == "error":
        if np.unique(arr).size != m:
            raise TieError(f"exact ties in margin {margin!r} under the error tie policy")
        order = np.argsort(arr, kind="stable")
        seed_used = None
    elif policy.mode == "random":
        assert policy.seed is not None
        seed_used = derive_seed(policy.seed, margin)
        jitter = np.random.default_rng(seed_used).random(m)
        order = np.lexsort((jitter, arr))
    else:
        raise ValueError(f"unknown tie policy mode {policy.mode!r}")
    out = np.empty(m, dtype=int)
    out[order] = np.arange(1, m + 1)
    return RankVector(ranks=tuple(int(r) for r in out), seed_used=seed_used)


def rank_matrix(sample: SampleSet, policy: TiePolicy) -> np.ndarray:
    """Column-stacked per-margin ranks, shape (M, L)."""
    cols = [
        ranks(sample.margin(axis), policy, sample.margin_ids[axis]).ranks
        for axis in range(sample.dim)
    ]
    return np.column_stack(cols)


def empirical_copula(sample: SampleSet, policy: TiePolicy | None = None) -> DiscreteCopula:
    """Sparse irreducible copula induced by the sample's rank vectors."""
    rm = rank_matrix(sample, policy or TiePolicy.error())
    return DiscreteCopula.sparse(sample.size, sample.dim, map(tuple, rm))


def permutation_array_of(sample: SampleSet, policy: TiePolicy | None = None) -> StochasticArray:
    """Permutation array with a 1 at each point's rank vector."""
    rm = rank_matrix(sample, policy or TiePolicy.error())
    return StochasticArray.from_entries(
        sample.size, sample.dim, {tuple(map(int, row)): 1 for row in rm}
    )


def sample_from_copula(
    D: DiscreteCopula,
    value_sets: Sequence[Sequence[float]],
    margin_ids: Sequence[str] | None = None,
) -> SampleSet:
    """Sample whose empirical copula is the given irreducible copula.

    ``value_sets[l]`` supplies the M strictly increasing values the l-th
    margin takes; cell (i_1..i_L) becomes the point pairing the i_l-th
    smallest values.
    """
    if not is_irreducible(D):
        raise DcopError("sample_from_copula needs an irreducible copula")
    sparse = D.to_sparse()
    if len(value_sets) != D.L:
        raise DimensionError(f"need {D.L} value sets, got {len(value_sets)}")
    sets = [tuple(float(v) for v in vs) for vs in value_sets]
    for axis, vs in enumerate(sets):
        if len(vs) != D.M:
            raise DimensionError(f"value set {axis} must have length M={D.M}")
        if any(b <= a for a, b in zip(vs, vs[1:])):
            raise DimensionError(f"value set {axis} must be strictly increasing")
    assert sparse.tuples is not None
    points = [
        tuple(sets[axis][c - 1] for axis, c in enumerate(cell))
        for cell in sorted(sparse.tuples)
    ]
    return SampleSet(points, margin_ids)


def spearman_from_ranks(rank_columns: np.ndarray) -> np.ndarray:
    """Pairwise rank correlation from tie-free 1-based rank columns.

    Uses 1 - 6 sum(d^2) / (M (M^2 - 1)), exact for bijective ranks.
    """
    rm = np.asarray(rank_columns, dtype=float)
    m, L = rm.shape
    if m < 2:
        raise DimensionError("need at least two points for rank correlation")
    out = np.eye(L)
    denom = m * (m * m - 1)
    for a in range(L):
        for b in range(a + 1, L):
            d2 = float(np.sum((rm[:, a] - rm[:, b]) ** 2))
            rho = 1.0 - 6.0 * d2 / denom
            out[a, b] = out[b, a] = rho
    return out


def spearman_matrix(sample: SampleSet, policy: TiePolicy | None = None) -> np.ndarray:
    """L x L Spearman rank correlation matrix of the sample."""
    return spearman_from_ranks(rank_matrix(sample, policy or TiePolicy.error()))
