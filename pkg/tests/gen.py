"""Seeded random object generators shared by the test modules."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from dcop import DiscreteCopula, FiniteCDF, SampleSet, StochasticArray


def random_permutation_cells(rng: np.random.Generator, M: int, L: int) -> list[tuple[int, ...]]:
    """Cells of a random L-dimensional permutation array of order M."""
    columns = [np.arange(1, M + 1)]
    columns += [rng.permutation(np.arange(1, M + 1)) for _ in range(L - 1)]
    return [tuple(int(col[i]) for col in columns) for i in range(M)]


def random_permutation_array(rng: np.random.Generator, M: int, L: int) -> StochasticArray:
    return StochasticArray.from_entries(
        M, L, {cell: 1 for cell in random_permutation_cells(rng, M, L)}
    )


def random_sparse_copula(rng: np.random.Generator, M: int, L: int) -> DiscreteCopula:
    return DiscreteCopula.sparse(M, L, random_permutation_cells(rng, M, L))


def random_stochastic_array(
    rng: np.random.Generator, M: int, L: int, max_components: int = 5
) -> StochasticArray:
    """Exact convex mixture of 1..max_components random permutation arrays."""
    k = int(rng.integers(1, max_components + 1))
    numerators = [int(n) for n in rng.integers(1, 10, size=k)]
    total = sum(numerators)
    entries: dict[tuple[int, ...], Fraction] = {}
    for n in numerators:
        w = Fraction(n, total)
        for cell in random_permutation_cells(rng, M, L):
            entries[cell] = entries.get(cell, Fraction(0)) + w
    return StochasticArray.from_entries(M, L, entries)


def random_tie_free_points(
    rng: np.random.Generator, M: int, L: int
) -> list[tuple[float, ...]]:
    """M points, each margin a shuffled strictly increasing value set."""
    cols = []
    for _ in range(L):
        base = np.cumsum(rng.uniform(0.1, 1.0, size=M)) + rng.normal()
        cols.append(rng.permutation(base))
    return [tuple(float(cols[j][i]) for j in range(L)) for i in range(M)]


def random_sample_set(rng: np.random.Generator, M: int, L: int) -> SampleSet:
    return SampleSet(random_tie_free_points(rng, M, L))


def random_value_sets(rng: np.random.Generator, M: int, L: int) -> list[list[float]]:
    return [
        [float(v) for v in np.cumsum(rng.uniform(0.1, 1.0, size=M)) + rng.normal()]
        for _ in range(L)
    ]


def random_full_range_margin(rng: np.random.Generator, M: int) -> FiniteCDF:
    jumps = np.cumsum(rng.uniform(0.1, 1.0, size=M)) + rng.normal()
    return FiniteCDF(
        tuple(float(y) for y in jumps),
        tuple(Fraction(k, M) for k in range(1, M + 1)),
    )


def random_coarse_margin(rng: np.random.Generator, M: int) -> FiniteCDF:
    """Margin whose range is a random subset of I_M containing 1."""
    interior = [k for k in range(1, M) if rng.random() < 0.6]
    levels = interior + [M]
    jumps = np.cumsum(rng.uniform(0.1, 1.0, size=len(levels))) + rng.normal()
    return FiniteCDF(
        tuple(float(y) for y in jumps),
        tuple(Fraction(k, M) for k in levels),
    )


def random_subgrids(rng: np.random.Generator, M: int, L: int) -> list[list[int]]:
    """Per-axis grids with a nonempty random set of interior levels deleted."""
    grids = []
    for _ in range(L):
        interior = list(range(1, M))
        n_delete = int(rng.integers(1, len(interior) + 1))
        deleted = set(
            int(v) for v in rng.choice(interior, size=n_delete, replace=False)
        )
        grids.append([0] + [k for k in interior if k not in deleted] + [M])
    return grids
