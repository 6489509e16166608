"""Discrete subcopulas on reduced grids and their extension to full copulas.

A subcopula is a copula-like function defined only on per-axis subgrids
``J^(l) = K^(l)/M`` with ``{0, M} ⊆ K^(l) ⊆ {0..M}``, subject to

* S1 (grounded), S2 (uniform margins on the subgrid points),
* S3 (nonnegative box volumes between subgrid corners).

An irreducible subcopula (values in I_M) always extends to an irreducible
discrete copula agreeing with it on the subgrids.  The extension here is a
canonical constructive one: the subgrids carve {1..M}^L into blocks, each
block owes `M * (its box volume)` permutation cells, and cells are placed by
pairing per-axis index pools in increasing order while visiting blocks
lexicographically.  The marginal identity (the counts of every slab of blocks
sum to the slab width) guarantees the pools are exhausted exactly, so the
result is a permutation array.  The extension is one admissible choice among
many; only its restriction to the subgrids is canonical.
"""

from __future__ import annotations

import itertools
import operator
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Sequence

from .copula_core import (
    ZERO,
    DiscreteCopula,
    MultiIndex,
    ValidationReport,
    Violation,
    _as_fraction,
)
from .errors import DcopError, DimensionError


def _check_grid(grid: Sequence[int], M: int, axis: int) -> tuple[int, ...]:
    try:
        g = tuple(operator.index(c) for c in grid)
    except TypeError:
        raise DimensionError(f"grid for axis {axis} has non-integer levels") from None
    if len(g) < 2 or g[0] != 0 or g[-1] != M:
        raise DimensionError(f"grid for axis {axis} must run from 0 to {M}, got {g}")
    if any(b <= a for a, b in zip(g, g[1:])):
        raise DimensionError(f"grid for axis {axis} must be strictly increasing, got {g}")
    return g


@dataclass(frozen=True, eq=False)
class DiscreteSubcopula:
    """Values on the product of per-axis subgrids, keyed by integer levels.

    ``grids[l]`` lists the levels ``k`` present on axis ``l`` (the actual grid
    points are ``k/M``); ``values`` must cover the full product of the grids.
    """

    M: int
    L: int
    grids: tuple[tuple[int, ...], ...]
    values: Mapping[MultiIndex, Fraction]

    def __init__(self, M, L, grids, values):
        if M < 1 or L < 2:
            raise DimensionError(f"need M >= 1 and L >= 2, got M={M}, L={L}")
        gs = tuple(_check_grid(g, M, axis) for axis, g in enumerate(grids))
        if len(gs) != L:
            raise DimensionError(f"expected {L} grids, got {len(gs)}")
        canon: dict[MultiIndex, Fraction] = {}
        for idx, v in values.items():
            try:
                t = tuple(operator.index(c) for c in idx)
            except TypeError:
                raise DimensionError(f"value key {tuple(idx)} has non-integer levels") from None
            if len(t) != L or any(c not in g for c, g in zip(t, gs)):
                raise DimensionError(f"value key {t} is not a subgrid point")
            canon[t] = _as_fraction(v, f"value at {t}")
        expected = 1
        for g in gs:
            expected *= len(g)
        if len(canon) != expected:
            raise DimensionError(
                f"subcopula needs all {expected} subgrid values, got {len(canon)}"
            )
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "grids", gs)
        object.__setattr__(self, "values", MappingProxyType(canon))

    def grid_points(self):
        return itertools.product(*self.grids)

    def value(self, idx: Sequence[int]) -> Fraction:
        return self.values[tuple(idx)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiscreteSubcopula):
            return NotImplemented
        return (
            (self.M, self.L, self.grids) == (other.M, other.L, other.grids)
            and dict(self.values) == dict(other.values)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        sizes = "x".join(str(len(g)) for g in self.grids)
        return f"DiscreteSubcopula(M={self.M}, L={self.L}, grid {sizes})"


@dataclass(frozen=True)
class BlockDecomposition:
    """Integer cell counts per block of the subgrid partition of {1..M}^L."""

    block_counts: Mapping[MultiIndex, int]

    def total(self) -> int:
        return sum(self.block_counts.values())


def _box_volume(sub: DiscreteSubcopula, lo: MultiIndex, hi: MultiIndex) -> Fraction:
    total = ZERO
    for picks in itertools.product((0, 1), repeat=sub.L):
        corner = tuple(hi[a] if p else lo[a] for a, p in enumerate(picks))
        sign = 1 if (sub.L - sum(picks)) % 2 == 0 else -1
        total += sign * sub.values[corner]
    return total


def validate_subcopula(sub: DiscreteSubcopula) -> ValidationReport:
    """Check S1, S2 and S3 (boxes between adjacent subgrid levels).

    Adjacent boxes suffice: any subgrid box is a disjoint union of adjacent
    ones, so nonnegativity propagates by additivity.
    """
    violations: list[Violation] = []
    M, L = sub.M, sub.L
    for idx in sub.grid_points():
        if 0 in idx and sub.values[idx] != 0:
            violations.append(Violation("S1", idx, sub.values[idx]))
    for axis in range(L):
        for level in sub.grids[axis]:
            point = tuple(level if a == axis else M for a in range(L))
            if sub.values[point] != Fraction(level, M):
                violations.append(Violation("S2", point, sub.values[point]))
    for slabs in itertools.product(*(range(len(g) - 1) for g in sub.grids)):
        lo = tuple(g[s] for g, s in zip(sub.grids, slabs))
        hi = tuple(g[s + 1] for g, s in zip(sub.grids, slabs))
        vol = _box_volume(sub, lo, hi)
        if vol < 0:
            violations.append(Violation("S3", lo, vol))
    return ValidationReport.from_violations(violations)


def is_irreducible_subcopula(sub: DiscreteSubcopula) -> bool:
    """True iff every value lies in I_M."""
    return all((v * sub.M).denominator == 1 for v in sub.values.values())


def block_counts(sub: DiscreteSubcopula) -> BlockDecomposition:
    """M times each block's box volume; integral for irreducible subcopulas."""
    counts: dict[MultiIndex, int] = {}
    for slabs in itertools.product(*(range(len(g) - 1) for g in sub.grids)):
        lo = tuple(g[s] for g, s in zip(sub.grids, slabs))
        hi = tuple(g[s + 1] for g, s in zip(sub.grids, slabs))
        scaled = _box_volume(sub, lo, hi) * sub.M
        if scaled.denominator != 1 or scaled < 0:
            raise DcopError(
                f"block {slabs} has non-integral or negative scaled volume {scaled}; "
                "input is not an irreducible subcopula"
            )
        counts[slabs] = int(scaled)
    return BlockDecomposition(block_counts=MappingProxyType(counts))


def extend(sub: DiscreteSubcopula) -> DiscreteCopula:
    """Canonical irreducible extension of an irreducible subcopula.

    Deterministic: blocks are visited in lexicographic order and each axis
    pool hands out its slab's indices in increasing order, pairing the k-th
    pops of every axis into one cell.
    """
    validate_subcopula(sub).require("discrete subcopula")
    if not is_irreducible_subcopula(sub):
        raise DcopError("only irreducible subcopulas (values in I_M) can be extended")
    decomposition = block_counts(sub)

    pools = [
        [deque(range(g[s] + 1, g[s + 1] + 1)) for s in range(len(g) - 1)]
        for g in sub.grids
    ]
    cells: list[MultiIndex] = []
    for slabs in itertools.product(*(range(len(g) - 1) for g in sub.grids)):
        count = decomposition.block_counts[slabs]
        if count == 0:
            continue
        picks = []
        for axis, s in enumerate(slabs):
            pool = pools[axis][s]
            if len(pool) < count:
                raise DcopError(f"axis {axis} slab {s} underflow at block {slabs}")
            picks.append([pool.popleft() for _ in range(count)])
        cells.extend(zip(*picks))
    leftovers = [(a, s) for a, axis_pools in enumerate(pools) for s, p in enumerate(axis_pools) if p]
    if leftovers:
        raise DcopError(f"unconsumed index pools {leftovers}; extension infeasible")
    return DiscreteCopula.sparse(sub.M, sub.L, cells)


def restrict(D: DiscreteCopula, grids: Sequence[Sequence[int]]) -> DiscreteSubcopula:
    """Restriction of a discrete copula to the given per-axis subgrids."""
    gs = tuple(_check_grid(g, D.M, axis) for axis, g in enumerate(grids))
    if len(gs) != D.L:
        raise DimensionError(f"expected {D.L} grids, got {len(gs)}")
    values = {idx: D.value(idx) for idx in itertools.product(*gs)}
    return DiscreteSubcopula(D.M, D.L, gs, values)
