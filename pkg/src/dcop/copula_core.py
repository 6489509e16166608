"""Exact discrete copulas on the uniform grid I_M^L and stochastic arrays.

A discrete copula is a function ``D`` on the grid ``I_M^L`` with
``I_M = {0, 1/M, ..., 1}`` satisfying

* D1 (grounded): ``D`` vanishes whenever any coordinate is 0,
* D2 (uniform margins): ``D(1, .., i/M, .., 1) = i/M``,
* D3 (L-increasing): every elementary cell has nonnegative volume.

A stochastic array is an ``L``-dimensional nonnegative array of order ``M``
whose axis-parallel line sums all equal 1; the 0/1-valued special case is a
permutation array.  The two representations are equivalent: the copula is the
normalized cumulative sum of the array, and the array is ``M`` times the
copula's elementary cell volumes.  Irreducible copulas (range exactly I_M)
correspond to permutation arrays and are stored sparsely as the ``M`` cells
that carry mass.

All values are exact rationals (``fractions.Fraction``); grid points are
integer multi-indices, so ``(i_1, ..., i_L)`` stands for
``(i_1/M, ..., i_L/M)``.
"""

from __future__ import annotations

import itertools
import operator
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import BudgetError, DimensionError, ValidationFailure

#: Upper bound on dense grid size (M+1)^L accepted by default.
DENSE_BUDGET = 10**7

ZERO = Fraction(0)
ONE = Fraction(1)

MultiIndex = tuple[int, ...]


def _as_fraction(v, where: str = "value") -> Fraction:
    """Coerce integrals/Fractions to Fraction; reject floats to keep exactness."""
    if isinstance(v, Fraction):
        return v
    try:
        return Fraction(operator.index(v))
    except TypeError:
        raise TypeError(
            f"{where} must be an integer or Fraction, got {type(v).__name__}"
        ) from None


def _check_index(idx: Sequence[int], L: int, lo: int, hi: int, what: str) -> MultiIndex:
    try:
        t = tuple(operator.index(c) for c in idx)
    except TypeError:
        raise DimensionError(f"{what} {tuple(idx)} has non-integer components") from None
    if len(t) != L:
        raise DimensionError(f"{what} {t} has length {len(t)}, expected L={L}")
    for c in t:
        if c < lo or c > hi:
            raise DimensionError(f"{what} {t} has component outside {lo}..{hi}")
    return t


class Violation(NamedTuple):
    """One violated axiom instance.

    ``where`` is the grid/cell multi-index for D1/D2/D3/S1/S2/S3/A1 and the
    ``(axis, level)`` pair for A2.  ``value`` is the offending quantity.
    """

    axiom: str
    where: tuple
    value: object


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of an axiom check; lists every violated instance."""

    passed: bool
    violations: tuple[Violation, ...]

    @classmethod
    def from_violations(cls, violations: Iterable[Violation]) -> "ValidationReport":
        vs = tuple(violations)
        return cls(passed=not vs, violations=vs)

    def require(self, what: str) -> None:
        if not self.passed:
            head = ", ".join(f"{v.axiom}@{v.where}" for v in self.violations[:5])
            more = "" if len(self.violations) <= 5 else f" (+{len(self.violations) - 5} more)"
            raise ValidationFailure(f"invalid {what}: {head}{more}", report=self)


@dataclass(frozen=True, eq=False)
class DiscreteCopula:
    """Grid function on {0..M}^L, dense (explicit values) or sparse.

    The sparse form stores the ``M`` cells of the underlying permutation
    array; values are dominated-cell counts divided by ``M``, computed on
    demand in O(M) per query.  Construction checks shapes and ranges only;
    axioms are the business of :func:`validate_copula`.
    """

    M: int
    L: int
    values: Mapping[MultiIndex, Fraction] | None = None
    tuples: frozenset[MultiIndex] | None = None

    def __post_init__(self):
        if self.M < 1 or self.L < 2:
            raise DimensionError(f"need M >= 1 and L >= 2, got M={self.M}, L={self.L}")
        if (self.values is None) == (self.tuples is None):
            raise DimensionError("exactly one of values/tuples must be given")

    @classmethod
    def dense(
        cls,
        M: int,
        L: int,
        values: Mapping[Sequence[int], object],
        budget: int = DENSE_BUDGET,
    ) -> "DiscreteCopula":
        """Build the dense representation from a full-grid value map."""
        if (M + 1) ** L > budget:
            raise BudgetError(
                f"dense grid ({M}+1)^{L} = {(M + 1) ** L} exceeds budget {budget}"
            )
        vals: dict[MultiIndex, Fraction] = {}
        for idx, v in values.items():
            t = _check_index(idx, L, 0, M, "grid point")
            f = _as_fraction(v, f"value at {t}")
            if f < 0 or f > 1:
                raise DimensionError(f"value {f} at {t} outside [0,1]")
            vals[t] = f
        if len(vals) != (M + 1) ** L:
            raise DimensionError(
                f"dense copula needs all {(M + 1) ** L} grid values, got {len(vals)}"
            )
        return cls(M=M, L=L, values=MappingProxyType(vals))

    @classmethod
    def sparse(cls, M: int, L: int, tuples: Iterable[Sequence[int]]) -> "DiscreteCopula":
        """Build the sparse representation from permutation-array cells."""
        ts = frozenset(_check_index(t, L, 1, M, "cell") for t in tuples)
        return cls(M=M, L=L, tuples=ts)

    @property
    def is_sparse(self) -> bool:
        return self.tuples is not None

    def grid(self) -> Iterator[MultiIndex]:
        return itertools.product(range(self.M + 1), repeat=self.L)

    def value(self, idx: Sequence[int]) -> Fraction:
        t = _check_index(idx, self.L, 0, self.M, "grid point")
        if self.values is not None:
            return self.values[t]
        assert self.tuples is not None
        count = sum(1 for cell in self.tuples if all(c <= i for c, i in zip(cell, t)))
        return Fraction(count, self.M)

    def to_dense(self, budget: int = DENSE_BUDGET) -> "DiscreteCopula":
        if self.values is not None:
            return self
        entries = {t: ONE for t in self.tuples or ()}
        vals = _cumulative_values(entries, self.M, self.L, budget)
        scale = Fraction(1, self.M)
        return DiscreteCopula.dense(
            self.M, self.L, {k: v * scale for k, v in vals.items()}, budget=budget
        )

    def to_sparse(self) -> "DiscreteCopula":
        if self.tuples is not None:
            return self
        arr = copula_to_array(self)
        return DiscreteCopula.sparse(self.M, self.L, permutation_tuples(arr))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiscreteCopula):
            return NotImplemented
        if (self.M, self.L) != (other.M, other.L):
            return False
        if self.tuples is not None and other.tuples is not None:
            return self.tuples == other.tuples
        if self.values is not None and other.values is not None:
            return dict(self.values) == dict(other.values)
        dense = self if self.values is not None else other
        sparse = other if self.values is not None else self
        assert dense.values is not None
        return all(dense.values[idx] == sparse.value(idx) for idx in dense.grid())

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        rep = f"sparse, {len(self.tuples or ())} cells" if self.is_sparse else "dense"
        return f"DiscreteCopula(M={self.M}, L={self.L}, {rep})"


@dataclass(frozen=True, eq=False)
class StochasticArray:
    """L-dimensional array of order M; cells absent from ``entries`` are zero."""

    M: int
    L: int
    entries: Mapping[MultiIndex, Fraction]

    def __post_init__(self):
        if self.M < 1 or self.L < 2:
            raise DimensionError(f"need M >= 1 and L >= 2, got M={self.M}, L={self.L}")

    @classmethod
    def from_entries(
        cls, M: int, L: int, entries: Mapping[Sequence[int], object]
    ) -> "StochasticArray":
        canon: dict[MultiIndex, Fraction] = {}
        for idx, v in entries.items():
            t = _check_index(idx, L, 1, M, "cell")
            f = _as_fraction(v, f"entry at {t}")
            if f != 0:
                canon[t] = f
        return cls(M=M, L=L, entries=MappingProxyType(canon))

    def entry(self, idx: Sequence[int]) -> Fraction:
        t = _check_index(idx, self.L, 1, self.M, "cell")
        return self.entries.get(t, ZERO)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StochasticArray):
            return NotImplemented
        return (self.M, self.L) == (other.M, other.L) and dict(self.entries) == dict(
            other.entries
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"StochasticArray(M={self.M}, L={self.L}, nnz={len(self.entries)})"


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate_copula(D: DiscreteCopula) -> ValidationReport:
    """Check D1, D2 and D3, reporting every violated instance.

    For the sparse form, D1/D3 hold by construction and D2 reduces to the
    permutation property: each axis level must be used by exactly one cell.
    """
    violations: list[Violation] = []
    M, L = D.M, D.L

    if D.tuples is not None:
        counts = [[0] * (M + 1) for _ in range(L)]
        for cell in D.tuples:
            for axis, c in enumerate(cell):
                counts[axis][c] += 1
        for axis in range(L):
            for level in range(1, M + 1):
                n = counts[axis][level]
                if n != 1:
                    point = tuple(level if a == axis else M for a in range(L))
                    violations.append(Violation("D2", point, Fraction(n, M)))
        return ValidationReport.from_violations(violations)

    assert D.values is not None
    for idx in D.grid():
        if 0 in idx and D.values[idx] != 0:
            violations.append(Violation("D1", idx, D.values[idx]))
    for axis in range(L):
        for level in range(M + 1):
            point = tuple(level if a == axis else M for a in range(L))
            expected = Fraction(level, M)
            if D.values[point] != expected:
                violations.append(Violation("D2", point, D.values[point]))
    for idx, vol in _cell_volumes(D.values, M, L).items():
        if vol < 0:
            violations.append(Violation("D3", idx, vol))
    return ValidationReport.from_violations(violations)


def validate_array(A: StochasticArray) -> ValidationReport:
    """Check nonnegativity (A1) and all axis-line sums (A2) exactly."""
    violations: list[Violation] = []
    M, L = A.M, A.L
    line_sums = [[ZERO] * (M + 1) for _ in range(L)]
    for idx, v in A.entries.items():
        if v < 0:
            violations.append(Violation("A1", idx, v))
        for axis, c in enumerate(idx):
            line_sums[axis][c] += v
    for axis in range(L):
        for level in range(1, M + 1):
            s = line_sums[axis][level]
            if s != 1:
                violations.append(Violation("A2", (axis, level), s))
    return ValidationReport.from_violations(violations)


# ---------------------------------------------------------------------------
# Volume operator and conversions
# ---------------------------------------------------------------------------


def volume(D: DiscreteCopula, lower: Sequence[int], upper: Sequence[int]) -> Fraction:
    """Mass assigned to the box (lower, upper] by inclusion-exclusion.

    The alternating sum runs over all 2^L box corners; a corner picking k
    lower coordinates contributes with sign (-1)^k.
    """
    lo = _check_index(lower, D.L, 0, D.M, "lower corner")
    hi = _check_index(upper, D.L, 0, D.M, "upper corner")
    if any(a > b for a, b in zip(lo, hi)):
        raise DimensionError(f"lower corner {lo} exceeds upper corner {hi}")
    total = ZERO
    for picks in itertools.product((0, 1), repeat=D.L):
        corner = tuple(hi[a] if p else lo[a] for a, p in enumerate(picks))
        sign = 1 if (D.L - sum(picks)) % 2 == 0 else -1
        total += sign * D.value(corner)
    return total


def _cumulative_values(
    entries: Mapping[MultiIndex, Fraction], M: int, L: int, budget: int = DENSE_BUDGET
) -> dict[MultiIndex, Fraction]:
    """Cumulative sums of array entries over {0..M}^L (one pass per axis)."""
    if (M + 1) ** L > budget:
        raise BudgetError(f"cumulative grid ({M}+1)^{L} exceeds budget {budget}")
    grid: dict[MultiIndex, Fraction] = {
        idx: ZERO for idx in itertools.product(range(M + 1), repeat=L)
    }
    for idx, v in entries.items():
        grid[idx] = v
    for axis in range(L):
        for idx in itertools.product(range(M + 1), repeat=L):
            c = idx[axis]
            if c > 0:
                prev = idx[:axis] + (c - 1,) + idx[axis + 1 :]
                grid[idx] += grid[prev]
    return grid


def _cell_volumes(
    values: Mapping[MultiIndex, Fraction], M: int, L: int
) -> dict[MultiIndex, Fraction]:
    """Elementary cell volumes of a dense grid (inverse of the cumsum)."""
    diff = dict(values)
    full = list(itertools.product(range(M + 1), repeat=L))
    for axis in range(L):
        for idx in reversed(full):
            c = idx[axis]
            if c > 0:
                prev = idx[:axis] + (c - 1,) + idx[axis + 1 :]
                diff[idx] -= diff[prev]
    return {
        idx: diff[idx]
        for idx in itertools.product(range(1, M + 1), repeat=L)
    }


def array_to_copula(A: StochasticArray, budget: int = DENSE_BUDGET) -> DiscreteCopula:
    """Normalized cumulative sum of a valid stochastic array.

    Permutation arrays yield the sparse representation; anything else is
    materialized on the dense grid.
    """
    validate_array(A).require("stochastic array")
    if all(v == 1 for v in A.entries.values()):
        return DiscreteCopula.sparse(A.M, A.L, A.entries.keys())
    cum = _cumulative_values(A.entries, A.M, A.L, budget)
    scale = Fraction(1, A.M)
    return DiscreteCopula.dense(
        A.M, A.L, {idx: v * scale for idx, v in cum.items()}, budget=budget
    )


def copula_to_array(D: DiscreteCopula) -> StochasticArray:
    """M times the elementary cell volumes of a valid discrete copula."""
    validate_copula(D).require("discrete copula")
    if D.tuples is not None:
        return StochasticArray.from_entries(D.M, D.L, {t: ONE for t in D.tuples})
    assert D.values is not None
    cells = _cell_volumes(D.values, D.M, D.L)
    return StochasticArray.from_entries(
        D.M, D.L, {idx: v * D.M for idx, v in cells.items() if v != 0}
    )


def is_irreducible(D: DiscreteCopula) -> bool:
    """True iff the copula's range is contained in I_M."""
    if D.tuples is not None:
        return True
    assert D.values is not None
    return all((v * D.M).denominator == 1 for v in D.values.values())


def reference_copula(kind: str, M: int, L: int) -> DiscreteCopula:
    """Exact product or comonotonicity copula on I_M^L.

    The product copula multiplies the coordinates; the comonotonicity copula
    takes their minimum and is returned sparsely (identity permutation array).
    """
    if M < 1 or L < 2:
        raise DimensionError(f"need M >= 1 and L >= 2, got M={M}, L={L}")
    if kind == "product":
        den = M**L
        values = {
            idx: Fraction(_prod(idx), den)
            for idx in itertools.product(range(M + 1), repeat=L)
        }
        return DiscreteCopula.dense(M, L, values)
    if kind == "comonotonicity":
        return DiscreteCopula.sparse(M, L, ((i,) * L for i in range(1, M + 1)))
    raise ValueError(f"unknown reference copula kind {kind!r}")


def _prod(idx: Sequence[int]) -> int:
    out = 1
    for c in idx:
        out *= c
    return out


def permutation_tuples(A: StochasticArray) -> frozenset[MultiIndex]:
    """The cells holding a 1 in a 0/1-valued stochastic array."""
    if any(v != 1 for v in A.entries.values()):
        bad = next(v for v in A.entries.values() if v != 1)
        raise ValueError(f"array is not 0/1-valued (found entry {bad})")
    return frozenset(A.entries.keys())
