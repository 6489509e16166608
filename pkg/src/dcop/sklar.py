"""Composing and decomposing finite joint distributions via discrete copulas.

``compose`` builds a joint CDF ``H(y_1..y_L) = D(F_1(y_1), .., F_L(y_L))``
from a discrete copula and finite margins whose ranges lie in I_M.
``decompose`` goes the other way: a finite joint CDF with range in I_M
induces a subcopula on the margin-range grids, which extends to an
irreducible copula reproducing the joint exactly.  The extension (and hence
the decomposition) is unique precisely when every margin has full range I_M.

Joints are stored as support points with exact rational masses; the CDF is
derived on demand.  Evaluation at +/-inf needs no special cases anywhere:
comparisons against ``math.inf`` do the right thing.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .copula_core import (
    ZERO,
    DiscreteCopula,
    MultiIndex,
    _as_fraction,
    volume,
)
from .errors import DcopError, DimensionError
from .subcopula import DiscreteSubcopula, extend


@dataclass(frozen=True)
class FiniteCDF:
    """Right-continuous step function with finitely many jumps.

    ``cum_probs[j]`` is the value on ``[jump_points[j], jump_points[j+1])``;
    the function is 0 before the first jump and the last value must be 1.
    """

    jump_points: tuple[float, ...]
    cum_probs: tuple[Fraction, ...]

    def __post_init__(self):
        jp = tuple(float(y) for y in self.jump_points)
        cp = tuple(_as_fraction(p, "cumulative probability") for p in self.cum_probs)
        if len(jp) != len(cp) or not jp:
            raise DimensionError("need equally many jump points and probabilities, at least one")
        if any(b <= a for a, b in zip(jp, jp[1:])):
            raise DimensionError("jump points must be strictly increasing")
        if any(b <= a for a, b in zip(cp, cp[1:])) or cp[0] <= 0 or cp[-1] != 1:
            raise DimensionError("cumulative probabilities must increase strictly to 1")
        object.__setattr__(self, "jump_points", jp)
        object.__setattr__(self, "cum_probs", cp)

    def at(self, y: float) -> Fraction:
        """F(y); works for y = +/-inf via ordinary comparisons."""
        out = ZERO
        for jump, p in zip(self.jump_points, self.cum_probs):
            if jump <= y:
                out = p
            else:
                break
        return out

    def levels(self, M: int) -> tuple[int, ...]:
        """Range of F as integer levels k (values k/M); errors if not in I_M."""
        levels = []
        for p in self.cum_probs:
            scaled = p * M
            if scaled.denominator != 1:
                raise DcopError(f"margin value {p} is not a multiple of 1/{M}")
            levels.append(int(scaled))
        return tuple(levels)

    def quantile_point(self, level: int, M: int) -> float:
        """A point y with F(y) = level/M; -inf for level 0."""
        if level == 0:
            return -math.inf
        target = Fraction(level, M)
        for jump, p in zip(self.jump_points, self.cum_probs):
            if p == target:
                return jump
        raise DcopError(f"level {level}/{M} is not attained by this margin")


@dataclass(frozen=True, eq=False)
class FiniteJointDistribution:
    """Finite support with exact masses; M declares the intended value grid.

    Masses are only forced onto the 1/M lattice where a decomposition needs
    it (see :func:`subcopula_of`); composition with a reducible copula can
    legitimately produce finer masses.
    """

    M: int
    L: int
    support: tuple[tuple[float, ...], ...]
    masses: tuple[Fraction, ...]

    @classmethod
    def from_masses(
        cls,
        M: int,
        L: int,
        support: Sequence[Sequence[float]],
        masses: Sequence[object],
    ) -> "FiniteJointDistribution":
        pts = [tuple(float(c) for c in p) for p in support]
        ms = [_as_fraction(m, "mass") for m in masses]
        if len(pts) != len(ms):
            raise DimensionError("support and masses must have equal length")
        if any(len(p) != L for p in pts):
            raise DimensionError(f"support points must have length L={L}")
        if any(m < 0 for m in ms):
            raise DimensionError("masses must be nonnegative")
        if sum(ms, ZERO) != 1:
            raise DimensionError(f"masses must sum to 1, got {sum(ms, ZERO)}")
        paired = sorted((p, m) for p, m in zip(pts, ms) if m != 0)
        if len({p for p, _ in paired}) != len(paired):
            raise DimensionError("support points must be distinct")
        return cls(
            M=M,
            L=L,
            support=tuple(p for p, _ in paired),
            masses=tuple(m for _, m in paired),
        )

    def cdf(self, point: Sequence[float]) -> Fraction:
        """H(y_1..y_L): total mass dominated by the point (inf-friendly)."""
        y = tuple(point)
        out = ZERO
        for p, m in zip(self.support, self.masses):
            if all(c <= yc for c, yc in zip(p, y)):
                out += m
        return out

    def on_lattice(self) -> bool:
        """True iff every mass is a multiple of 1/M (so Ran(H) is in I_M)."""
        return all((m * self.M).denominator == 1 for m in self.masses)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteJointDistribution):
            return NotImplemented
        return (
            (self.M, self.L) == (other.M, other.L)
            and self.support == other.support
            and self.masses == other.masses
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return (
            f"FiniteJointDistribution(M={self.M}, L={self.L}, "
            f"{len(self.support)} support points)"
        )


def margins(H: FiniteJointDistribution) -> tuple[FiniteCDF, ...]:
    """Per-axis projection CDFs of the joint."""
    out = []
    for axis in range(H.L):
        acc: dict[float, Fraction] = {}
        for p, m in zip(H.support, H.masses):
            acc[p[axis]] = acc.get(p[axis], ZERO) + m
        jumps = sorted(acc)
        cum = []
        running = ZERO
        for y in jumps:
            running += acc[y]
            cum.append(running)
        out.append(FiniteCDF(tuple(jumps), tuple(cum)))
    return tuple(out)


def compose(
    D: DiscreteCopula, margin_cdfs: Sequence[FiniteCDF]
) -> FiniteJointDistribution:
    """Joint distribution with CDF ``D(F_1(y_1), .., F_L(y_L))``.

    Margin ranges must lie in I_M for the copula's M.  Box masses are the
    copula volumes between consecutive margin levels; they are nonnegative
    whenever D is a valid copula, and the inputs come back as the margins of
    the result.
    """
    if len(margin_cdfs) != D.L:
        raise DimensionError(f"need {D.L} margins, got {len(margin_cdfs)}")
    axis_levels = [F.levels(D.M) for F in margin_cdfs]

    if D.tuples is not None:
        # Each permutation cell contributes 1/M to the margin bucket that
        # contains its level on every axis: O(M L) instead of a grid sweep.
        acc: dict[tuple[float, ...], Fraction] = {}
        unit = Fraction(1, D.M)
        for cell in D.tuples:
            point = []
            for axis, c in enumerate(cell):
                levels = axis_levels[axis]
                bucket = next(
                    j for j, lv in enumerate(levels) if c <= lv
                )
                point.append(margin_cdfs[axis].jump_points[bucket])
            key = tuple(point)
            acc[key] = acc.get(key, ZERO) + unit
        return FiniteJointDistribution.from_masses(
            D.M, D.L, list(acc.keys()), list(acc.values())
        )

    support: list[tuple[float, ...]] = []
    masses: list[Fraction] = []
    for picks in itertools.product(*(range(len(lv)) for lv in axis_levels)):
        upper = tuple(axis_levels[a][j] for a, j in enumerate(picks))
        lower = tuple(
            axis_levels[a][j - 1] if j > 0 else 0 for a, j in enumerate(picks)
        )
        mass = volume(D, lower, upper)
        if mass < 0:
            raise DcopError(f"negative box mass {mass}; copula is not valid")
        if mass != 0:
            support.append(
                tuple(margin_cdfs[a].jump_points[j] for a, j in enumerate(picks))
            )
            masses.append(mass)
    return FiniteJointDistribution.from_masses(D.M, D.L, support, masses)


def subcopula_of(H: FiniteJointDistribution) -> DiscreteSubcopula:
    """Subcopula induced by the joint on the margin-range grids.

    Well-defined because H takes the same value at any points the margins
    map to the same levels.  Margin ranges must lie in I_M; the values are
    in I_M too (an irreducible subcopula) exactly when the joint's masses
    sit on the 1/M lattice.
    """
    margin_cdfs = margins(H)
    grids = []
    reps = []
    for F in margin_cdfs:
        levels = (0,) + F.levels(H.M)
        grids.append(levels)
        reps.append({lv: F.quantile_point(lv, H.M) for lv in levels})
    values: dict[MultiIndex, Fraction] = {}
    for idx in itertools.product(*grids):
        point = tuple(reps[a][lv] for a, lv in enumerate(idx))
        values[idx] = H.cdf(point)
    return DiscreteSubcopula(H.M, H.L, tuple(grids), values)


def decompose(
    H: FiniteJointDistribution,
) -> tuple[DiscreteCopula, tuple[FiniteCDF, ...]]:
    """Margins plus an irreducible copula composing back to H exactly.

    The copula is the canonical extension of the induced subcopula; off the
    subcopula grids it is one admissible choice, unique only when all margins
    have full range I_M.
    """
    if not H.on_lattice():
        raise DcopError(
            f"joint masses are not multiples of 1/{H.M}; "
            "no irreducible copula can reproduce this joint"
        )
    return extend(subcopula_of(H)), margins(H)


def uniform_joint(points: Sequence[Sequence[float]], M: int | None = None) -> FiniteJointDistribution:
    """Joint putting mass 1/n on each of n distinct points (n = M unless given)."""
    pts = [tuple(float(c) for c in p) for p in points]
    if not pts:
        raise DimensionError("need at least one point")
    n = len(pts)
    return FiniteJointDistribution.from_masses(
        M if M is not None else n, len(pts[0]), pts, [Fraction(1, n)] * n
    )
