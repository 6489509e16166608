"""Bundled reference objects served by ``dcop demo`` and reused in testing.

Three fixtures live here:

* ``table1`` -- a dense discrete copula on I_3^3 whose range leaves I_3,
* ``table2`` -- the stochastic array of order 3 equivalent to ``table1``,
* ``example4`` -- a worked decomposition scenario: three dependent discrete
  random variables, their joint distribution, margins, and the irreducible
  subcopula the joint induces on the reduced grids.

Values are hard-coded as exact rationals so downstream round-trip checks are
bit-exact.
"""

from __future__ import annotations

from fractions import Fraction

from .copula_core import DiscreteCopula, StochasticArray
from .sklar import FiniteCDF, FiniteJointDistribution
from .subcopula import DiscreteSubcopula

F = Fraction

# D(i1/3, i2/3, i3/3) keyed by (i1, i2, i3); zero whenever any index is 0.
_TABLE1_NONZERO = {
    (1, 1, 1): F(1, 12), (1, 2, 1): F(1, 6), (1, 3, 1): F(1, 6),
    (1, 1, 2): F(1, 12), (1, 2, 2): F(1, 6), (1, 3, 2): F(1, 4),
    (1, 1, 3): F(1, 12), (1, 2, 3): F(1, 6), (1, 3, 3): F(1, 3),
    (2, 1, 1): F(1, 12), (2, 2, 1): F(1, 4), (2, 3, 1): F(1, 4),
    (2, 1, 2): F(1, 6), (2, 2, 2): F(1, 3), (2, 3, 2): F(1, 2),
    (2, 1, 3): F(1, 4), (2, 2, 3): F(5, 12), (2, 3, 3): F(2, 3),
    (3, 1, 1): F(1, 12), (3, 2, 1): F(1, 3), (3, 3, 1): F(1, 3),
    (3, 1, 2): F(1, 4), (3, 2, 2): F(1, 2), (3, 3, 2): F(2, 3),
    (3, 1, 3): F(1, 3), (3, 2, 3): F(2, 3), (3, 3, 3): F(1),
}

# a_{i1 i2 i3}, zero cells omitted.
_TABLE2_ENTRIES = {
    (1, 1, 1): F(1, 4), (1, 2, 1): F(1, 4), (1, 3, 2): F(1, 4), (1, 3, 3): F(1, 4),
    (2, 2, 1): F(1, 4), (2, 1, 2): F(1, 4), (2, 3, 2): F(1, 4), (2, 1, 3): F(1, 4),
    (3, 2, 1): F(1, 4), (3, 1, 2): F(1, 4), (3, 2, 3): F(1, 4), (3, 3, 3): F(1, 4),
}

# The example4 scenario: V1 uniform on {1,2,3}; V2 = 0 if V1 = 1 else 1;
# V3 = 1 if V1 is odd else 2.  Three support points of mass 1/3 each.
_EXAMPLE4_SUPPORT = ((1.0, 0.0, 1.0), (2.0, 1.0, 2.0), (3.0, 1.0, 1.0))

# Subcopula of the example4 joint: grids are the margin ranges scaled by M=3.
_EXAMPLE4_GRIDS = ((0, 1, 2, 3), (0, 1, 3), (0, 2, 3))
_EXAMPLE4_NONZERO = {
    (1, 1, 2): F(1, 3), (1, 3, 2): F(1, 3), (1, 1, 3): F(1, 3), (1, 3, 3): F(1, 3),
    (2, 1, 2): F(1, 3), (2, 3, 2): F(1, 3), (2, 1, 3): F(1, 3), (2, 3, 3): F(2, 3),
    (3, 1, 2): F(1, 3), (3, 3, 2): F(2, 3), (3, 1, 3): F(1, 3), (3, 3, 3): F(1),
}


def table1_copula() -> DiscreteCopula:
    """Dense discrete copula on I_3^3 (contains 1/12, so not irreducible)."""
    values = {}
    for i1 in range(4):
        for i2 in range(4):
            for i3 in range(4):
                idx = (i1, i2, i3)
                values[idx] = _TABLE1_NONZERO.get(idx, F(0))
    return DiscreteCopula.dense(3, 3, values)


def table2_array() -> StochasticArray:
    """Stochastic array of order 3 equivalent to :func:`table1_copula`."""
    return StochasticArray.from_entries(3, 3, _TABLE2_ENTRIES)


def example4_joint() -> FiniteJointDistribution:
    """Joint distribution of the example4 scenario (mass 1/3 per point)."""
    return FiniteJointDistribution.from_masses(
        3, 3, _EXAMPLE4_SUPPORT, (F(1, 3), F(1, 3), F(1, 3))
    )


def example4_margins() -> tuple[FiniteCDF, FiniteCDF, FiniteCDF]:
    """The three marginal CDFs; ranges I_3, {0,1/3,1} and {0,2/3,1}."""
    return (
        FiniteCDF((1.0, 2.0, 3.0), (F(1, 3), F(2, 3), F(1))),
        FiniteCDF((0.0, 1.0), (F(1, 3), F(1))),
        FiniteCDF((1.0, 2.0), (F(2, 3), F(1))),
    )


def example4_subcopula() -> DiscreteSubcopula:
    """Irreducible subcopula induced by the example4 joint on its margin grids."""
    values = {}
    for k1 in _EXAMPLE4_GRIDS[0]:
        for k2 in _EXAMPLE4_GRIDS[1]:
            for k3 in _EXAMPLE4_GRIDS[2]:
                idx = (k1, k2, k3)
                values[idx] = _EXAMPLE4_NONZERO.get(idx, F(0))
    return DiscreteSubcopula(3, 3, _EXAMPLE4_GRIDS, values)
