"""Subcopula validation, block counts and the constructive extension."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from dcop import (
    DcopError,
    DimensionError,
    DiscreteSubcopula,
    block_counts,
    copula_to_array,
    extend,
    is_irreducible,
    is_irreducible_subcopula,
    reference_copula,
    restrict,
    validate_copula,
    validate_subcopula,
)
from dcop.golden import example4_subcopula, table1_copula

from gen import random_sparse_copula, random_subgrids

F = Fraction


def full_grids(M, L):
    return [list(range(M + 1))] * L


def slab_widths(grid):
    return [grid[s + 1] - grid[s] for s in range(len(grid) - 1)]


def assert_marginal_identity(sub, decomposition):
    """Oracle: counts in every slab of blocks must sum to the slab width."""
    for axis in range(sub.L):
        for s, width in enumerate(slab_widths(sub.grids[axis])):
            total = sum(
                c
                for blocks, c in decomposition.block_counts.items()
                if blocks[axis] == s
            )
            assert total == width


class TestValidate:
    def test_example4_passes(self):
        assert validate_subcopula(example4_subcopula()).passed

    def test_full_grid_restriction_of_copula_passes(self):
        sub = restrict(table1_copula(), full_grids(3, 3))
        assert validate_subcopula(sub).passed

    def test_top_corner_must_be_one(self):
        values = {
            (0, 0): F(0), (0, 2): F(0),
            (2, 0): F(0), (2, 2): F(1, 2),
        }
        sub = DiscreteSubcopula(2, 2, [[0, 2], [0, 2]], values)
        report = validate_subcopula(sub)
        assert not report.passed
        assert any(v.axiom == "S2" and v.where == (2, 2) for v in report.violations)

    def test_groundedness_violation(self):
        values = {
            (0, 0): F(0), (0, 2): F(1, 2),
            (2, 0): F(0), (2, 2): F(1),
        }
        report = validate_subcopula(DiscreteSubcopula(2, 2, [[0, 2], [0, 2]], values))
        assert any(v.axiom == "S1" for v in report.violations)

    def test_negative_box_violation(self):
        # Margins fine but D(1/2,1/2) = 1 makes two adjacent boxes negative.
        values = {
            (0, 0): F(0), (0, 1): F(0), (0, 2): F(0),
            (1, 0): F(0), (1, 1): F(1), (1, 2): F(1, 2),
            (2, 0): F(0), (2, 1): F(1, 2), (2, 2): F(1),
        }
        report = validate_subcopula(
            DiscreteSubcopula(2, 2, [[0, 1, 2], [0, 1, 2]], values)
        )
        bad = {(v.where, v.value) for v in report.violations if v.axiom == "S3"}
        assert bad == {((0, 1), F(-1, 2)), ((1, 0), F(-1, 2))}

    def test_grid_must_contain_endpoints(self):
        with pytest.raises(DimensionError):
            DiscreteSubcopula(3, 2, [[0, 2], [1, 3]], {})
        with pytest.raises(DimensionError):
            DiscreteSubcopula(3, 2, [[0, 2], [0, 2]], {(0, 0): F(0)})


class TestBlockCounts:
    def test_example4_total_is_m(self):
        decomposition = block_counts(example4_subcopula())
        assert decomposition.total() == 3
        assert_marginal_identity(example4_subcopula(), decomposition)

    def test_full_grid_counts_are_array_entries(self):
        rng = np.random.default_rng(3001)
        copula = random_sparse_copula(rng, 6, 2)
        sub = restrict(copula, full_grids(6, 2))
        decomposition = block_counts(sub)
        arr = copula_to_array(copula)
        for blocks, count in decomposition.block_counts.items():
            cell = tuple(b + 1 for b in blocks)
            assert count == arr.entry(cell)

    def test_comonotone_first_block(self):
        for M, L in ((3, 2), (4, 3)):
            sub = restrict(reference_copula("comonotonicity", M, L), [[0, 1, M]] * L)
            decomposition = block_counts(sub)
            assert decomposition.block_counts[(0,) * L] == 1
            assert_marginal_identity(sub, decomposition)

    def test_reducible_subcopula_rejected(self):
        sub = restrict(reference_copula("product", 2, 2), full_grids(2, 2))
        with pytest.raises(DcopError):
            block_counts(sub)


class TestExtend:
    def test_example4_extension(self):
        sub = example4_subcopula()
        copula = extend(sub)
        assert validate_copula(copula).passed
        assert is_irreducible(copula)
        assert restrict(copula, sub.grids) == sub
        assert copula.value((1, 1, 2)) == F(1, 3)

    def test_full_grid_extension_is_identity(self):
        rng = np.random.default_rng(3002)
        for _ in range(10):
            copula = random_sparse_copula(rng, int(rng.integers(2, 9)), 3)
            sub = restrict(copula, full_grids(copula.M, copula.L))
            assert extend(sub) == copula

    def test_restriction_property_random(self):
        rng = np.random.default_rng(3003)
        agrees_fully = 0
        for _ in range(60):
            M = int(rng.integers(2, 9))
            L = int(rng.integers(2, 4))
            copula = random_sparse_copula(rng, M, L)
            grids = random_subgrids(rng, M, L)
            sub = restrict(copula, grids)
            assert_marginal_identity(sub, block_counts(sub))
            extended = extend(sub)
            assert validate_copula(extended).passed
            assert is_irreducible(extended)
            assert restrict(extended, grids) == sub
            if extended == copula:
                agrees_fully += 1
        # The extension is canonical, not unique: it cannot match the
        # original copula in every case.
        assert agrees_fully < 60

    def test_extension_array_is_permutation(self):
        from dcop import permutation_tuples

        sub = example4_subcopula()
        arr = copula_to_array(extend(sub))
        cells = permutation_tuples(arr)
        assert len(cells) == 3

    def test_idempotence(self):
        sub = example4_subcopula()
        once = extend(sub)
        again = extend(restrict(once, sub.grids))
        assert once == again

    def test_rejects_reducible(self):
        sub = restrict(reference_copula("product", 2, 2), full_grids(2, 2))
        with pytest.raises(DcopError):
            extend(sub)

    def test_deterministic(self):
        rng = np.random.default_rng(3004)
        copula = random_sparse_copula(rng, 7, 3)
        grids = random_subgrids(rng, 7, 3)
        sub = restrict(copula, grids)
        assert extend(sub) == extend(sub)


class TestRestrict:
    def test_values_are_copula_values(self):
        copula = table1_copula()
        grids = [[0, 1, 3], [0, 2, 3], [0, 3]]
        sub = restrict(copula, grids)
        for idx in itertools.product(*grids):
            assert sub.value(idx) == copula.value(idx)

    def test_irreducibility_predicate(self):
        assert is_irreducible_subcopula(example4_subcopula())
        assert not is_irreducible_subcopula(
            restrict(table1_copula(), full_grids(3, 3))
        )
