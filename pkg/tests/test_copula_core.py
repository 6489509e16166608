"""Axioms, volume operator and copula/array conversions."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from dcop import (
    BudgetError,
    DimensionError,
    DiscreteCopula,
    StochasticArray,
    array_to_copula,
    copula_to_array,
    is_irreducible,
    permutation_tuples,
    reference_copula,
    validate_array,
    validate_copula,
    volume,
)
from dcop.golden import table1_copula, table2_array

from gen import random_sparse_copula, random_stochastic_array

F = Fraction


def boxes_volume_2d(values, i1, i2):
    """Independent oracle: explicit four-corner differencing for L=2 cells."""
    return (
        values[(i1, i2)]
        - values[(i1 - 1, i2)]
        - values[(i1, i2 - 1)]
        + values[(i1 - 1, i2 - 1)]
    )


class TestValidateCopula:
    def test_table1_passes(self):
        report = validate_copula(table1_copula())
        assert report.passed
        assert report.violations == ()

    def test_margin_violation_reported(self):
        # M=1 grid with D(1,1) = 0.9: the corner must equal 1.
        values = {(0, 0): F(0), (0, 1): F(0), (1, 0): F(0), (1, 1): F(9, 10)}
        report = validate_copula(DiscreteCopula.dense(1, 2, values))
        assert not report.passed
        assert ("D2", (1, 1), F(9, 10)) in report.violations

    def test_negative_cell_volumes_reported(self):
        # Correct margins but D(1/2,1/2) = 1; oracle: difference all 4 cells.
        values = {
            (0, 0): F(0), (0, 1): F(0), (0, 2): F(0),
            (1, 0): F(0), (1, 1): F(1), (1, 2): F(1, 2),
            (2, 0): F(0), (2, 1): F(1, 2), (2, 2): F(1),
        }
        cells = {
            (i1, i2): boxes_volume_2d(values, i1, i2)
            for i1 in (1, 2)
            for i2 in (1, 2)
        }
        assert cells == {
            (1, 1): F(1),
            (1, 2): F(-1, 2),
            (2, 1): F(-1, 2),
            (2, 2): F(1),
        }
        report = validate_copula(DiscreteCopula.dense(2, 2, values))
        bad = {(v.where, v.value) for v in report.violations if v.axiom == "D3"}
        assert bad == {((1, 2), F(-1, 2)), ((2, 1), F(-1, 2))}

    def test_sparse_permutation_check(self):
        good = DiscreteCopula.sparse(3, 2, [(1, 1), (2, 2), (3, 3)])
        assert validate_copula(good).passed
        bad = DiscreteCopula.sparse(3, 2, [(1, 1), (2, 1), (3, 3)])
        report = validate_copula(bad)
        assert not report.passed
        assert any(v.axiom == "D2" for v in report.violations)


class TestValidateArray:
    def test_table2_passes(self):
        assert validate_array(table2_array()).passed

    def test_all_zero_array_violates_every_line(self):
        report = validate_array(StochasticArray.from_entries(3, 2, {}))
        assert not report.passed
        lines = {v.where for v in report.violations if v.axiom == "A2"}
        assert lines == {(axis, level) for axis in range(2) for level in (1, 2, 3)}

    def test_uniform_array_passes(self):
        M, L = 3, 3
        entries = {
            idx: F(1, M ** (L - 1))
            for idx in itertools.product(range(1, M + 1), repeat=L)
        }
        assert validate_array(StochasticArray.from_entries(M, L, entries)).passed

    def test_negative_entry_is_a1(self):
        entries = {(1, 1): F(-1, 2), (1, 2): F(3, 2), (2, 1): F(3, 2), (2, 2): F(-1, 2)}
        report = validate_array(StochasticArray.from_entries(2, 2, entries))
        assert any(v.axiom == "A1" for v in report.violations)


class TestVolume:
    def test_table1_unit_cell(self):
        assert volume(table1_copula(), (0, 0, 0), (1, 1, 1)) == F(1, 12)

    def test_degenerate_box_is_zero(self):
        assert volume(table1_copula(), (1, 2, 1), (1, 2, 1)) == 0

    def test_total_mass_is_one(self):
        assert volume(table1_copula(), (0, 0, 0), (3, 3, 3)) == 1

    def test_corner_out_of_range(self):
        with pytest.raises(DimensionError):
            volume(table1_copula(), (0, 0, 0), (4, 3, 3))
        with pytest.raises(DimensionError):
            volume(table1_copula(), (2, 0, 0), (1, 3, 3))


class TestConversions:
    def test_table2_to_table1(self):
        assert array_to_copula(table2_array()) == table1_copula()

    def test_table1_to_table2(self):
        arr = copula_to_array(table1_copula())
        assert arr == table2_array()
        assert arr.entry((1, 1, 1)) == F(1, 4)

    def test_uniform_array_gives_product_copula(self):
        M, L = 3, 2
        entries = {
            idx: F(1, M ** (L - 1))
            for idx in itertools.product(range(1, M + 1), repeat=L)
        }
        copula = array_to_copula(StochasticArray.from_entries(M, L, entries))
        assert copula == reference_copula("product", M, L)

    def test_identity_array_gives_comonotonicity(self):
        arr = StochasticArray.from_entries(4, 3, {(i, i, i): 1 for i in range(1, 5)})
        assert array_to_copula(arr) == reference_copula("comonotonicity", 4, 3)

    def test_product_copula_array_is_uniform(self):
        arr = copula_to_array(reference_copula("product", 2, 2))
        assert all(v == F(1, 2) for v in arr.entries.values())
        assert len(arr.entries) == 4

    def test_comonotonicity_array_is_identity(self):
        arr = copula_to_array(reference_copula("comonotonicity", 3, 2))
        assert dict(arr.entries) == {(1, 1): 1, (2, 2): 1, (3, 3): 1}

    def test_invalid_array_rejected(self):
        from dcop import ValidationFailure

        with pytest.raises(ValidationFailure):
            array_to_copula(StochasticArray.from_entries(2, 2, {(1, 1): 1}))

    def test_invalid_copula_rejected(self):
        from dcop import ValidationFailure

        values = {(0, 0): F(0), (0, 1): F(0), (1, 0): F(0), (1, 1): F(1, 2)}
        with pytest.raises(ValidationFailure):
            copula_to_array(DiscreteCopula.dense(1, 2, values))


class TestRoundTrips:
    def test_array_round_trip_random(self):
        rng = np.random.default_rng(1001)
        for _ in range(60):
            M = int(rng.integers(1, 9))
            L = int(rng.integers(2, 5))
            arr = random_stochastic_array(rng, M, L)
            copula = array_to_copula(arr)
            assert validate_copula(copula).passed
            assert copula_to_array(copula) == arr

    def test_copula_round_trip_sparse(self):
        rng = np.random.default_rng(1002)
        for _ in range(40):
            M = int(rng.integers(1, 9))
            L = int(rng.integers(2, 4))
            copula = random_sparse_copula(rng, M, L)
            assert array_to_copula(copula_to_array(copula)) == copula

    def test_dense_sparse_cross_equality(self):
        rng = np.random.default_rng(1003)
        copula = random_sparse_copula(rng, 5, 3)
        assert copula.to_dense() == copula
        assert copula.to_dense().to_sparse() == copula

    def test_scaled_volume_equals_array_entry(self):
        arr = table2_array()
        copula = table1_copula()
        for idx in itertools.product(range(1, 4), repeat=3):
            lower = tuple(c - 1 for c in idx)
            assert 3 * volume(copula, lower, idx) == arr.entry(idx)

    def test_partial_line_sums_hit_margins(self):
        # Summing entries over all axes but one, up to a level, recovers
        # M * D(1,..,level/M,..,1) = level.
        arr = table2_array()
        copula = table1_copula()
        M, L = arr.M, arr.L
        for axis in range(L):
            for level in range(1, M + 1):
                s = sum(
                    v for idx, v in arr.entries.items() if idx[axis] <= level
                )
                point = tuple(level if a == axis else M for a in range(L))
                assert s == M * copula.value(point) == level

    def test_values_monotone_along_axes(self):
        copula = table1_copula()
        for idx in copula.grid():
            for axis in range(copula.L):
                if idx[axis] < copula.M:
                    nxt = idx[:axis] + (idx[axis] + 1,) + idx[axis + 1 :]
                    assert copula.value(nxt) >= copula.value(idx)


class TestIrreducibility:
    def test_table1_not_irreducible(self):
        assert table1_copula().value((1, 1, 1)) == F(1, 12)
        assert not is_irreducible(table1_copula())

    def test_comonotonicity_irreducible(self):
        assert is_irreducible(reference_copula("comonotonicity", 5, 3))

    def test_product_not_irreducible(self):
        copula = reference_copula("product", 2, 2)
        assert copula.value((1, 1)) == F(1, 4)
        assert not is_irreducible(copula)

    def test_equivalence_with_zero_one_arrays(self):
        rng = np.random.default_rng(1004)
        for _ in range(40):
            M = int(rng.integers(2, 9))
            L = int(rng.integers(2, 5))
            arr = random_stochastic_array(rng, M, L)
            copula = array_to_copula(arr).to_dense()
            zero_one = all(v in (0, 1) for v in arr.entries.values())
            assert is_irreducible(copula) == zero_one


class TestReferenceCopulas:
    def test_product_values(self):
        assert reference_copula("product", 3, 2).value((1, 2)) == F(2, 9)

    def test_comonotonicity_values(self):
        assert reference_copula("comonotonicity", 3, 3).value((1, 2, 3)) == F(1, 3)

    def test_both_validate(self):
        assert validate_copula(reference_copula("product", 4, 3)).passed
        assert validate_copula(reference_copula("comonotonicity", 4, 3)).passed

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            reference_copula("gaussian", 3, 2)


class TestPermutationTuples:
    def test_identity(self):
        arr = StochasticArray.from_entries(3, 2, {(i, i): 1 for i in range(1, 4)})
        assert permutation_tuples(arr) == {(1, 1), (2, 2), (3, 3)}

    def test_non_zero_one_rejected(self):
        with pytest.raises(ValueError):
            permutation_tuples(table2_array())

    def test_projections_cover_all_levels(self):
        rng = np.random.default_rng(1005)
        from gen import random_permutation_array

        for _ in range(20):
            M = int(rng.integers(1, 9))
            L = int(rng.integers(2, 5))
            cells = permutation_tuples(random_permutation_array(rng, M, L))
            for axis in range(L):
                assert {c[axis] for c in cells} == set(range(1, M + 1))


class TestConstruction:
    def test_budget_exceeded(self):
        with pytest.raises(BudgetError):
            DiscreteCopula.dense(100, 4, {})

    def test_missing_grid_values(self):
        with pytest.raises(DimensionError):
            DiscreteCopula.dense(1, 2, {(0, 0): F(0)})

    def test_float_values_rejected(self):
        with pytest.raises(TypeError):
            DiscreteCopula.dense(1, 2, {idx: 0.5 for idx in itertools.product(range(2), repeat=2)})

    def test_out_of_range_cells(self):
        with pytest.raises(DimensionError):
            StochasticArray.from_entries(2, 2, {(0, 1): 1})
        with pytest.raises(DimensionError):
            DiscreteCopula.sparse(2, 2, [(1, 3)])
