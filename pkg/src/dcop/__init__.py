"""Discrete copulas on uniform grids and rank-reordering ensemble methods."""

from .copula_core import (
    DENSE_BUDGET,
    DiscreteCopula,
    StochasticArray,
    ValidationReport,
    Violation,
    array_to_copula,
    copula_to_array,
    is_irreducible,
    permutation_tuples,
    reference_copula,
    validate_array,
    validate_copula,
    volume,
)
from .empirical import (
    RankVector,
    SampleSet,
    TiePolicy,
    empirical_copula,
    permutation_array_of,
    ranks,
    sample_from_copula,
    spearman_matrix,
)
from .errors import (
    BudgetError,
    DcopError,
    DimensionError,
    SchemaError,
    TieError,
    ValidationFailure,
)
from .postprocess import (
    DependenceReport,
    EmosCoefficients,
    EnsembleForecast,
    HistoricalRecord,
    PredictiveDistribution,
    TrainingSet,
    ecc,
    fit_emoslite,
    individually_postprocessed,
    quantize,
    schaake_shuffle,
    verify_dependence,
)
from .sklar import (
    FiniteCDF,
    FiniteJointDistribution,
    compose,
    decompose,
    margins,
    subcopula_of,
    uniform_joint,
)
from .subcopula import (
    BlockDecomposition,
    DiscreteSubcopula,
    block_counts,
    extend,
    is_irreducible_subcopula,
    restrict,
    validate_subcopula,
)

__version__ = "0.1.0"

__all__ = [
    "BlockDecomposition",
    "BudgetError",
    "DENSE_BUDGET",
    "DcopError",
    "DependenceReport",
    "DimensionError",
    "DiscreteCopula",
    "DiscreteSubcopula",
    "EmosCoefficients",
    "EnsembleForecast",
    "FiniteCDF",
    "FiniteJointDistribution",
    "HistoricalRecord",
    "PredictiveDistribution",
    "RankVector",
    "SampleSet",
    "SchemaError",
    "StochasticArray",
    "TieError",
    "TiePolicy",
    "TrainingSet",
    "ValidationFailure",
    "ValidationReport",
    "Violation",
    "array_to_copula",
    "block_counts",
    "compose",
    "copula_to_array",
    "decompose",
    "ecc",
    "empirical_copula",
    "extend",
    "fit_emoslite",
    "individually_postprocessed",
    "is_irreducible",
    "is_irreducible_subcopula",
    "margins",
    "permutation_array_of",
    "permutation_tuples",
    "quantize",
    "ranks",
    "reference_copula",
    "restrict",
    "sample_from_copula",
    "schaake_shuffle",
    "spearman_matrix",
    "subcopula_of",
    "uniform_joint",
    "validate_array",
    "validate_copula",
    "validate_subcopula",
    "verify_dependence",
    "volume",
]
