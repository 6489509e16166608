"""Rank-reordering ensemble postprocessing: ECC-style and record-driven.

The pipeline: fit a univariate predictive distribution per margin (a light
gaussian regression against the ensemble mean/variance, or an empirical
passthrough), draw the M equally spaced quantiles, then reorder each
margin's quantiles so the output reproduces a reference rank structure:

* ``ecc`` reuses the raw ensemble's own per-margin ranks, so raw and output
  share the same empirical copula (and hence all Spearman coefficients);
* ``schaake_shuffle`` takes the ranks from a historical observation record
  instead, and its output size N is independent of the ensemble size;
* ``individually_postprocessed`` is the no-reordering baseline: margins are
  shuffled independently, which destroys the dependence structure.

Everything is keyed by (seed, margin id): parallel and serial margin
processing produce bit-identical output.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.stats import norm

from .empirical import (
    TiePolicy,
    label_rng,
    ranks,
    spearman_from_ranks,
)
from .errors import DcopError, DimensionError

SIGMA2_FLOOR = 1e-8


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class EnsembleForecast:
    """M members by L margins of real values, margins labeled."""

    members: np.ndarray
    margin_ids: tuple[str, ...]

    def __init__(self, members, margin_ids):
        arr = _readonly(np.asarray(members, dtype=float))
        if arr.ndim != 2:
            raise DimensionError("members must be a 2-d array (members x margins)")
        ids = tuple(margin_ids)
        if len(ids) != arr.shape[1]:
            raise DimensionError(
                f"{arr.shape[1]} margins but {len(ids)} margin ids"
            )
        object.__setattr__(self, "members", arr)
        object.__setattr__(self, "margin_ids", ids)

    @property
    def size(self) -> int:
        return self.members.shape[0]

    @property
    def dim(self) -> int:
        return self.members.shape[1]

    def margin(self, axis: int) -> np.ndarray:
        return self.members[:, axis]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EnsembleForecast):
            return NotImplemented
        return self.margin_ids == other.margin_ids and np.array_equal(
            self.members, other.members
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"EnsembleForecast({self.size} members x {self.dim} margins)"


@dataclass(frozen=True)
class PredictiveDistribution:
    """Nondecreasing quantile function with a provenance tag.

    ``gaussian`` evaluates the normal quantile at (mu, sigma); ``empirical``
    and ``passthrough`` use the left-continuous generalized inverse
    q(p) = min{x : F(x) >= p} of the step CDF of the stored values
    (passthrough marks raw-margin provenance).
    """

    kind: str
    mu: float | None = None
    sigma: float | None = None
    values: tuple[float, ...] | None = None

    @classmethod
    def gaussian(cls, mu: float, sigma: float) -> "PredictiveDistribution":
        if not sigma > 0:
            raise DimensionError(f"sigma must be positive, got {sigma}")
        return cls(kind="gaussian", mu=float(mu), sigma=float(sigma))

    @classmethod
    def empirical(cls, values: Sequence[float]) -> "PredictiveDistribution":
        return cls(kind="empirical", values=tuple(sorted(float(v) for v in values)))

    @classmethod
    def passthrough(cls, values: Sequence[float]) -> "PredictiveDistribution":
        return cls(kind="passthrough", values=tuple(sorted(float(v) for v in values)))

    def quantile(self, p: float) -> float:
        if not 0.0 < p < 1.0:
            raise DimensionError(f"quantile level must be in (0,1), got {p}")
        if self.kind == "gaussian":
            return float(norm.ppf(p, loc=self.mu, scale=self.sigma))
        assert self.values is not None
        n = len(self.values)
        # F(values[k-1]) = k/n; the generalized inverse picks the first k
        # with k/n >= p, i.e. k = ceil(n p).
        k = int(np.ceil(n * p))
        return self.values[max(k, 1) - 1]


@dataclass(frozen=True)
class EmosCoefficients:
    """Fitted mean/variance regression; apply to a member vector to predict."""

    a: float
    b: float
    c: float
    d: float

    def predictive(self, members: Sequence[float]) -> PredictiveDistribution:
        x = np.asarray(members, dtype=float)
        mu = self.a + self.b * float(np.mean(x))
        var = self.c + self.d * float(np.var(x, ddof=1)) if x.size > 1 else self.c
        sigma = float(np.sqrt(max(var, SIGMA2_FLOOR)))
        return PredictiveDistribution.gaussian(mu, sigma)


@dataclass(frozen=True, eq=False)
class TrainingSet:
    """Dated (forecast, observation) pairs sharing one margin layout."""

    dates: tuple[str, ...]
    members: np.ndarray  # (dates, members, margins)
    observations: np.ndarray  # (dates, margins)
    margin_ids: tuple[str, ...]

    def __init__(self, dates, members, observations, margin_ids):
        mem = _readonly(np.asarray(members, dtype=float))
        obs = _readonly(np.asarray(observations, dtype=float))
        ids = tuple(margin_ids)
        dts = tuple(str(d) for d in dates)
        if mem.ndim != 3 or obs.ndim != 2:
            raise DimensionError("members must be 3-d and observations 2-d")
        if mem.shape[0] != len(dts) or obs.shape[0] != len(dts):
            raise DimensionError("dates, members and observations disagree in length")
        if mem.shape[2] != len(ids) or obs.shape[1] != len(ids):
            raise DimensionError("margin count mismatch")
        object.__setattr__(self, "dates", dts)
        object.__setattr__(self, "members", mem)
        object.__setattr__(self, "observations", obs)
        object.__setattr__(self, "margin_ids", ids)

    @property
    def size(self) -> int:
        return len(self.dates)

    def margin_index(self, margin: str) -> int:
        try:
            return self.margin_ids.index(margin)
        except ValueError:
            raise DimensionError(f"unknown margin {margin!r}") from None

    def latest_forecast(self) -> EnsembleForecast:
        return EnsembleForecast(self.members[-1], self.margin_ids)


@dataclass(frozen=True, eq=False)
class HistoricalRecord:
    """N observation vectors over shared verification dates."""

    dates: tuple[str, ...]
    observations: np.ndarray  # (dates, margins)
    margin_ids: tuple[str, ...]

    def __init__(self, dates, observations, margin_ids):
        obs = _readonly(np.asarray(observations, dtype=float))
        ids = tuple(margin_ids)
        dts = tuple(str(d) for d in dates)
        if obs.ndim != 2 or obs.shape[0] != len(dts) or obs.shape[1] != len(ids):
            raise DimensionError("observations must be (dates x margins)")
        object.__setattr__(self, "dates", dts)
        object.__setattr__(self, "observations", obs)
        object.__setattr__(self, "margin_ids", ids)

    @property
    def size(self) -> int:
        return len(self.dates)

    def margin(self, axis: int) -> np.ndarray:
        return self.observations[:, axis]


@dataclass(frozen=True, eq=False)
class DependenceReport:
    """Comparison of two equally sized ensembles' dependence structure."""

    copulas_equal: bool
    spearman_raw: np.ndarray
    spearman_out: np.ndarray
    max_abs_spearman_diff: float
    margin_multiset_equal: bool

    def lines(self) -> list[str]:
        return [
            f"copulas_equal,{str(self.copulas_equal).lower()}",
            f"max_abs_spearman_diff,{self.max_abs_spearman_diff!r}",
            f"margin_multiset_equal,{str(self.margin_multiset_equal).lower()}",
        ]


# ---------------------------------------------------------------------------
# Fitting and sampling
# ---------------------------------------------------------------------------


def fit_emoslite(train: TrainingSet, margin: str) -> EmosCoefficients:
    """Least-squares mean and spread regression for one margin.

    The predictive mean is ``a + b * ensemble mean`` and the predictive
    variance ``max(c + d * ensemble variance, floor)`` with d clipped at 0.
    Degenerate regressors fall back to a bias correction with the residual
    standard deviation.
    """
    if train.size < 5:
        raise DimensionError(f"need at least 5 training pairs, got {train.size}")
    j = train.margin_index(margin)
    means = train.members[:, :, j].mean(axis=1)
    variances = train.members[:, :, j].var(axis=1, ddof=1)
    obs = train.observations[:, j]

    if np.ptp(means) == 0.0:
        # Degenerate regressor: bias correction with residual spread only.
        b = 1.0
        a = float(np.mean(obs - means))
        sq = (obs - (a + b * means)) ** 2
        return EmosCoefficients(a=a, b=b, c=float(np.mean(sq)), d=0.0)

    b, a = (float(v) for v in np.polyfit(means, obs, 1))
    sq = (obs - (a + b * means)) ** 2
    if np.ptp(variances) == 0.0:
        d = 0.0
    else:
        d = max(float(np.polyfit(variances, sq, 1)[0]), 0.0)
    c = float(np.mean(sq) - d * np.mean(variances))
    return EmosCoefficients(a=a, b=b, c=c, d=d)


def quantize(dist: PredictiveDistribution, M: int) -> np.ndarray:
    """The M equally spaced quantiles q(1/(M+1)), ..., q(M/(M+1))."""
    if M < 1:
        raise DimensionError(f"need M >= 1, got {M}")
    return np.array([dist.quantile(m / (M + 1)) for m in range(1, M + 1)])


# ---------------------------------------------------------------------------
# Reordering
# ---------------------------------------------------------------------------


def _check_samples(samples: Sequence[Sequence[float]], n: int, L: int) -> list[np.ndarray]:
    if len(samples) != L:
        raise DimensionError(f"need {L} per-margin samples, got {len(samples)}")
    out = []
    for axis, s in enumerate(samples):
        arr = np.asarray(s, dtype=float)
        if arr.shape != (n,):
            raise DimensionError(f"sample for margin {axis} must have length {n}")
        if np.any(np.diff(arr) < 0):
            raise DimensionError(f"sample for margin {axis} must be sorted")
        out.append(arr)
    return out


def _margin_map(
    fn: Callable[[int], np.ndarray], L: int, max_workers: int | None
) -> list[np.ndarray]:
    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(fn, range(L)))
    return [fn(axis) for axis in range(L)]


def ecc(
    raw: EnsembleForecast,
    samples: Sequence[Sequence[float]],
    policy: TiePolicy,
    max_workers: int | None = None,
) -> EnsembleForecast:
    """Reorder per-margin samples by the raw ensemble's rank vectors.

    Member m receives the sigma_l(m)-th order statistic of the l-th sample,
    where sigma_l ranks the raw margin; the output therefore keeps the raw
    rank dependence while its margins become the samples.
    """
    cols = _check_samples(samples, raw.size, raw.dim)

    def reorder(axis: int) -> np.ndarray:
        sigma = ranks(raw.margin(axis), policy, raw.margin_ids[axis]).ranks
        return cols[axis][np.asarray(sigma) - 1]

    out = _margin_map(reorder, raw.dim, max_workers)
    return EnsembleForecast(np.column_stack(out), raw.margin_ids)


def individually_postprocessed(
    samples: Sequence[Sequence[float]],
    margin_ids: Sequence[str],
    seed: int,
    max_workers: int | None = None,
) -> EnsembleForecast:
    """Shuffle each margin's sample independently (dependence destroyed).

    The permutation for each margin comes from the (seed, margin id) stream,
    so the result is reproducible and order-independent.
    """
    ids = tuple(margin_ids)
    if not samples:
        raise DimensionError("need at least one margin sample")
    n = len(samples[0])
    cols = _check_samples(samples, n, len(ids))

    def shuffle(axis: int) -> np.ndarray:
        perm = label_rng(seed, ids[axis]).permutation(n)
        return cols[axis][perm]

    out = _margin_map(shuffle, len(ids), max_workers)
    return EnsembleForecast(np.column_stack(out), ids)


def schaake_shuffle(
    hist: HistoricalRecord,
    distributions: Sequence[PredictiveDistribution],
    N: int,
    policy: TiePolicy,
    max_workers: int | None = None,
) -> EnsembleForecast:
    """Reorder N quantiles per margin by the historical record's ranks.

    Output member n receives the rank(o_n)-th order statistic of its
    margin's quantile sample, so the output inherits the record's rank
    dependence; N is set by the record, not by any raw ensemble size.
    """
    if hist.size != N:
        raise DimensionError(f"record has {hist.size} dates, expected N={N}")
    if len(distributions) != len(hist.margin_ids):
        raise DimensionError(
            f"need {len(hist.margin_ids)} distributions, got {len(distributions)}"
        )

    def reorder(axis: int) -> np.ndarray:
        sample = quantize(distributions[axis], N)
        sigma = ranks(hist.margin(axis), policy, hist.margin_ids[axis]).ranks
        return sample[np.asarray(sigma) - 1]

    out = _margin_map(reorder, len(hist.margin_ids), max_workers)
    return EnsembleForecast(np.column_stack(out), hist.margin_ids)


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


def ensemble_rank_matrix(ens: EnsembleForecast, policy: TiePolicy) -> np.ndarray:
    cols = [
        ranks(ens.margin(axis), policy, ens.margin_ids[axis]).ranks
        for axis in range(ens.dim)
    ]
    return np.column_stack(cols)


def ensemble_copula_tuples(ens: EnsembleForecast, policy: TiePolicy) -> frozenset:
    """Permutation cells of the ensemble's empirical copula."""
    rm = ensemble_rank_matrix(ens, policy)
    return frozenset(tuple(int(c) for c in row) for row in rm)


def verify_dependence(
    ref: EnsembleForecast, out: EnsembleForecast, policy: TiePolicy
) -> DependenceReport:
    """Compare empirical copulas, Spearman matrices and margin multisets."""
    if ref.size != out.size or ref.margin_ids != out.margin_ids:
        raise DimensionError("ensembles must share size and margin ids")
    ref_ranks = ensemble_rank_matrix(ref, policy)
    out_ranks = ensemble_rank_matrix(out, policy)
    sp_ref = spearman_from_ranks(ref_ranks)
    sp_out = spearman_from_ranks(out_ranks)
    tuples_ref = frozenset(tuple(int(c) for c in row) for row in ref_ranks)
    tuples_out = frozenset(tuple(int(c) for c in row) for row in out_ranks)
    margins_equal = all(
        np.array_equal(np.sort(ref.margin(axis)), np.sort(out.margin(axis)))
        for axis in range(ref.dim)
    )
    return DependenceReport(
        copulas_equal=tuples_ref == tuples_out,
        spearman_raw=sp_ref,
        spearman_out=sp_out,
        max_abs_spearman_diff=float(np.max(np.abs(sp_ref - sp_out))),
        margin_multiset_equal=margins_equal,
    )
