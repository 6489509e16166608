"""Serialization: JSON documents for grid objects, CSV for ensembles.

Rationals travel as ``"p/q"`` strings in lowest terms, never as floats, so
saved documents round-trip bit-exactly.  ``save`` emits a canonical form
(sorted keys, sorted index lists, trailing newline): saving the same object
twice yields identical bytes.

Document kinds: ``copula`` (dense, full grid), ``copula-sparse``
(permutation cells), ``array`` (nonzero entries), ``subcopula`` (per-axis
grids plus full product-grid values), ``joint`` (support plus masses) and
``ensemble`` (CSV, header ``member,<id>,..``).

CSV side formats: a training table (``date,member,<ids>`` where ``member``
is 1..M or the literal ``obs``) and a historical record (``date,<ids>``).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import golden
from .copula_core import DiscreteCopula, StochasticArray
from .errors import SchemaError
from .postprocess import EnsembleForecast, HistoricalRecord, TrainingSet
from .sklar import FiniteJointDistribution
from .subcopula import DiscreteSubcopula

KINDS = ("copula", "copula-sparse", "array", "subcopula", "joint", "ensemble")


@dataclass(frozen=True)
class Document:
    """A typed payload as read from or written to disk."""

    kind: str
    payload: object

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown document kind {self.kind!r}")


def parse_rational(text: str, where: str = "rational") -> Fraction:
    """Parse a ``p/q`` string; q must be a positive integer."""
    if not isinstance(text, str):
        raise SchemaError(f"{where}: expected 'p/q' string, got {type(text).__name__}")
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise SchemaError(f"{where}: malformed rational {text!r}") from None
    if q <= 0:
        raise SchemaError(f"{where}: denominator must be positive in {text!r}")
    return Fraction(p, q)


def format_rational(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _parse_index(text: str, where: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except (ValueError, AttributeError):
        raise SchemaError(f"{where}: malformed index {text!r}") from None


def _format_index(idx: Sequence[int]) -> str:
    return ",".join(str(i) for i in idx)


def _need(obj: dict, field: str, kind: str):
    if field not in obj:
        raise SchemaError(f"{kind} document is missing required field {field!r}")
    return obj[field]


def _int_field(obj: dict, field: str, kind: str) -> int:
    v = _need(obj, field, kind)
    if not isinstance(v, int) or isinstance(v, bool):
        raise SchemaError(f"{kind}.{field} must be an integer, got {v!r}")
    return v


# ---------------------------------------------------------------------------
# JSON encode/decode per kind
# ---------------------------------------------------------------------------


def _encode(doc: Document) -> dict:
    kind, payload = doc.kind, doc.payload
    if kind == "copula":
        assert isinstance(payload, DiscreteCopula) and payload.values is not None
        return {
            "kind": kind,
            "M": payload.M,
            "L": payload.L,
            "values": [
                [_format_index(idx), format_rational(payload.values[idx])]
                for idx in sorted(payload.values)
            ],
        }
    if kind == "copula-sparse":
        assert isinstance(payload, DiscreteCopula) and payload.tuples is not None
        return {
            "kind": kind,
            "M": payload.M,
            "L": payload.L,
            "tuples": [list(t) for t in sorted(payload.tuples)],
        }
    if kind == "array":
        assert isinstance(payload, StochasticArray)
        return {
            "kind": kind,
            "M": payload.M,
            "L": payload.L,
            "entries": [
                [_format_index(idx), format_rational(payload.entries[idx])]
                for idx in sorted(payload.entries)
            ],
        }
    if kind == "subcopula":
        assert isinstance(payload, DiscreteSubcopula)
        return {
            "kind": kind,
            "M": payload.M,
            "L": payload.L,
            "grids": [list(g) for g in payload.grids],
            "values": [
                [_format_index(idx), format_rational(payload.values[idx])]
                for idx in sorted(payload.values)
            ],
        }
    if kind == "joint":
        assert isinstance(payload, FiniteJointDistribution)
        return {
            "kind": kind,
            "M": payload.M,
            "L": payload.L,
            "support": [list(p) for p in payload.support],
            "masses": [format_rational(m) for m in payload.masses],
        }
    raise SchemaError(f"kind {kind!r} is not JSON-encodable")


def _decode(obj: object) -> Document:
    if not isinstance(obj, dict):
        raise SchemaError("top-level JSON value must be an object")
    kind = _need(obj, "kind", "document")
    if kind not in KINDS or kind == "ensemble":
        raise SchemaError(f"unknown document kind {kind!r}")
    M = _int_field(obj, "M", kind)
    L = _int_field(obj, "L", kind)

    if kind == "copula":
        raw = _need(obj, "values", kind)
        values = {}
        for pos, pair in enumerate(raw):
            where = f"values[{pos}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise SchemaError(f"{where}: expected [index, rational] pair")
            values[_parse_index(pair[0], where)] = parse_rational(pair[1], where)
        return Document(kind, DiscreteCopula.dense(M, L, values))
    if kind == "copula-sparse":
        raw = _need(obj, "tuples", kind)
        cells = []
        for pos, t in enumerate(raw):
            if not isinstance(t, list) or not all(isinstance(c, int) for c in t):
                raise SchemaError(f"tuples[{pos}]: expected a list of integers")
            cells.append(tuple(t))
        return Document(kind, DiscreteCopula.sparse(M, L, cells))
    if kind == "array":
        raw = _need(obj, "entries", kind)
        entries = {}
        for pos, pair in enumerate(raw):
            where = f"entries[{pos}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise SchemaError(f"{where}: expected [index, rational] pair")
            entries[_parse_index(pair[0], where)] = parse_rational(pair[1], where)
        return Document(kind, StochasticArray.from_entries(M, L, entries))
    if kind == "subcopula":
        grids = _need(obj, "grids", kind)
        raw = _need(obj, "values", kind)
        if not isinstance(grids, list) or not all(isinstance(g, list) for g in grids):
            raise SchemaError("subcopula.grids must be a list of integer lists")
        values = {}
        for pos, pair in enumerate(raw):
            where = f"values[{pos}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise SchemaError(f"{where}: expected [index, rational] pair")
            values[_parse_index(pair[0], where)] = parse_rational(pair[1], where)
        return Document(
            kind, DiscreteSubcopula(M, L, tuple(tuple(g) for g in grids), values)
        )
    # joint
    support = _need(obj, "support", kind)
    raw_masses = _need(obj, "masses", kind)
    if not isinstance(support, list) or not isinstance(raw_masses, list):
        raise SchemaError("joint.support and joint.masses must be lists")
    masses = [parse_rational(m, f"masses[{pos}]") for pos, m in enumerate(raw_masses)]
    return Document(
        kind, FiniteJointDistribution.from_masses(M, L, support, masses)
    )


def dumps(doc: Document) -> str:
    """Canonical JSON text (ensemble documents serialize as CSV instead)."""
    if doc.kind == "ensemble":
        return dumps_ensemble_csv(doc.payload)  # type: ignore[arg-type]
    return json.dumps(_encode(doc), sort_keys=True, indent=2) + "\n"


def load(path: str | Path) -> Document:
    """Load a document; ``.csv`` means ensemble, anything else JSON."""
    p = Path(path)
    text = p.read_text()
    if p.suffix.lower() == ".csv":
        return Document("ensemble", parse_ensemble_csv(text))
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{p}: not valid JSON ({e})") from None
    return _decode(obj)


def save(doc: Document, path: str | Path) -> None:
    Path(path).write_text(dumps(doc))


def emit_golden(name: str) -> Document:
    """Bundled reference documents, by name.

    ``table1``: dense copula; ``table2``: its stochastic array; ``example4``:
    the worked subcopula; ``example4-extension``: its canonical extension;
    ``example4-joint``: the underlying joint distribution.
    """
    from .subcopula import extend

    if name == "table1":
        return Document("copula", golden.table1_copula())
    if name == "table2":
        return Document("array", golden.table2_array())
    if name == "example4":
        return Document("subcopula", golden.example4_subcopula())
    if name == "example4-extension":
        return Document("copula-sparse", extend(golden.example4_subcopula()))
    if name == "example4-joint":
        return Document("joint", golden.example4_joint())
    raise SchemaError(f"unknown golden object {name!r}")


# ---------------------------------------------------------------------------
# CSV formats
# ---------------------------------------------------------------------------


def parse_ensemble_csv(text: str) -> EnsembleForecast:
    rows = list(csv.reader(text.splitlines()))
    if not rows or not rows[0] or rows[0][0] != "member":
        raise SchemaError("ensemble CSV must start with header 'member,<id>,..'")
    ids = rows[0][1:]
    if not ids:
        raise SchemaError("ensemble CSV declares no margins")
    members = []
    for pos, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(ids) + 1:
            raise SchemaError(f"ensemble CSV line {pos}: expected {len(ids) + 1} fields")
        try:
            members.append([float(v) for v in row[1:]])
        except ValueError:
            raise SchemaError(f"ensemble CSV line {pos}: non-numeric value") from None
    if not members:
        raise SchemaError("ensemble CSV has no member rows")
    return EnsembleForecast(np.array(members), ids)


def dumps_ensemble_csv(ens: EnsembleForecast) -> str:
    lines = ["member," + ",".join(ens.margin_ids)]
    for m in range(ens.size):
        lines.append(
            f"{m + 1}," + ",".join(repr(float(v)) for v in ens.members[m])
        )
    return "\n".join(lines) + "\n"


def parse_training_csv(text: str) -> TrainingSet:
    rows = list(csv.reader(text.splitlines()))
    if not rows or rows[0][:2] != ["date", "member"]:
        raise SchemaError("training CSV must start with header 'date,member,<id>,..'")
    ids = rows[0][2:]
    if not ids:
        raise SchemaError("training CSV declares no margins")
    by_date: dict[str, dict[str, list[float]]] = {}
    order: list[str] = []
    for pos, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(ids) + 2:
            raise SchemaError(f"training CSV line {pos}: expected {len(ids) + 2} fields")
        date, member = row[0], row[1]
        try:
            vals = [float(v) for v in row[2:]]
        except ValueError:
            raise SchemaError(f"training CSV line {pos}: non-numeric value") from None
        if date not in by_date:
            by_date[date] = {}
            order.append(date)
        if member in by_date[date]:
            raise SchemaError(f"training CSV line {pos}: duplicate row {date}/{member}")
        by_date[date][member] = vals
    members, observations = [], []
    m_count = None
    for date in order:
        rows_for_date = by_date[date]
        if "obs" not in rows_for_date:
            raise SchemaError(f"training CSV: date {date} has no 'obs' row")
        member_keys = sorted(
            (k for k in rows_for_date if k != "obs"),
            key=lambda k: int(k),
        )
        if m_count is None:
            m_count = len(member_keys)
        if len(member_keys) != m_count or m_count == 0:
            raise SchemaError(f"training CSV: date {date} has an inconsistent member count")
        members.append([rows_for_date[k] for k in member_keys])
        observations.append(rows_for_date["obs"])
    return TrainingSet(order, np.array(members), np.array(observations), ids)


def dumps_training_csv(train: TrainingSet) -> str:
    lines = ["date,member," + ",".join(train.margin_ids)]
    for t, date in enumerate(train.dates):
        for m in range(train.members.shape[1]):
            vals = ",".join(repr(float(v)) for v in train.members[t, m])
            lines.append(f"{date},{m + 1},{vals}")
        obs = ",".join(repr(float(v)) for v in train.observations[t])
        lines.append(f"{date},obs,{obs}")
    return "\n".join(lines) + "\n"


def parse_historical_csv(text: str) -> HistoricalRecord:
    rows = list(csv.reader(text.splitlines()))
    if not rows or rows[0][:1] != ["date"] or rows[0][:2] == ["date", "member"]:
        raise SchemaError("historical CSV must start with header 'date,<id>,..'")
    ids = rows[0][1:]
    if not ids:
        raise SchemaError("historical CSV declares no margins")
    dates, obs = [], []
    for pos, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(ids) + 1:
            raise SchemaError(f"historical CSV line {pos}: expected {len(ids) + 1} fields")
        dates.append(row[0])
        try:
            obs.append([float(v) for v in row[1:]])
        except ValueError:
            raise SchemaError(f"historical CSV line {pos}: non-numeric value") from None
    if not dates:
        raise SchemaError("historical CSV has no data rows")
    return HistoricalRecord(dates, np.array(obs), ids)


def dumps_historical_csv(hist: HistoricalRecord) -> str:
    lines = ["date," + ",".join(hist.margin_ids)]
    for t, date in enumerate(hist.dates):
        vals = ",".join(repr(float(v)) for v in hist.observations[t])
        lines.append(f"{date},{vals}")
    return "\n".join(lines) + "\n"
