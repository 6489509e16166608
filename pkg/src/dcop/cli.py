"""Command line interface (installed as ``dcop``).

Subcommands: validate, convert, extend, empirical, ecc, schaake, verify,
demo.  Exit codes: 0 on success/pass, 1 on validation failure, 2 on
malformed input.  ``DCOP_SEED`` supplies the default seed when ``--seed``
is not given.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import io
from .copula_core import (
    DiscreteCopula,
    StochasticArray,
    array_to_copula,
    copula_to_array,
    validate_array,
    validate_copula,
)
from .empirical import TiePolicy
from .errors import DcopError, DimensionError
from .postprocess import (
    EnsembleForecast,
    HistoricalRecord,
    PredictiveDistribution,
    TrainingSet,
    ecc,
    fit_emoslite,
    quantize,
    schaake_shuffle,
    verify_dependence,
)
from .sklar import FiniteJointDistribution
from .subcopula import DiscreteSubcopula, extend, validate_subcopula

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_MALFORMED = 2


def _default_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("DCOP_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise DcopError(f"DCOP_SEED must be an integer, got {env!r}") from None
    return 0


def _load(path: str) -> io.Document:
    try:
        return io.load(path)
    except FileNotFoundError:
        raise _Malformed(f"no such file: {path}") from None
    except DcopError as e:
        raise _Malformed(str(e)) from None


class _Malformed(Exception):
    pass


def _emit(doc: io.Document, out: str | None) -> None:
    if out is None:
        sys.stdout.write(io.dumps(doc))
    else:
        io.save(doc, out)


def _write_ensemble(ens: EnsembleForecast, out: str | None) -> None:
    text = io.dumps_ensemble_csv(ens)
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _policy(args) -> TiePolicy:
    if getattr(args, "ties", "random") == "error":
        return TiePolicy.error()
    return TiePolicy.random(_default_seed(getattr(args, "seed", None)))


def _load_training(path: str) -> TrainingSet:
    try:
        return io.parse_training_csv(Path(path).read_text())
    except FileNotFoundError:
        raise _Malformed(f"no such file: {path}") from None
    except DcopError as e:
        raise _Malformed(str(e)) from None


def _load_historical(path: str) -> HistoricalRecord:
    try:
        return io.parse_historical_csv(Path(path).read_text())
    except FileNotFoundError:
        raise _Malformed(f"no such file: {path}") from None
    except DcopError as e:
        raise _Malformed(str(e)) from None


def _load_ensemble(path: str) -> EnsembleForecast:
    doc = _load(path)
    if doc.kind != "ensemble":
        raise _Malformed(f"{path}: expected an ensemble CSV")
    assert isinstance(doc.payload, EnsembleForecast)
    return doc.payload


def _distributions(
    method: str,
    base: EnsembleForecast,
    train: TrainingSet | None,
    margin_ids,
) -> list[PredictiveDistribution]:
    dists = []
    for mid in margin_ids:
        axis = base.margin_ids.index(mid)
        if method == "passthrough":
            dists.append(PredictiveDistribution.passthrough(base.margin(axis)))
        else:
            assert train is not None
            coeffs = fit_emoslite(train, mid)
            dists.append(coeffs.predictive(base.margin(axis)))
    return dists


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _cmd_validate(args) -> int:
    doc = _load(args.file)
    payload = doc.payload
    if isinstance(payload, DiscreteCopula):
        report = validate_copula(payload)
    elif isinstance(payload, StochasticArray):
        report = validate_array(payload)
    elif isinstance(payload, DiscreteSubcopula):
        report = validate_subcopula(payload)
    elif isinstance(payload, FiniteJointDistribution):
        print(f"{doc.kind}: well-formed (checked at load)")
        return EXIT_OK
    else:
        print(f"{doc.kind}: well-formed (checked at load)")
        return EXIT_OK
    if report.passed:
        print(f"{doc.kind}: valid")
        return EXIT_OK
    for v in report.violations:
        print(f"violation,{v.axiom},{';'.join(str(c) for c in v.where)},{v.value}")
    print(f"{doc.kind}: INVALID ({len(report.violations)} violations)")
    return EXIT_INVALID


def _cmd_convert(args) -> int:
    doc = _load(args.file)
    if args.to == "array":
        if isinstance(doc.payload, StochasticArray):
            out_doc = doc
        elif isinstance(doc.payload, DiscreteCopula):
            out_doc = io.Document("array", copula_to_array(doc.payload))
        else:
            raise _Malformed(f"cannot convert {doc.kind} to array")
    else:
        if isinstance(doc.payload, DiscreteCopula):
            out_doc = doc
        elif isinstance(doc.payload, StochasticArray):
            copula = array_to_copula(doc.payload)
            kind = "copula-sparse" if copula.is_sparse else "copula"
            out_doc = io.Document(kind, copula)
        else:
            raise _Malformed(f"cannot convert {doc.kind} to copula")
    _emit(out_doc, args.out)
    return EXIT_OK


def _cmd_extend(args) -> int:
    doc = _load(args.file)
    if not isinstance(doc.payload, DiscreteSubcopula):
        raise _Malformed(f"{args.file}: expected a subcopula document")
    copula = extend(doc.payload)
    _emit(io.Document("copula-sparse", copula), args.out)
    return EXIT_OK


def _cmd_empirical(args) -> int:
    from .empirical import SampleSet, empirical_copula

    ens = _load_ensemble(args.file)
    sample = SampleSet(ens.members, ens.margin_ids)
    copula = empirical_copula(sample, _policy(args))
    _emit(io.Document("copula-sparse", copula), args.out)
    return EXIT_OK


def _cmd_ecc(args) -> int:
    raw = _load_ensemble(args.raw)
    train = _load_training(args.train) if args.train else None
    if args.method == "emoslite" and train is None:
        raise _Malformed("--method emoslite requires --train")
    if train is not None and tuple(train.margin_ids) != raw.margin_ids:
        raise DimensionError("training margins do not match the raw ensemble")
    policy = _policy(args)
    dists = _distributions(args.method, raw, train, raw.margin_ids)
    samples = [quantize(d, raw.size) for d in dists]
    out_ens = ecc(raw, samples, policy, max_workers=args.workers)
    _write_ensemble(out_ens, args.out)
    if args.figures:
        from .figures import save_dependence_figures

        save_dependence_figures(raw, out_ens, args.figures, policy)
    return EXIT_OK


def _cmd_schaake(args) -> int:
    hist = _load_historical(args.hist)
    train = _load_training(args.train) if args.train else None
    if args.method == "emoslite" and train is None:
        raise _Malformed("--method emoslite requires --train")
    if args.raw:
        base = _load_ensemble(args.raw)
    elif train is not None:
        # Without an explicit forecast, coefficients apply to the most
        # recent forecast in the training window.
        base = train.latest_forecast()
    else:
        raise _Malformed("schaake needs --train or --raw to build distributions")
    missing = [m for m in hist.margin_ids if m not in base.margin_ids]
    if missing:
        raise DimensionError(f"margins {missing} absent from the forecast data")
    policy = _policy(args)
    dists = _distributions(args.method, base, train, hist.margin_ids)
    out_ens = schaake_shuffle(hist, dists, args.size, policy, max_workers=args.workers)
    _write_ensemble(out_ens, args.out)
    if args.figures:
        from .figures import save_dependence_figures

        ref = EnsembleForecast(hist.observations, hist.margin_ids)
        save_dependence_figures(ref, out_ens, args.figures, policy)
    return EXIT_OK


def _cmd_verify(args) -> int:
    ref = _load_ensemble(args.ref)
    out = _load_ensemble(args.out)
    policy = _policy(args)
    report = verify_dependence(ref, out, policy)
    for line in report.lines():
        print(line)
    if args.figures:
        from .figures import save_dependence_figures

        save_dependence_figures(ref, out, args.figures, policy)
    return EXIT_OK if report.copulas_equal else EXIT_INVALID


def _cmd_demo(args) -> int:
    _emit(io.emit_golden(args.name), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dcop",
        description="Discrete copulas, stochastic arrays and rank-reordering "
        "ensemble postprocessing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a document's axioms")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("convert", help="convert between copula and array form")
    p.add_argument("--to", required=True, choices=("copula", "array"))
    p.add_argument("--out")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_convert)

    p = sub.add_parser("extend", help="extend a subcopula to a full copula")
    p.add_argument("--out")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_extend)

    p = sub.add_parser("empirical", help="empirical copula of a sample CSV")
    p.add_argument("--out")
    p.add_argument("--seed", type=int)
    p.add_argument("--ties", choices=("error", "random"), default="random")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_empirical)

    p = sub.add_parser("ecc", help="postprocess and reorder by raw-ensemble ranks")
    p.add_argument("--raw", required=True)
    p.add_argument("--train")
    p.add_argument("--method", choices=("emoslite", "passthrough"), default="emoslite")
    p.add_argument("--seed", type=int)
    p.add_argument("--ties", choices=("error", "random"), default="random")
    p.add_argument("--out")
    p.add_argument("--figures", metavar="DIR")
    p.add_argument("--workers", type=int)
    p.set_defaults(fn=_cmd_ecc)

    p = sub.add_parser("schaake", help="postprocess and reorder by a historical record")
    p.add_argument("--hist", required=True)
    p.add_argument("--train")
    p.add_argument("--raw")
    p.add_argument("--method", choices=("emoslite", "passthrough"), default="emoslite")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--ties", choices=("error", "random"), default="random")
    p.add_argument("--out")
    p.add_argument("--figures", metavar="DIR")
    p.add_argument("--workers", type=int)
    p.set_defaults(fn=_cmd_schaake)

    p = sub.add_parser("verify", help="compare dependence structure of two ensembles")
    p.add_argument("--ref", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--ties", choices=("error", "random"), default="random")
    p.add_argument("--figures", metavar="DIR")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("demo", help="emit a bundled reference object")
    p.add_argument(
        "name",
        choices=(
            "table1",
            "table2",
            "example4",
            "example4-extension",
            "example4-joint",
        ),
    )
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_demo)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _Malformed as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MALFORMED
    except DcopError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
