"""Command line entry point.

Subcommands:
  stream  train on the first n_train rows, score the rest, print a report
  train   train on a dataset (or its first n_train rows) and save a model
  eval    score a saved model against a dataset
  cv      k-fold cross-validation of the streaming pipeline
  stats   label cardinality / density and dataset shape

Exit codes: 0 success, 2 config or usage, 3 data format, 4 numeric failure,
5 model file, 6 file I/O, 1 anything unexpected. Errors are printed to
stderr as "error[category]: message".
"""

import argparse
import json
import os
import sys
from pathlib import Path

from .dataio import DatasetFormatError, load_dataset, split
from .harness import (ConfigError, ModelFormatError, RunConfig, emit_report,
                      load_dataset_defaults, load_model, predict_sets,
                      run_cv, run_stream_split, save_model, train_stream,
                      validate_config)
from .labels import dataset_stats
from .metrics import evaluate
from .numerics import SingularMatrixError

REPORT_SCHEMA_VERSION = 1


def _parse_label_spec(value: str):
    """--labels accepts a count, a comma list of names, or a sidecar path."""
    if value.isdigit():
        return int(value)
    if "," in value:
        return [name.strip() for name in value.split(",") if name.strip()]
    if value.endswith((".xml", ".txt")) or os.path.sep in value:
        return value
    return [value]


def _default_data_path(name: str) -> str:
    """Find data/<name>.arff (or .csv) relative to the working directory."""
    root = Path("data")
    for suffix in (".arff", ".csv"):
        candidate = root / f"{name}{suffix}"
        if candidate.exists():
            return str(candidate)
    raise ConfigError(
        f"no dataset file for {name!r} found under {root}; "
        "pass --data explicitly")


def _add_data_args(parser):
    parser.add_argument("--data", help="dataset file path")
    parser.add_argument("--format", choices=("arff", "csv"),
                        help="dataset file format (default arff)")
    parser.add_argument("--labels",
                        help="label columns: trailing count, comma-separated "
                             "names, or sidecar .txt/.xml path")
    parser.add_argument("--delimiter", help="csv field delimiter (default ,)")
    parser.add_argument("--defaults", metavar="NAME",
                        help="start from shipped defaults for a named dataset")


def _add_run_args(parser):
    parser.add_argument("--n-train", type=int, help="rows in the training split")
    parser.add_argument("--hidden", type=int, help="hidden layer width")
    parser.add_argument("--init", type=int,
                        help="initial block size (raised to the hidden width)")
    parser.add_argument("--chunk", type=int, help="streaming chunk size")
    parser.add_argument("--ridge", type=float,
                        help="ridge added to the initial Gram matrix")
    parser.add_argument("--threshold-mode",
                        choices=("calibrated", "zero", "recalibrate"),
                        help="how the decoding threshold is chosen")
    parser.add_argument("--min-one", action="store_true", default=None,
                        help="never predict an empty label set")
    parser.add_argument("--no-normalize", action="store_true", default=None,
                        help="skip min-max feature scaling")
    parser.add_argument("--name", help="dataset name used in reports")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="streamlabel",
        description="Online multi-label classification benchmarks.")
    sub = parser.add_subparsers(dest="command", required=True)

    for command, summary in (
            ("stream", "train on a prefix of the data and score the rest"),
            ("train", "train and save a model file"),
            ("cv", "k-fold cross-validation"),
    ):
        p = sub.add_parser(command, help=summary)
        _add_data_args(p)
        _add_run_args(p)
        p.add_argument("--seed", type=int, default=0, help="run seed")
        p.add_argument("--out", help="write output to this path")
        if command == "cv":
            p.add_argument("--folds", type=int, default=5, help="fold count")
        if command != "train":
            p.add_argument("--text", action="store_true",
                           help="aligned text report instead of JSON")

    p = sub.add_parser("eval", help="score a saved model")
    _add_data_args(p)
    p.add_argument("--model", required=True, help="model file to load")
    p.add_argument("--skip", type=int, default=0,
                   help="skip this many leading rows (e.g. the training split)")
    p.add_argument("--min-one", action="store_true", default=None,
                   help="never predict an empty label set")
    p.add_argument("--seed", type=int, default=0, help="unused, kept for symmetry")
    p.add_argument("--out", help="write output to this path")
    p.add_argument("--text", action="store_true",
                   help="aligned text report instead of JSON")

    p = sub.add_parser("stats", help="dataset shape and label statistics")
    _add_data_args(p)
    p.add_argument("--seed", type=int, default=0, help="unused, kept for symmetry")
    p.add_argument("--out", help="write output to this path")
    p.add_argument("--text", action="store_true",
                   help="aligned text output instead of JSON")
    return parser


def _build_config(args) -> RunConfig:
    """Merge shipped defaults (lowest) with explicit flags (highest)."""
    merged = {}
    if args.defaults:
        merged.update(load_dataset_defaults(args.defaults))
        merged.setdefault("dataset_name", args.defaults)
    overrides = {
        "data_path": args.data,
        "data_format": args.format,
        "delimiter": args.delimiter,
        "dataset_name": getattr(args, "name", None),
        "n_train": getattr(args, "n_train", None),
        "n_hidden": getattr(args, "hidden", None),
        "n_init": getattr(args, "init", None),
        "chunk_size": getattr(args, "chunk", None),
        "ridge": getattr(args, "ridge", None),
        "threshold_mode": getattr(args, "threshold_mode", None),
        "min_one": getattr(args, "min_one", None),
        "seed": getattr(args, "seed", None),
        "out_path": getattr(args, "out", None),
    }
    if args.labels is not None:
        overrides["label_spec"] = _parse_label_spec(args.labels)
    if getattr(args, "no_normalize", None):
        overrides["normalize"] = False
    merged.update({k: v for k, v in overrides.items() if v is not None})
    if not merged.get("data_path"):
        if args.defaults:
            merged["data_path"] = _default_data_path(args.defaults)
        else:
            raise ConfigError("--data is required (or --defaults NAME)")
    if "label_spec" not in merged:
        raise ConfigError("--labels is required (or --defaults NAME)")
    config = RunConfig(**merged)
    validate_config(config)
    return config


def _write_output(text: str, out_path) -> None:
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_stream(args) -> None:
    config = _build_config(args)
    if config.n_train is None:
        raise ConfigError("--n-train is required (or --defaults NAME)")
    bundle = load_dataset(config.data_path, config.data_format,
                          config.label_spec, config.delimiter)
    train, test = split(bundle, config.n_train)
    report = run_stream_split(config, train, test)
    fmt = "text" if args.text else "json"
    _write_output(emit_report(report, fmt), config.out_path)


def _cmd_train(args) -> None:
    config = _build_config(args)
    if not config.out_path:
        raise ConfigError("--out is required: path for the saved model file")
    bundle = load_dataset(config.data_path, config.data_format,
                          config.label_spec, config.delimiter)
    if config.n_train is not None:
        bundle, _ = split(bundle, config.n_train)
    model = train_stream(config, bundle)
    save_model(model.params, model.state, model.threshold, model.norm_stats,
               config.out_path, seed=config.seed)
    summary = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "dataset": config.name(),
        "model_path": config.out_path,
        "n_samples_trained": model.state.samples_seen,
        "n_epochs": model.n_epochs,
        "threshold": model.threshold,
        "train_s": model.train_s,
    }
    sys.stdout.write(json.dumps(summary, indent=2) + "\n")


def _cmd_eval(args) -> None:
    model = load_model(args.model)
    if args.labels is None and not args.defaults:
        raise ConfigError("--labels is required (or --defaults NAME)")
    label_spec = None
    data_format = args.format or "arff"
    delimiter = args.delimiter or ","
    data_path = args.data
    min_one = args.min_one
    if args.defaults:
        defaults = load_dataset_defaults(args.defaults)
        label_spec = defaults.get("label_spec")
        if min_one is None:
            min_one = defaults.get("min_one")
        if data_path is None:
            data_path = _default_data_path(args.defaults)
    if args.labels is not None:
        label_spec = _parse_label_spec(args.labels)
    if data_path is None:
        raise ConfigError("--data is required (or --defaults NAME)")
    bundle = load_dataset(data_path, data_format, label_spec, delimiter)
    if args.skip:
        if not 0 < args.skip < bundle.n_samples:
            raise ConfigError(
                f"--skip must be in (0, {bundle.n_samples}), got {args.skip}")
        _, bundle = split(bundle, args.skip)
    if model.threshold is None:
        raise ModelFormatError(
            f"{args.model} stores no decoding threshold; cannot eval")
    preds, test_s = predict_sets(model.params, model.state.beta,
                                 model.threshold, model.norm_stats, bundle,
                                 bool(min_one))
    metrics = evaluate(preds, bundle.labelsets, bundle.m)
    doc = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "dataset": Path(data_path).stem,
        "model_path": args.model,
        "n_samples": bundle.n_samples,
        "metrics": metrics.as_dict(),
        "timing": {"test_s": test_s},
        "threshold": model.threshold,
    }
    if args.text:
        lines = [f"{k:<12}  {v:.4f}" for k, v in metrics.as_dict().items()]
        lines.append(f"{'threshold':<12}  {model.threshold:.6f}")
        lines.append(f"{'test_s':<12}  {test_s:.6f}")
        out = "\n".join(lines) + "\n"
    else:
        out = json.dumps(doc, indent=2) + "\n"
    _write_output(out, args.out)


def _cmd_cv(args) -> None:
    config = _build_config(args)
    report = run_cv(config, args.folds)
    fmt = "text" if args.text else "json"
    _write_output(emit_report(report, fmt), config.out_path)


def _cmd_stats(args) -> None:
    if args.labels is None and not args.defaults:
        raise ConfigError("--labels is required (or --defaults NAME)")
    label_spec = None
    data_path = args.data
    if args.defaults:
        defaults = load_dataset_defaults(args.defaults)
        label_spec = defaults.get("label_spec")
        if data_path is None:
            data_path = _default_data_path(args.defaults)
    if args.labels is not None:
        label_spec = _parse_label_spec(args.labels)
    if data_path is None:
        raise ConfigError("--data is required (or --defaults NAME)")
    bundle = load_dataset(data_path, args.format or "arff", label_spec,
                          args.delimiter or ",")
    stats = dataset_stats(bundle.labelsets, bundle.m)
    doc = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "dataset": Path(data_path).stem,
        "n_samples": stats.n_samples,
        "n_features": bundle.n_features,
        "n_labels": stats.n_labels,
        "label_cardinality": stats.label_cardinality,
        "label_density": stats.label_density,
    }
    if args.text:
        width = max(len(k) for k in doc) + 2
        lines = [f"{k:<{width}}{v}" for k, v in doc.items()
                 if k != "schema_version"]
        out = "\n".join(lines) + "\n"
    else:
        out = json.dumps(doc, indent=2) + "\n"
    _write_output(out, args.out)


_COMMANDS = {
    "stream": _cmd_stream,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "cv": _cmd_cv,
    "stats": _cmd_stats,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except ConfigError as err:
        print(f"error[config]: {err}", file=sys.stderr)
        return 2
    except DatasetFormatError as err:
        print(f"error[data]: {err}", file=sys.stderr)
        return 3
    except SingularMatrixError as err:
        print(f"error[numeric]: {err}", file=sys.stderr)
        return 4
    except ModelFormatError as err:
        print(f"error[model]: {err}", file=sys.stderr)
        return 5
    except OSError as err:
        print(f"error[io]: {err}", file=sys.stderr)
        return 6
    except ValueError as err:
        print(f"error[config]: {err}", file=sys.stderr)
        return 2
    except Exception as err:  # noqa: BLE001 -- keep the CLI's contract
        print(f"error[unexpected]: {type(err).__name__}: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
