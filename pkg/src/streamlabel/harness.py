"""Benchmark driver: streaming train/eval runs, cross-validation, persistence.

A streaming run is: load -> split -> normalize -> encode labels -> solve the
initial block -> per-chunk (predict raw, fold scores into the threshold
calibration, recursive update) -> pick threshold -> decode test set ->
score. Training time covers the initial solve, the sequential phase and
threshold selection; test time covers raw prediction plus decoding. Data
loading and normalization are excluded from both.
"""

import base64
import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .dataio import (DatasetBundle, NormStats, load_dataset, normalize_apply,
                     normalize_fit, split, take_rows)
from .elm import Activation, ElmParams, init_params, predict_raw
from .labels import ThresholdCalib, calibrate_update, decode, encode_bipolar, \
    threshold_value
from .metrics import MetricsReport, evaluate
from .numerics import GENERATOR_TAG, make_rng
from .online import OselmState, init_phase, update_chunk

REPORT_SCHEMA_VERSION = 1
MODEL_SCHEMA_VERSION = 1
THRESHOLD_MODES = ("calibrated", "zero", "recalibrate")


class ConfigError(ValueError):
    """One or more invalid configuration values, all listed together."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class ModelFormatError(ValueError):
    """Model file is unreadable, unversioned, or corrupted."""


@dataclass
class RunConfig:
    """Everything a streaming run needs beyond the dataset file itself."""

    data_path: str
    label_spec: object
    data_format: str = "arff"
    delimiter: str = ","
    dataset_name: str | None = None
    n_train: int | None = None
    n_hidden: int = 40
    seed: int = 0
    n_init: int = 1
    chunk_size: int = 1
    ridge: float = 0.0
    threshold_mode: str = "calibrated"
    min_one: bool = False
    normalize: bool = True
    out_path: str | None = None

    @property
    def n_init_effective(self) -> int:
        # the initial block must make the Gram matrix invertible
        return max(self.n_hidden, self.n_init)

    def name(self) -> str:
        if self.dataset_name:
            return self.dataset_name
        return Path(self.data_path).stem


def validate_config(config: RunConfig) -> None:
    problems = []
    if config.data_format not in ("arff", "csv"):
        problems.append(f"data_format must be arff or csv, got {config.data_format!r}")
    if config.label_spec is None:
        problems.append("label_spec is required")
    if config.n_hidden < 1:
        problems.append(f"n_hidden must be >= 1, got {config.n_hidden}")
    if config.n_init < 1:
        problems.append(f"n_init must be >= 1, got {config.n_init}")
    if config.chunk_size < 1:
        problems.append(f"chunk_size must be >= 1, got {config.chunk_size}")
    if config.ridge < 0.0:
        problems.append(f"ridge must be >= 0, got {config.ridge}")
    if config.threshold_mode not in THRESHOLD_MODES:
        problems.append(
            f"threshold_mode must be one of {'/'.join(THRESHOLD_MODES)}, "
            f"got {config.threshold_mode!r}")
    if config.n_train is not None and config.n_train < 1:
        problems.append(f"n_train must be >= 1, got {config.n_train}")
    if problems:
        raise ConfigError(problems)


def config_echo(config: RunConfig) -> dict:
    label_spec = config.label_spec
    if not isinstance(label_spec, (int, str)) and label_spec is not None:
        label_spec = list(label_spec)
    return {
        "data_path": config.data_path,
        "data_format": config.data_format,
        "label_spec": label_spec,
        "n_train": config.n_train,
        "n_hidden": config.n_hidden,
        "seed": config.seed,
        "n_init": config.n_init,
        "n_init_effective": config.n_init_effective,
        "chunk_size": config.chunk_size,
        "ridge": config.ridge,
        "threshold_mode": config.threshold_mode,
        "min_one": config.min_one,
        "normalize": config.normalize,
    }


@dataclass
class RunReport:
    """One streaming benchmark run: metrics, timing, threshold, config echo."""

    dataset: str
    config: dict
    metrics: MetricsReport
    train_time_s: float
    test_time_s: float
    n_epochs: int
    avg_epoch_s: float
    threshold: float
    schema_version: int = REPORT_SCHEMA_VERSION

    def to_json_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "dataset": self.dataset,
            "config": self.config,
            "metrics": self.metrics.as_dict(),
            "timing": {
                "train_s": self.train_time_s,
                "test_s": self.test_time_s,
                "n_epochs": self.n_epochs,
                "avg_epoch_s": self.avg_epoch_s,
            },
            "threshold": self.threshold,
        }


@dataclass
class CvReport:
    """Per-fold metrics with their mean and sample standard deviation."""

    dataset: str
    config: dict
    folds: list
    n_folds: int
    mean: dict = field(default_factory=dict)
    std: dict = field(default_factory=dict)
    schema_version: int = REPORT_SCHEMA_VERSION

    def to_json_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "dataset": self.dataset,
            "config": self.config,
            "n_folds": self.n_folds,
            "folds": [m.as_dict() for m in self.folds],
            "mean": self.mean,
            "std": self.std,
        }


@dataclass
class TrainedModel:
    """Output of the streaming training phase, ready to predict or persist."""

    params: ElmParams
    state: OselmState
    threshold: float
    norm_stats: NormStats | None
    calib: ThresholdCalib
    n_epochs: int
    init_s: float
    seq_s: float
    threshold_s: float

    @property
    def train_s(self) -> float:
        return self.init_s + self.seq_s + self.threshold_s


def _encode_targets(bundle: DatasetBundle) -> np.ndarray:
    return np.stack([encode_bipolar(s, bundle.m) for s in bundle.labelsets])


def train_stream(config: RunConfig, train: DatasetBundle) -> TrainedModel:
    """Run the full streaming training phase over a training bundle.

    Fits normalization (when enabled), solves the initial block, streams the
    remaining samples in chunks, and selects the decoding threshold. Each
    chunk's raw scores are taken before its own update touches the weights.
    """
    validate_config(config)
    n0 = config.n_init_effective
    n_train = train.n_samples
    if n_train <= n0:
        raise ConfigError(
            f"initial block (N0={n0}) consumes all {n_train} training "
            "samples; need more training data or a smaller n_hidden/n_init")

    norm_stats = None
    if config.normalize:
        norm_stats = normalize_fit(train)
        train = normalize_apply(norm_stats, train)
    targets = _encode_targets(train)
    params = init_params(train.n_features, config.n_hidden, config.seed)

    t0 = time.perf_counter()
    state = init_phase(params, train.X[:n0], targets[:n0], config.ridge)
    init_s = time.perf_counter() - t0

    calib = ThresholdCalib()
    n_epochs = math.ceil((n_train - n0) / config.chunk_size)
    t0 = time.perf_counter()
    for start in range(n0, n_train, config.chunk_size):
        stop = min(start + config.chunk_size, n_train)
        Xc = train.X[start:stop]
        raw = predict_raw(params, state.beta, Xc)
        for j in range(stop - start):
            calibrate_update(calib, raw[j], train.labelsets[start + j])
        update_chunk(state, params, Xc, targets[start:stop])
    seq_s = time.perf_counter() - t0

    t0 = time.perf_counter()
    if config.threshold_mode == "zero":
        threshold = 0.0
    elif config.threshold_mode == "calibrated":
        threshold = threshold_value(calib)
    else:  # recalibrate: post-hoc pass over all training data with final beta
        post = ThresholdCalib()
        raw_all = predict_raw(params, state.beta, train.X)
        for j in range(n_train):
            calibrate_update(post, raw_all[j], train.labelsets[j])
        threshold = threshold_value(post)
    threshold_s = time.perf_counter() - t0

    return TrainedModel(params=params, state=state, threshold=threshold,
                        norm_stats=norm_stats, calib=calib, n_epochs=n_epochs,
                        init_s=init_s, seq_s=seq_s, threshold_s=threshold_s)


def predict_sets(params: ElmParams, beta, threshold: float,
                 norm_stats: NormStats | None, bundle: DatasetBundle,
                 min_one: bool = False):
    """Decode one label set per bundle row; returns (label sets, seconds)."""
    if norm_stats is not None:
        bundle = normalize_apply(norm_stats, bundle)
    t0 = time.perf_counter()
    raw = predict_raw(params, beta, bundle.X)
    preds = [decode(raw[i], threshold, min_one) for i in range(raw.shape[0])]
    elapsed = time.perf_counter() - t0
    return preds, elapsed


def run_stream_split(config: RunConfig, train: DatasetBundle,
                     test: DatasetBundle) -> RunReport:
    """Streaming train on one bundle, threshold-decode and score the other."""
    if train.m != test.m:
        raise ValueError(
            f"train and test label spaces differ: {train.m} vs {test.m}")
    model = train_stream(config, train)
    preds, test_s = predict_sets(model.params, model.state.beta,
                                 model.threshold, model.norm_stats, test,
                                 config.min_one)
    report_metrics = evaluate(preds, test.labelsets, test.m)
    return RunReport(dataset=config.name(), config=config_echo(config),
                     metrics=report_metrics, train_time_s=model.train_s,
                     test_time_s=test_s, n_epochs=model.n_epochs,
                     avg_epoch_s=model.seq_s / model.n_epochs,
                     threshold=model.threshold)


def run_stream(config: RunConfig) -> RunReport:
    """Full benchmark from a dataset file, split at config.n_train rows."""
    validate_config(config)
    if config.n_train is None:
        raise ConfigError("n_train is required for a streaming benchmark run")
    bundle = load_dataset(config.data_path, config.data_format,
                          config.label_spec, config.delimiter)
    train, test = split(bundle, config.n_train)
    return run_stream_split(config, train, test)


def cv_folds(n_samples: int, k: int, seed: int) -> list:
    """Shuffle 0..n-1 with the seed and cut into k contiguous index folds."""
    if k < 2:
        raise ValueError(f"need k >= 2 folds, got {k}")
    if k > n_samples:
        raise ValueError(f"k={k} folds exceed dataset size {n_samples}")
    order = make_rng(seed).permutation(n_samples)
    return np.array_split(order, k)


def run_cv(config: RunConfig, k: int = 5) -> CvReport:
    """Seeded k-fold cross-validation of the full streaming pipeline.

    Rows are shuffled once with the config seed and cut into k contiguous
    folds; each fold serves as the test set exactly once, with fold-local
    normalization and threshold calibration.
    """
    validate_config(config)
    bundle = load_dataset(config.data_path, config.data_format,
                          config.label_spec, config.delimiter)
    return run_cv_bundle(config, bundle, k)


def run_cv_bundle(config: RunConfig, bundle: DatasetBundle, k: int) -> CvReport:
    """Cross-validate an already-loaded bundle (see run_cv)."""
    validate_config(config)
    folds = cv_folds(bundle.n_samples, k, config.seed)
    fold_metrics = []
    for i in range(k):
        test_idx = folds[i]
        train_idx = np.concatenate([folds[j] for j in range(k) if j != i])
        report = run_stream_split(config, take_rows(bundle, train_idx),
                                  take_rows(bundle, test_idx))
        fold_metrics.append(report.metrics)
    keys = ("hamming_loss", "accuracy", "precision", "recall", "f1")
    mean = {}
    std = {}
    for key in keys:
        values = np.array([getattr(m, key) for m in fold_metrics])
        mean[key] = float(values.mean())
        std[key] = float(values.std(ddof=1))
    return CvReport(dataset=config.name(), config=config_echo(config),
                    folds=fold_metrics, n_folds=k, mean=mean, std=std)


# ---------------------------------------------------------------------------
# model persistence

def _encode_array(a) -> dict:
    a = np.ascontiguousarray(a, dtype="<f8")
    return {"shape": list(a.shape),
            "data": base64.b64encode(a.tobytes()).decode("ascii")}


def _decode_array(obj, name: str) -> np.ndarray:
    try:
        shape = tuple(int(s) for s in obj["shape"])
        raw = base64.b64decode(obj["data"], validate=True)
    except (KeyError, TypeError, ValueError) as err:
        raise ModelFormatError(f"model array {name!r} is malformed: {err}") from err
    flat = np.frombuffer(raw, dtype="<f8")
    if flat.size != math.prod(shape):
        raise ModelFormatError(
            f"model array {name!r} has {flat.size} values, "
            f"expected {math.prod(shape)}")
    a = flat.reshape(shape).astype(np.float64)
    a.setflags(write=False)
    return a


def _checksum(doc: dict) -> str:
    canonical = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def save_model(params: ElmParams, state: OselmState, threshold: float | None,
               norm_stats: NormStats | None, path, seed: int | None = None) -> None:
    """Write a versioned, checksummed JSON model file.

    Arrays are stored as base64 little-endian float64 bytes, so a reload
    reproduces the saved predictor bit for bit and can resume streaming.
    """
    arrays = {
        "W": _encode_array(params.W),
        "b": _encode_array(params.b),
        "beta": _encode_array(state.beta),
        "M": _encode_array(state.M),
        "norm_min": _encode_array(norm_stats.min_) if norm_stats else None,
        "norm_max": _encode_array(norm_stats.max_) if norm_stats else None,
    }
    doc = {
        "schema_version": MODEL_SCHEMA_VERSION,
        "kind": "streamlabel-model",
        "generator": GENERATOR_TAG,
        "seed": seed,
        "activation": params.activation.value,
        "n_features": params.n_features,
        "n_hidden": params.n_hidden,
        "n_labels": int(state.beta.shape[1]),
        "samples_seen": state.samples_seen,
        "ridge": state.ridge_used,
        "threshold": threshold,
        "arrays": arrays,
    }
    doc["checksum"] = _checksum(doc)
    Path(path).write_text(json.dumps(doc) + "\n", encoding="utf-8")


@dataclass
class LoadedModel:
    """A reconstructed predictor: hidden layer, state, threshold, scaling."""

    params: ElmParams
    state: OselmState
    threshold: float | None
    norm_stats: NormStats | None
    seed: int | None


def load_model(path) -> LoadedModel:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as err:
        raise ModelFormatError(f"cannot read model file {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise ModelFormatError(f"{path} is not valid JSON: {err}") from err
    if not isinstance(doc, dict) or doc.get("kind") != "streamlabel-model":
        raise ModelFormatError(f"{path} is not a streamlabel model file")
    version = doc.get("schema_version")
    if version != MODEL_SCHEMA_VERSION:
        raise ModelFormatError(
            f"unsupported model schema version {version!r} "
            f"(this build reads version {MODEL_SCHEMA_VERSION})")
    stored = doc.get("checksum")
    body = {k: v for k, v in doc.items() if k != "checksum"}
    if stored != _checksum(body):
        raise ModelFormatError(f"{path}: checksum mismatch, file is corrupted")

    arrays = doc["arrays"]
    W = _decode_array(arrays["W"], "W")
    b = _decode_array(arrays["b"], "b")
    beta = _decode_array(arrays["beta"], "beta")
    M = _decode_array(arrays["M"], "M")
    params = ElmParams(W=W, b=b, activation=Activation(doc["activation"]),
                       n_features=int(doc["n_features"]),
                       n_hidden=int(doc["n_hidden"]))
    state = OselmState(beta=beta.copy(), M=M.copy(),
                       samples_seen=int(doc["samples_seen"]),
                       ridge_used=float(doc["ridge"]))
    norm_stats = None
    if arrays.get("norm_min") is not None:
        norm_stats = NormStats(min_=_decode_array(arrays["norm_min"], "norm_min"),
                               max_=_decode_array(arrays["norm_max"], "norm_max"))
    threshold = doc.get("threshold")
    threshold = None if threshold is None else float(threshold)
    seed = doc.get("seed")
    return LoadedModel(params=params, state=state, threshold=threshold,
                       norm_stats=norm_stats,
                       seed=None if seed is None else int(seed))


# ---------------------------------------------------------------------------
# report emission

def emit_report(report, format: str = "json") -> str:
    """Render a RunReport or CvReport as machine-stable JSON or aligned text."""
    if format == "json":
        return json.dumps(report.to_json_dict(), indent=2) + "\n"
    if format != "text":
        raise ValueError(f"unknown report format {format!r}")
    doc = report.to_json_dict()
    lines = []
    if isinstance(report, RunReport):
        names = list(doc["metrics"])
        widths = [max(len(n), 12) for n in names]
        header = "dataset".ljust(12) + "  ".join(
            n.ljust(w) for n, w in zip(names, widths))
        row = doc["dataset"][:12].ljust(12) + "  ".join(
            f"{doc['metrics'][n]:.4f}".ljust(w) for n, w in zip(names, widths))
        lines += [header.rstrip(), row.rstrip(), ""]
        lines.append(f"threshold    {doc['threshold']:.6f}")
        lines.append(f"train_s      {doc['timing']['train_s']:.6f}")
        lines.append(f"test_s       {doc['timing']['test_s']:.6f}")
        lines.append(f"n_epochs     {doc['timing']['n_epochs']}")
        lines.append(f"avg_epoch_s  {doc['timing']['avg_epoch_s']:.6f}")
    elif isinstance(report, CvReport):
        lines.append(f"dataset      {doc['dataset']}")
        lines.append(f"n_folds      {doc['n_folds']}")
        lines.append("")
        lines.append("metric        mean      std")
        for key, value in doc["mean"].items():
            lines.append(f"{key:<12}  {value:.4f}    {doc['std'][key]:.4f}")
    else:
        raise ValueError(f"cannot render report of type {type(report).__name__}")
    return "\n".join(lines) + "\n"


def load_dataset_defaults(name: str | None = None) -> dict:
    """Shipped per-dataset benchmark defaults (hyperparameters and splits)."""
    text = resources.files("streamlabel").joinpath(
        "dataset_defaults.json").read_text(encoding="utf-8")
    defaults = json.loads(text)
    if name is None:
        return defaults
    if name not in defaults:
        known = ", ".join(sorted(defaults))
        raise ConfigError(f"no shipped defaults for {name!r} (known: {known})")
    return defaults[name]
