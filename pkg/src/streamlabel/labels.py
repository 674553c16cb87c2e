"""Label-space handling: bipolar encoding, threshold calibration, decoding.

A label set is a plain Python set (or frozenset) of zero-based label
indices; the label-space dimension m travels alongside it. Encoding maps a
set to a +/-1 vector so that a zero threshold separates membership; the
calibrated threshold sharpens that split from raw scores seen in training.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class ThresholdCalib:
    """Running extrema of raw scores at true-positive / true-negative positions.

    min_pos tracks the smallest raw score ever seen where the true label was
    present, max_neg the largest where it was absent. Either is None until
    that category has been observed at least once.
    """

    min_pos: float | None = None
    max_neg: float | None = None
    observations: int = 0


@dataclass(frozen=True)
class DatasetStats:
    """Multi-labelness summary: mean labels per sample and its density."""

    label_cardinality: float
    label_density: float
    n_samples: int
    n_labels: int


def _check_members(labels, m: int) -> frozenset:
    members = frozenset(labels)
    for i in members:
        if not 0 <= int(i) < m:
            raise ValueError(f"label index {i} outside label space of size {m}")
    return members


def encode_bipolar(labels, m: int) -> np.ndarray:
    """Length-m vector with +1 at member positions and -1 elsewhere."""
    members = _check_members(labels, m)
    out = np.full(m, -1.0)
    if members:
        out[list(members)] = 1.0
    return out


def calibrate_update(calib: ThresholdCalib, y_raw, truth) -> ThresholdCalib:
    """Fold one sample's raw scores into the running extrema; returns calib."""
    y_raw = np.asarray(y_raw, dtype=np.float64)
    if y_raw.ndim != 1:
        raise ValueError(f"y_raw must be a vector, got ndim={y_raw.ndim}")
    m = y_raw.shape[0]
    members = _check_members(truth, m)
    if members:
        pos = float(min(y_raw[i] for i in members))
        calib.min_pos = pos if calib.min_pos is None else min(calib.min_pos, pos)
    if len(members) < m:
        mask = np.ones(m, dtype=bool)
        mask[list(members)] = False
        neg = float(y_raw[mask].max())
        calib.max_neg = neg if calib.max_neg is None else max(calib.max_neg, neg)
    calib.observations += 1
    return calib


def threshold_value(calib: ThresholdCalib) -> float:
    """Decoding threshold: midpoint of min positive and max negative score.

    Well-defined even when the two populations overlap (min_pos < max_neg).
    """
    if calib.min_pos is None:
        raise ValueError(
            "threshold_value: no true-positive scores observed (min_pos missing)")
    if calib.max_neg is None:
        raise ValueError(
            "threshold_value: no true-negative scores observed (max_neg missing)")
    return (calib.min_pos + calib.max_neg) / 2.0


def decode(y_raw, threshold: float, min_one: bool = False) -> set:
    """Label set {i : y_raw[i] > threshold}; ties predict negative.

    With min_one set, an empty result falls back to the argmax position
    (lowest index on ties) so every sample gets at least one label.
    """
    y_raw = np.asarray(y_raw, dtype=np.float64)
    if y_raw.ndim != 1:
        raise ValueError(f"y_raw must be a vector, got ndim={y_raw.ndim}")
    members = set(np.nonzero(y_raw > threshold)[0].tolist())
    if min_one and not members and y_raw.size:
        members = {int(np.argmax(y_raw))}
    return members


def dataset_stats(labelsets, m: int) -> DatasetStats:
    """Label cardinality (mean set size) and density (cardinality / m)."""
    labelsets = list(labelsets)
    if not labelsets:
        raise ValueError("dataset_stats: empty label-set sequence")
    if m < 1:
        raise ValueError(f"label space must have m >= 1, got {m}")
    for s in labelsets:
        _check_members(s, m)
    cardinality = sum(len(s) for s in labelsets) / len(labelsets)
    return DatasetStats(label_cardinality=cardinality,
                        label_density=cardinality / m,
                        n_samples=len(labelsets), n_labels=m)
