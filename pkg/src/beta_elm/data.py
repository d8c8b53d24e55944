"""Dataset ingestion, normalization, splitting, cross-validation, noise.

Row order is preserved everywhere it matters: time-series ("prediction")
datasets are split and folded by position, never shuffled, because the
recurrent models chain hidden state through consecutive rows.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

__all__ = [
    "TASKS",
    "Dataset",
    "NoiseSpec",
    "NormStats",
    "load_csv",
    "window_series",
    "normalize",
    "split_holdout",
    "kfold",
    "inject_noise",
]

TASKS = ("classification", "prediction", "regression")

NOISE_TARGETS = ("train", "test", "both")


@dataclass(frozen=True)
class Dataset:
    """Numeric samples with their targets and task kind."""

    inputs: np.ndarray
    targets: np.ndarray
    task: str = "regression"
    name: str = ""
    num_classes: int | None = None

    def __post_init__(self):
        inputs = np.asarray(self.inputs, dtype=np.float64)
        targets = np.asarray(self.targets, dtype=np.float64)
        if targets.ndim == 1:
            targets = targets[:, None]
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "targets", targets)
        if inputs.ndim != 2 or targets.ndim != 2:
            raise ValueError("inputs and targets must be 2-D (samples as rows)")
        if inputs.shape[0] != targets.shape[0]:
            raise ValueError(f"row mismatch: {inputs.shape[0]} inputs vs {targets.shape[0]} targets")
        if inputs.shape[0] < 1:
            raise ValueError("a dataset needs at least one sample")
        if self.task not in TASKS:
            raise ValueError(f"task must be one of {TASKS}, got {self.task!r}")
        if self.task == "classification":
            if self.num_classes is None or self.num_classes < 2:
                raise ValueError("classification datasets require num_classes >= 2")
            codes = targets
            if codes.shape[1] != 1:
                raise ValueError("classification targets are a single column of class codes")
            if np.any(codes != np.round(codes)) or codes.min() < 0 or codes.max() > self.num_classes - 1:
                raise ValueError(f"class codes must be integers in [0, {self.num_classes - 1}]")

    def __len__(self):
        return self.inputs.shape[0]

    def take(self, index):
        """New dataset holding the given rows, in the given order."""
        index = np.asarray(index)
        return replace(self, inputs=self.inputs[index], targets=self.targets[index])


@dataclass(frozen=True)
class NoiseSpec:
    """Gaussian noise level (dB) and which partitions receive it."""

    snr_db: float
    apply_to: str = "both"

    def __post_init__(self):
        if not math.isfinite(self.snr_db):
            raise ValueError(f"snr_db must be finite, got {self.snr_db}")
        if self.apply_to not in NOISE_TARGETS:
            raise ValueError(f"apply_to must be one of {NOISE_TARGETS}, got {self.apply_to!r}")


def load_csv(path, input_cols, target_cols, *, header=False, task="regression",
             num_classes=None, name=None):
    """Read a comma-separated numeric file into a :class:`Dataset`.

    ``input_cols`` / ``target_cols`` are 0-based column indices. Row order is
    kept exactly as on disk. Ragged rows and non-numeric cells raise with the
    offending 1-based line (and column) named.
    """
    path = Path(path)
    input_cols = list(input_cols)
    target_cols = list(target_cols)
    if not input_cols or not target_cols:
        raise ValueError("input_cols and target_cols must both be non-empty")
    rows = []
    width = None
    with open(path, newline="") as handle:
        for lineno, record in enumerate(csv.reader(handle), start=1):
            if lineno == 1 and header:
                continue
            if not record or (len(record) == 1 and not record[0].strip()):
                continue  # blank line
            if width is None:
                width = len(record)
                for col in input_cols + target_cols:
                    if not 0 <= col < width:
                        raise ValueError(f"column {col} out of range for a {width}-column file")
            if len(record) != width:
                raise ValueError(f"line {lineno}: expected {width} fields, found {len(record)}")
            values = []
            for col, cell in enumerate(record):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ValueError(
                        f"line {lineno}, column {col}: non-numeric value {cell.strip()!r}"
                    ) from None
            rows.append(values)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    data = np.asarray(rows, dtype=np.float64)
    return Dataset(
        inputs=data[:, input_cols],
        targets=data[:, target_cols],
        task=task,
        name=name if name is not None else path.stem,
        num_classes=num_classes,
    )


def window_series(series, input_lags, target_col=0, name=""):
    """Turn a raw series into supervised (lag vector -> next value) pairs.

    ``input_lags`` is a sequence of ``(column, lag)`` pairs with lag >= 1;
    row ``t`` of the result has inputs ``series[t - lag, column]`` and target
    ``series[t, target_col]``.
    """
    series = np.asarray(series, dtype=np.float64)
    if series.ndim == 1:
        series = series[:, None]
    input_lags = [(int(c), int(lag)) for c, lag in input_lags]
    if not input_lags:
        raise ValueError("at least one (column, lag) pair is required")
    for col, lag in input_lags:
        if lag < 1:
            raise ValueError(f"lags must be >= 1, got {lag} for column {col}")
        if not 0 <= col < series.shape[1]:
            raise ValueError(f"column {col} out of range for a {series.shape[1]}-column series")
    max_lag = max(lag for _, lag in input_lags)
    if series.shape[0] <= max_lag:
        raise ValueError(f"series of length {series.shape[0]} is too short for lag {max_lag}")
    t = np.arange(max_lag, series.shape[0])
    inputs = np.column_stack([series[t - lag, col] for col, lag in input_lags])
    targets = series[t, target_col]
    return Dataset(inputs=inputs, targets=targets, task="prediction", name=name)


_RANGES = {"unit": (0.0, 1.0), "symmetric": (-1.0, 1.0)}


@dataclass(frozen=True)
class NormStats:
    """Fitted affine min-max maps, reapplicable to held-out partitions."""

    lo: float
    hi: float
    input_min: np.ndarray | None
    input_max: np.ndarray | None
    target_min: np.ndarray | None = None
    target_max: np.ndarray | None = None

    @property
    def identity(self):
        return self.input_min is None

    def apply(self, ds):
        """Map another dataset through the fitted transform (no clipping)."""
        if self.identity:
            return ds
        inputs = _affine_forward(ds.inputs, self.input_min, self.input_max, self.lo, self.hi)
        targets = ds.targets
        if self.target_min is not None:
            targets = _affine_forward(targets, self.target_min, self.target_max, self.lo, self.hi)
        return replace(ds, inputs=inputs, targets=targets)

    def invert_inputs(self, inputs):
        if self.identity:
            return np.asarray(inputs, dtype=np.float64)
        return _affine_inverse(inputs, self.input_min, self.input_max, self.lo, self.hi)

    def invert_targets(self, targets):
        if self.target_min is None:
            return np.asarray(targets, dtype=np.float64)
        return _affine_inverse(targets, self.target_min, self.target_max, self.lo, self.hi)


def _affine_forward(x, col_min, col_max, lo, hi):
    x = np.asarray(x, dtype=np.float64)
    span = col_max - col_min
    mid = np.full_like(x, 0.5 * (lo + hi))
    with np.errstate(invalid="ignore", divide="ignore"):
        scaled = lo + (x - col_min) * (hi - lo) / span
    return np.where(span > 0, scaled, mid)


def _affine_inverse(z, col_min, col_max, lo, hi):
    z = np.asarray(z, dtype=np.float64)
    span = col_max - col_min
    with np.errstate(invalid="ignore", divide="ignore"):
        raw = col_min + (z - lo) * span / (hi - lo)
    return np.where(span > 0, raw, np.broadcast_to(col_min, z.shape))


def normalize(ds, feature_range="unit"):
    """Fit a per-column min-max map on ``ds`` and apply it.

    Input columns are always mapped onto the chosen range; target columns
    only for prediction tasks, where targets come from the same series as
    the inputs. Constant columns map to the range midpoint. Returns the
    transformed dataset and the fitted stats for reuse on held-out rows.
    """
    if feature_range == "none":
        stats = NormStats(lo=0.0, hi=1.0, input_min=None, input_max=None)
        return ds, stats
    if feature_range not in _RANGES:
        raise ValueError(f"feature_range must be 'unit', 'symmetric' or 'none', got {feature_range!r}")
    lo, hi = _RANGES[feature_range]
    target_min = target_max = None
    if ds.task == "prediction":
        target_min = ds.targets.min(axis=0)
        target_max = ds.targets.max(axis=0)
    stats = NormStats(
        lo=lo,
        hi=hi,
        input_min=ds.inputs.min(axis=0),
        input_max=ds.inputs.max(axis=0),
        target_min=target_min,
        target_max=target_max,
    )
    return stats.apply(ds), stats


def split_holdout(ds, train_fraction, shuffle=True, seed=0):
    """Split into (train, test) partitions.

    Prediction datasets split by position (first fraction trains) regardless
    of ``shuffle``; other tasks shuffle row assignment by ``seed`` first.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    m = len(ds)
    n_train = int(math.floor(m * train_fraction))
    if n_train < 1 or n_train >= m:
        raise ValueError(f"fraction {train_fraction} leaves an empty partition for {m} rows")
    if ds.task == "prediction" or not shuffle:
        index = np.arange(m)
    else:
        index = np.random.default_rng(seed).permutation(m)
    return ds.take(index[:n_train]), ds.take(index[n_train:])


def kfold(ds, k, seed=0):
    """k disjoint near-equal (train, test) pairs covering every row.

    Prediction datasets use contiguous blocks in time order; other tasks
    shuffle the row assignment by ``seed``.
    """
    m = len(ds)
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if k > m:
        raise ValueError(f"cannot make {k} folds from {m} rows")
    if ds.task == "prediction":
        index = np.arange(m)
    else:
        index = np.random.default_rng(seed).permutation(m)
    blocks = np.array_split(index, k)
    pairs = []
    for i in range(k):
        test_idx = blocks[i]
        train_idx = np.concatenate([blocks[j] for j in range(k) if j != i])
        pairs.append((ds.take(train_idx), ds.take(test_idx)))
    return pairs


def inject_noise(ds, snr_db, rng):
    """Add zero-mean Gaussian noise to every input column at the given SNR.

    Per column, the noise variance is ``mean(column^2) / 10^(snr_db / 10)``,
    measured on the clean column. Targets are never noised; all-zero columns
    have zero signal power and stay zero.
    """
    if not math.isfinite(snr_db):
        raise ValueError(f"snr_db must be finite, got {snr_db}")
    power = np.mean(ds.inputs**2, axis=0)
    sigma = np.sqrt(power / 10.0 ** (snr_db / 10.0))
    noisy = ds.inputs + rng.standard_normal(ds.inputs.shape) * sigma
    return replace(ds, inputs=noisy)
