"""Scoring: classification accuracy, MSE/RMSE, improvement rates, aggregation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "METRIC_KINDS",
    "RunResult",
    "EvalReport",
    "decode_class_codes",
    "classification_accuracy",
    "mse",
    "rmse",
    "improvement_rate",
    "aggregate",
]

METRIC_KINDS = ("ca", "mse", "rmse")


def decode_class_codes(pred, num_classes):
    """Round real outputs to the nearest class code, clamped to [0, C-1].

    Ties round half away from zero, so 0.5 decodes to class 1.
    """
    pred = np.asarray(pred, dtype=np.float64).ravel()
    decoded = np.where(pred >= 0, np.floor(pred + 0.5), np.ceil(pred - 0.5))
    return np.clip(decoded, 0, num_classes - 1)


def _paired(pred, target, what):
    pred = np.asarray(pred, dtype=np.float64).ravel()
    target = np.asarray(target, dtype=np.float64).ravel()
    if pred.shape[0] != target.shape[0]:
        raise ValueError(f"{what}: length mismatch, {pred.shape[0]} vs {target.shape[0]}")
    if pred.shape[0] == 0:
        raise ValueError(f"{what}: empty input")
    return pred, target


def classification_accuracy(pred, target, num_classes):
    """Fraction of predictions whose decoded class matches the target code."""
    pred, target = _paired(pred, target, "classification_accuracy")
    return float(np.mean(decode_class_codes(pred, num_classes) == target))


def mse(pred, target):
    """Mean squared difference between predictions and targets."""
    pred, target = _paired(pred, target, "mse")
    return float(np.mean((target - pred) ** 2))


def rmse(pred, target):
    """Square root of the mean squared difference."""
    return math.sqrt(mse(pred, target))


def improvement_rate(candidate, baseline, metric_kind):
    """Relative gain of ``candidate`` over ``baseline``; positive means better.

    Accuracy improves by growing, errors by shrinking, so the sign is
    normalised per metric kind.
    """
    if metric_kind not in METRIC_KINDS:
        raise ValueError(f"metric_kind must be one of {METRIC_KINDS}, got {metric_kind!r}")
    if baseline == 0:
        raise ValueError("improvement rate is undefined for a zero baseline")
    if metric_kind == "ca":
        return (candidate - baseline) / baseline
    return (baseline - candidate) / baseline


@dataclass(frozen=True)
class RunResult:
    """One metric value from one run."""

    metric_kind: str
    value: float
    run_seed: int = 0
    partition: str = "test"

    def __post_init__(self):
        if self.metric_kind not in METRIC_KINDS:
            raise ValueError(f"metric_kind must be one of {METRIC_KINDS}, got {self.metric_kind!r}")


@dataclass(frozen=True)
class EvalReport:
    """Per-run values with their mean and sample standard deviation."""

    per_run: tuple[RunResult, ...]
    metric_kind: str = field(init=False)
    mean: float = field(init=False)
    std: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "per_run", tuple(self.per_run))
        if not self.per_run:
            raise ValueError("a report requires at least one run result")
        kinds = {r.metric_kind for r in self.per_run}
        if len(kinds) != 1:
            raise ValueError(f"mixed metric kinds in one report: {sorted(kinds)}")
        values = [r.value for r in self.per_run]
        object.__setattr__(self, "metric_kind", self.per_run[0].metric_kind)
        object.__setattr__(self, "mean", float(np.mean(values)))
        std = 0.0 if len(values) == 1 else float(np.std(values, ddof=1))
        object.__setattr__(self, "std", std)


def aggregate(per_run):
    """Collect run results of one metric kind into an :class:`EvalReport`."""
    per_run = tuple(per_run)
    if not per_run:
        raise ValueError("aggregate requires at least one run result")
    return EvalReport(per_run=per_run)
