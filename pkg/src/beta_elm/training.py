"""Closed-form training: collect hidden states, solve the readout once.

The procedure is single-pass and non-iterative: one hidden-matrix assembly
over the training rows, one pseudo-inverse, no gradients.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .evaluation import classification_accuracy, rmse
from .linalg import pseudo_inverse
from .model import TrainedModel, hidden_ff_batch, hidden_rec_batch, init_model, trained_from

__all__ = [
    "DegenerateHiddenStateWarning",
    "TrainResult",
    "assemble_hidden_matrix",
    "solve_output_weights",
    "train",
]

# Fraction of identically-zero hidden rows above which training is suspect
# (beta products can collapse when supports miss the weighted inputs).
ZERO_ROW_WARN_FRACTION = 0.5


class DegenerateHiddenStateWarning(UserWarning):
    """Most hidden rows are identically zero; the readout will be near-trivial."""


@dataclass(frozen=True)
class TrainResult:
    model: TrainedModel
    metric: str
    train_score: float


def assemble_hidden_matrix(model, inputs):
    """Hidden states over the training rows, one row per sample.

    Recurrent models chain states in row order from the zero state;
    feed-forward rows are independent. Warns (but proceeds) when more than
    half the rows are identically zero.
    """
    if model.config.recurrent:
        h = hidden_rec_batch(model, inputs)
    else:
        h = hidden_ff_batch(model, inputs)
    zero_fraction = float(np.mean(np.all(h == 0.0, axis=1)))
    if zero_fraction > ZERO_ROW_WARN_FRACTION:
        warnings.warn(
            f"{zero_fraction:.0%} of hidden rows are identically zero; "
            "check beta supports against the weighted input range",
            DegenerateHiddenStateWarning,
            stacklevel=2,
        )
    return h


def solve_output_weights(h, targets):
    """Minimum-norm least-squares readout for ``h @ w = targets``."""
    h = np.asarray(h, dtype=np.float64)
    targets = _as_targets(targets)
    if h.shape[0] != targets.shape[0]:
        raise ValueError(f"row mismatch: {h.shape[0]} hidden rows vs {targets.shape[0]} targets")
    return pseudo_inverse(h) @ targets


def train(config, inputs, targets, task="regression", num_classes=None):
    """Initialise, collect hidden states, solve the readout.

    Returns the trained model together with its training-set score:
    classification accuracy for classification tasks, root-mean-square
    error otherwise.
    """
    targets = _as_targets(targets)
    model = init_model(config)
    h = assemble_hidden_matrix(model, inputs)
    w_out = solve_output_weights(h, targets)
    trained = trained_from(model, w_out)
    fitted = h @ w_out
    if task == "classification":
        if num_classes is None:
            raise ValueError("classification training requires num_classes")
        return TrainResult(trained, "ca", classification_accuracy(fitted, targets, num_classes))
    return TrainResult(trained, "rmse", rmse(fitted, targets))


def _as_targets(targets):
    targets = np.asarray(targets, dtype=np.float64)
    if targets.ndim == 1:
        targets = targets[:, None]
    if targets.ndim != 2 or targets.shape[0] < 1:
        raise ValueError(f"targets must be a (samples, outputs) matrix, got shape {targets.shape}")
    return targets
