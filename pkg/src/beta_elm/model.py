"""Network variants: feed-forward / recurrent, tanh / beta hidden activation.

Input (and recurrent) weights are drawn once from a seeded generator and
never trained; only the linear readout is solved for (see ``training``).
The beta variants weight each input scalar, pass it through its own beta
kernel, and multiply the per-dimension factors; the tanh variants sum the
weighted inputs and squash the total.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .beta import BetaBank, BetaRanges
from .linalg import DegenerateMatrixError, scale_to_spectral_radius

__all__ = [
    "ACTIVATIONS",
    "ModelConfig",
    "UntrainedModel",
    "TrainedModel",
    "init_model",
    "hidden_ff",
    "hidden_rec",
    "forward",
    "save_model",
    "load_model",
]

ACTIVATIONS = ("tanh", "beta")

_INIT_RETRIES = 100
_FORMAT_VERSION = 1


@dataclass(frozen=True)
class ModelConfig:
    """Architecture and initialisation settings for one network."""

    input_dim: int
    hidden_dim: int
    output_dim: int
    activation: str = "tanh"
    recurrent: bool = False
    beta_ranges: BetaRanges | None = None
    rec_connectivity: float = 0.1
    rec_spectral_radius: float = 0.9
    input_weight_scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if min(self.input_dim, self.hidden_dim, self.output_dim) < 1:
            raise ValueError("input_dim, hidden_dim and output_dim must all be >= 1")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {ACTIVATIONS}, got {self.activation!r}")
        if self.activation == "beta" and self.beta_ranges is None:
            raise ValueError("beta activation requires beta_ranges")
        if not 0.0 < self.rec_connectivity <= 1.0:
            raise ValueError(f"rec_connectivity must lie in (0, 1], got {self.rec_connectivity}")
        if not 0.0 < self.rec_spectral_radius < 1.0:
            raise ValueError(f"rec_spectral_radius must lie in (0, 1), got {self.rec_spectral_radius}")
        if not self.input_weight_scale > 0:
            raise ValueError(f"input_weight_scale must be positive, got {self.input_weight_scale}")


@dataclass(frozen=True)
class UntrainedModel:
    """Frozen random weights and kernel banks, before the readout is solved."""

    config: ModelConfig
    w_in: np.ndarray
    w_rec: np.ndarray | None = None
    input_beta: BetaBank | None = None
    rec_beta: BetaBank | None = None

    def __post_init__(self):
        cfg = self.config
        n, k = cfg.hidden_dim, cfg.input_dim
        object.__setattr__(self, "w_in", np.asarray(self.w_in, dtype=np.float64))
        if self.w_rec is not None:
            object.__setattr__(self, "w_rec", np.asarray(self.w_rec, dtype=np.float64))
        if self.w_in.shape != (n, k):
            raise ValueError(f"w_in must have shape {(n, k)}, got {self.w_in.shape}")
        if cfg.recurrent != (self.w_rec is not None):
            raise ValueError("w_rec must be present exactly when the model is recurrent")
        if self.w_rec is not None and self.w_rec.shape != (n, n):
            raise ValueError(f"w_rec must have shape {(n, n)}, got {self.w_rec.shape}")
        wants_beta = cfg.activation == "beta"
        if wants_beta != (self.input_beta is not None):
            raise ValueError("input_beta must be present exactly for beta activation")
        if (wants_beta and cfg.recurrent) != (self.rec_beta is not None):
            raise ValueError("rec_beta must be present exactly for recurrent beta models")
        if self.input_beta is not None and self.input_beta.shape != (n, k):
            raise ValueError(f"input_beta must have shape {(n, k)}, got {self.input_beta.shape}")
        if self.rec_beta is not None and self.rec_beta.shape != (n, n):
            raise ValueError(f"rec_beta must have shape {(n, n)}, got {self.rec_beta.shape}")


@dataclass(frozen=True)
class TrainedModel(UntrainedModel):
    """An initialised model with its solved linear readout."""

    w_out: np.ndarray = None

    def __post_init__(self):
        super().__post_init__()
        if self.w_out is None:
            raise ValueError("TrainedModel requires w_out")
        object.__setattr__(self, "w_out", np.asarray(self.w_out, dtype=np.float64))
        n, l = self.config.hidden_dim, self.config.output_dim
        if self.w_out.shape != (n, l):
            raise ValueError(f"w_out must have shape {(n, l)}, got {self.w_out.shape}")
        if not np.all(np.isfinite(self.w_out)):
            raise ValueError("w_out contains non-finite entries")


def _sample_recurrent_weights(config, rng):
    """Sparse uniform(-1, 1) matrix rescaled to the configured radius.

    Nonzeros are placed at exactly ``round(connectivity * n^2)`` uniformly
    chosen positions (at least one). A draw whose radius is zero (a nilpotent
    pattern) is retried with fresh positions and values.
    """
    n = config.hidden_dim
    n_nonzero = max(1, round(config.rec_connectivity * n * n))
    for _ in range(_INIT_RETRIES):
        w = np.zeros((n, n))
        positions = rng.choice(n * n, size=n_nonzero, replace=False)
        w.flat[positions] = rng.uniform(-1.0, 1.0, size=n_nonzero)
        try:
            return scale_to_spectral_radius(w, config.rec_spectral_radius)
        except DegenerateMatrixError:
            continue
    raise DegenerateMatrixError(
        f"no draw with positive spectral radius in {_INIT_RETRIES} attempts "
        f"(hidden_dim={n}, connectivity={config.rec_connectivity})"
    )


def init_model(config):
    """Draw all fixed weights (and beta banks) from the seeded generator.

    The draw order is fixed -- input weights, recurrent weights, input bank,
    recurrent bank -- so one seed always reproduces the same model.
    """
    rng = np.random.default_rng(config.seed)
    s = config.input_weight_scale
    w_in = rng.uniform(-s, s, size=(config.hidden_dim, config.input_dim))
    w_rec = _sample_recurrent_weights(config, rng) if config.recurrent else None
    input_beta = rec_beta = None
    if config.activation == "beta":
        input_beta = BetaBank.sample(config.beta_ranges, (config.hidden_dim, config.input_dim), rng)
        if config.recurrent:
            rec_beta = BetaBank.sample(config.beta_ranges, (config.hidden_dim, config.hidden_dim), rng)
    return UntrainedModel(config=config, w_in=w_in, w_rec=w_rec, input_beta=input_beta, rec_beta=rec_beta)


def _check_input(model, u):
    u = np.asarray(u, dtype=np.float64).ravel()
    if u.shape[0] != model.config.input_dim:
        raise ValueError(f"expected input of length {model.config.input_dim}, got {u.shape[0]}")
    return u


def hidden_ff(model, u):
    """Hidden state for one input, ignoring any recurrence.

    tanh: ``x_j = tanh(sum_i w_in[j,i] * u_i)``. beta: each weighted scalar
    ``w_in[j,i] * u_i`` goes through its own kernel and the factors multiply
    (the kernel is applied per weighted input, not to the sum).
    """
    u = _check_input(model, u)
    if model.config.activation == "tanh":
        return np.tanh(model.w_in @ u)
    return model.input_beta.values(model.w_in * u).prod(axis=1)


def hidden_rec(model, u, prev):
    """Hidden state for one input given the previous state.

    beta: the feed-forward product is multiplied by one kernel factor per
    recurrent weight, ``beta(w_rec[j,k] * prev_k)``. tanh: the recurrent
    drive joins the sum, ``tanh(w_in @ u + w_rec @ prev)``.
    """
    if not model.config.recurrent:
        raise ValueError("hidden_rec called on a non-recurrent model")
    u = _check_input(model, u)
    prev = np.asarray(prev, dtype=np.float64).ravel()
    if prev.shape[0] != model.config.hidden_dim:
        raise ValueError(f"expected state of length {model.config.hidden_dim}, got {prev.shape[0]}")
    if model.config.activation == "tanh":
        return np.tanh(model.w_in @ u + model.w_rec @ prev)
    in_part = model.input_beta.values(model.w_in * u).prod(axis=1)
    rec_part = model.rec_beta.values(model.w_rec * prev).prod(axis=1)
    return in_part * rec_part


def _check_batch(model, inputs):
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.ndim == 1:
        inputs = inputs[:, None]
    if inputs.ndim != 2 or inputs.shape[1] != model.config.input_dim:
        raise ValueError(
            f"expected inputs of shape (samples, {model.config.input_dim}), got {inputs.shape}"
        )
    if inputs.shape[0] < 1:
        raise ValueError("at least one input sample is required")
    return inputs


def hidden_ff_batch(model, inputs):
    """Feed-forward hidden states for a batch, one row per sample."""
    inputs = _check_batch(model, inputs)
    if model.config.activation == "tanh":
        return np.tanh(inputs @ model.w_in.T)
    n, k = model.w_in.shape
    out = np.empty((inputs.shape[0], n))
    step = max(1, 4_000_000 // (n * k))  # cap the (chunk, n, k) temporary
    for start in range(0, inputs.shape[0], step):
        chunk = inputs[start : start + step]
        z = chunk[:, None, :] * model.w_in[None, :, :]
        out[start : start + chunk.shape[0]] = model.input_beta.values(z).prod(axis=2)
    return out


def hidden_rec_batch(model, inputs, initial_state=None):
    """Recurrent hidden states chained over the batch in row order."""
    inputs = _check_batch(model, inputs)
    state = _initial_state(model, initial_state)
    out = np.empty((inputs.shape[0], model.config.hidden_dim))
    for t in range(inputs.shape[0]):
        state = hidden_rec(model, inputs[t], state)
        out[t] = state
    return out


def _initial_state(model, initial_state):
    if initial_state is None:
        return np.zeros(model.config.hidden_dim)
    state = np.asarray(initial_state, dtype=np.float64).ravel()
    if state.shape[0] != model.config.hidden_dim:
        raise ValueError(f"expected state of length {model.config.hidden_dim}, got {state.shape[0]}")
    return state


def forward(model, inputs, initial_state=None):
    """Readout over a sequence of inputs.

    Recurrent models chain hidden states in order from ``initial_state``
    (zero by default); feed-forward models treat rows independently. Returns
    ``(outputs, final_state)`` so a caller can continue across calls.
    """
    if not isinstance(model, TrainedModel):
        raise ValueError("forward requires a TrainedModel with a solved readout")
    if model.config.recurrent:
        states = hidden_rec_batch(model, inputs, initial_state)
    else:
        states = hidden_ff_batch(model, inputs)
    return states @ model.w_out, states[-1].copy()


def trained_from(model, w_out):
    """Attach a solved readout to an untrained model."""
    return TrainedModel(
        config=model.config,
        w_in=model.w_in,
        w_rec=model.w_rec,
        input_beta=model.input_beta,
        rec_beta=model.rec_beta,
        w_out=w_out,
    )


def _config_to_dict(config):
    d = {
        "input_dim": config.input_dim,
        "hidden_dim": config.hidden_dim,
        "output_dim": config.output_dim,
        "activation": config.activation,
        "recurrent": config.recurrent,
        "rec_connectivity": config.rec_connectivity,
        "rec_spectral_radius": config.rec_spectral_radius,
        "input_weight_scale": config.input_weight_scale,
        "seed": config.seed,
    }
    if config.beta_ranges is not None:
        r = config.beta_ranges
        d["beta_ranges"] = [r.p_lo, r.p_hi, r.q_lo, r.q_hi, r.u0_lo, r.u0_hi, r.u1_lo, r.u1_hi]
    return d


def _config_from_dict(d):
    ranges = d.pop("beta_ranges", None)
    if ranges is not None:
        d["beta_ranges"] = BetaRanges(*ranges)
    return ModelConfig(**d)


def save_model(model, path):
    """Dump config, weights and beta banks to one ``.npz`` file.

    Arrays are stored as float64 so a reload is bit-identical; derived bank
    centres are recomputed deterministically on load.
    """
    arrays = {"w_in": model.w_in}
    if model.w_rec is not None:
        arrays["w_rec"] = model.w_rec
    for prefix, bank in (("input_beta", model.input_beta), ("rec_beta", model.rec_beta)):
        if bank is not None:
            arrays[f"{prefix}_p"] = bank.p
            arrays[f"{prefix}_q"] = bank.q
            arrays[f"{prefix}_u0"] = bank.u0
            arrays[f"{prefix}_u1"] = bank.u1
    if isinstance(model, TrainedModel):
        arrays["w_out"] = model.w_out
    header = json.dumps({"format_version": _FORMAT_VERSION, "config": _config_to_dict(model.config)})
    np.savez(path, header=np.frombuffer(header.encode("utf-8"), dtype=np.uint8), **arrays)


def load_model(path):
    """Reload a model saved by :func:`save_model`."""
    with np.load(path) as data:
        header = json.loads(bytes(data["header"]).decode("utf-8"))
        if header.get("format_version") != _FORMAT_VERSION:
            raise ValueError(f"unsupported model format version: {header.get('format_version')}")
        config = _config_from_dict(header["config"])

        def bank(prefix):
            if f"{prefix}_p" not in data:
                return None
            return BetaBank(
                p=data[f"{prefix}_p"],
                q=data[f"{prefix}_q"],
                u0=data[f"{prefix}_u0"],
                u1=data[f"{prefix}_u1"],
            )

        untrained = UntrainedModel(
            config=config,
            w_in=data["w_in"],
            w_rec=data["w_rec"] if "w_rec" in data else None,
            input_beta=bank("input_beta"),
            rec_beta=bank("rec_beta"),
        )
        if "w_out" in data:
            return trained_from(untrained, data["w_out"])
        return untrained


def with_recurrent_weights(model, w_rec):
    """Copy of ``model`` with its recurrent matrix replaced (testing hook)."""
    return replace(model, w_rec=np.asarray(w_rec, dtype=np.float64))
