"""Beta basis function kernel: scalar form, multi-dimensional product, sampling.

A beta kernel is parametrised by two nonnegative shapes ``p``, ``q`` and a
support interval ``(u0, u1)``. Its value always lies in [0, 1] and its shape
depends on which shapes are positive:

* ``p > 0, q > 0`` -- a bump with compact support ``(u0, u1)``, peak 1 at the
  centre ``uc = (p*u1 + q*u0) / (p + q)``, zero outside.
* ``p > 0, q = 0`` -- a rising ramp: 0 left of ``u0``, 1 right of ``u1``.
* ``p = 0, q > 0`` -- a falling ramp: 1 left of ``u0``, 0 right of ``u1``.
* ``p = 0, q = 0`` -- the constant 1.

With ``p = q`` the bump is symmetric about ``uc``; with ``p = 1, q = 0`` and
support (0, 1) it is the identity ramp on (0, 1). The multi-dimensional
kernel is the product of one-dimensional factors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MIN_SUPPORT_WIDTH",
    "BetaParams",
    "BetaRanges",
    "BetaBank",
    "beta_1d",
    "beta_nd",
    "sample_beta_params",
]

# Minimum accepted support width when sampling (u0, u1) pairs.
MIN_SUPPORT_WIDTH = 1e-6

_MAX_SUPPORT_RESAMPLES = 10_000


def _center(p, q, u0, u1):
    """Kernel centre; midpoint when both shapes vanish (value then unused)."""
    denom = p + q
    if isinstance(denom, np.ndarray):
        safe = np.where(denom > 0, denom, 1.0)
        return np.where(denom > 0, (p * u1 + q * u0) / safe, 0.5 * (u0 + u1))
    if denom > 0:
        return (p * u1 + q * u0) / denom
    return 0.5 * (u0 + u1)


@dataclass(frozen=True)
class BetaParams:
    """Scalar beta kernel parameters; ``uc`` is derived."""

    p: float
    q: float
    u0: float
    u1: float
    uc: float = field(init=False)

    def __post_init__(self):
        if not (self.p >= 0 and self.q >= 0):
            raise ValueError(f"shape parameters must be nonnegative, got p={self.p}, q={self.q}")
        if not self.u0 < self.u1:
            raise ValueError(f"support bounds must satisfy u0 < u1, got ({self.u0}, {self.u1})")
        object.__setattr__(self, "uc", float(_center(self.p, self.q, self.u0, self.u1)))


@dataclass(frozen=True)
class BetaRanges:
    """Uniform sampling bounds for each beta kernel parameter."""

    p_lo: float
    p_hi: float
    q_lo: float
    q_hi: float
    u0_lo: float
    u0_hi: float
    u1_lo: float
    u1_hi: float

    def __post_init__(self):
        for name in ("p", "q", "u0", "u1"):
            lo = getattr(self, f"{name}_lo")
            hi = getattr(self, f"{name}_hi")
            if not lo <= hi:
                raise ValueError(f"{name} bounds are inverted: [{lo}, {hi}]")
        if self.p_lo < 0 or self.q_lo < 0:
            raise ValueError("shape parameter bounds must be nonnegative")


def beta_1d(u, params):
    """Evaluate the scalar beta kernel at ``u``.

    At the exact support bounds the limit from outside is returned, which
    makes the function total and continuous for every parameter case.
    """
    p, q, u0, u1, uc = params.p, params.q, params.u0, params.u1, params.uc
    if p == 0 and q == 0:
        return 1.0
    if p > 0 and q > 0:
        if not u0 < u < u1:
            return 0.0
        b_left = (u - u0) / (uc - u0)
        b_right = (u - u1) / (uc - u1)
        # Both ratios are positive strictly inside the support; a negative
        # base would mean a bug, not a value to absolute-value away.
        assert b_left > 0 and b_right > 0
        return b_left**p * b_right**q
    if p > 0:  # q == 0, uc == u1: rising ramp
        if u <= u0:
            return 0.0
        if u >= u1:
            return 1.0
        return ((u - u0) / (u1 - u0)) ** p
    # p == 0, q > 0, uc == u0: falling ramp
    if u <= u0:
        return 1.0
    if u >= u1:
        return 0.0
    return ((u - u1) / (u0 - u1)) ** q


def beta_nd(u, params):
    """Product of one-dimensional beta kernels over matching dimensions."""
    u = np.asarray(u, dtype=np.float64).ravel()
    if len(u) != len(params):
        raise ValueError(f"dimension mismatch: {len(u)} inputs vs {len(params)} parameter sets")
    if len(u) == 0:
        raise ValueError("beta_nd requires at least one dimension")
    out = 1.0
    for ui, pi in zip(u, params):
        out *= beta_1d(float(ui), pi)
        if out == 0.0:
            break
    return out


def sample_beta_params(ranges, rng):
    """Draw one parameter set uniformly from ``ranges``.

    The (u0, u1) pair is redrawn until the support is at least
    ``MIN_SUPPORT_WIDTH`` wide; impossible bounds raise after 10,000 tries.
    """
    p = float(rng.uniform(ranges.p_lo, ranges.p_hi))
    q = float(rng.uniform(ranges.q_lo, ranges.q_hi))
    for _ in range(_MAX_SUPPORT_RESAMPLES):
        u0 = float(rng.uniform(ranges.u0_lo, ranges.u0_hi))
        u1 = float(rng.uniform(ranges.u1_lo, ranges.u1_hi))
        if u1 - u0 > MIN_SUPPORT_WIDTH:
            return BetaParams(p=p, q=q, u0=u0, u1=u1)
    raise ValueError(
        "could not sample a support with u0 < u1 from "
        f"u0 in [{ranges.u0_lo}, {ranges.u0_hi}], u1 in [{ranges.u1_lo}, {ranges.u1_hi}]"
    )


def _beta_values(z, p, q, u0, u1, uc):
    """Vectorised four-case kernel evaluation over broadcastable arrays."""
    z, p, q, u0, u1, uc = np.broadcast_arrays(z, p, q, u0, u1, uc)
    out = np.zeros(z.shape, dtype=np.float64)

    pos_p = p > 0
    pos_q = q > 0

    out[~pos_p & ~pos_q] = 1.0

    bump = pos_p & pos_q
    m = bump & (z > u0) & (z < u1)
    if m.any():
        b_left = (z[m] - u0[m]) / (uc[m] - u0[m])
        b_right = (z[m] - u1[m]) / (uc[m] - u1[m])
        assert b_left.min() > 0 and b_right.min() > 0
        out[m] = b_left ** p[m] * b_right ** q[m]

    rising = pos_p & ~pos_q
    out[rising & (z >= u1)] = 1.0
    m = rising & (z > u0) & (z < u1)
    if m.any():
        out[m] = ((z[m] - u0[m]) / (u1[m] - u0[m])) ** p[m]

    falling = ~pos_p & pos_q
    out[falling & (z <= u0)] = 1.0
    m = falling & (z > u0) & (z < u1)
    if m.any():
        out[m] = ((z[m] - u1[m]) / (u0[m] - u1[m])) ** q[m]

    return out


@dataclass(frozen=True)
class BetaBank:
    """An array of independent beta kernels, one per cell of a weight matrix.

    Parameter arrays share one shape; ``uc`` is derived at construction so
    reloaded banks evaluate bit-identically.
    """

    p: np.ndarray
    q: np.ndarray
    u0: np.ndarray
    u1: np.ndarray
    uc: np.ndarray = field(init=False)

    def __post_init__(self):
        for name in ("p", "q", "u0", "u1"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        shapes = {self.p.shape, self.q.shape, self.u0.shape, self.u1.shape}
        if len(shapes) != 1:
            raise ValueError(f"parameter arrays must share one shape, got {shapes}")
        if np.any(self.p < 0) or np.any(self.q < 0):
            raise ValueError("shape parameters must be nonnegative")
        if not np.all(self.u0 < self.u1):
            raise ValueError("every support must satisfy u0 < u1")
        object.__setattr__(self, "uc", _center(self.p, self.q, self.u0, self.u1))

    @property
    def shape(self):
        return self.p.shape

    @classmethod
    def sample(cls, ranges, shape, rng):
        """Draw an independent kernel per cell; supports are redrawn per cell
        until wide enough, mirroring the scalar sampler."""
        p = rng.uniform(ranges.p_lo, ranges.p_hi, size=shape)
        q = rng.uniform(ranges.q_lo, ranges.q_hi, size=shape)
        u0 = rng.uniform(ranges.u0_lo, ranges.u0_hi, size=shape)
        u1 = rng.uniform(ranges.u1_lo, ranges.u1_hi, size=shape)
        for _ in range(_MAX_SUPPORT_RESAMPLES):
            bad = u1 - u0 <= MIN_SUPPORT_WIDTH
            if not bad.any():
                return cls(p=p, q=q, u0=u0, u1=u1)
            n_bad = int(bad.sum())
            u0[bad] = rng.uniform(ranges.u0_lo, ranges.u0_hi, size=n_bad)
            u1[bad] = rng.uniform(ranges.u1_lo, ranges.u1_hi, size=n_bad)
        raise ValueError(
            "could not sample supports with u0 < u1 from "
            f"u0 in [{ranges.u0_lo}, {ranges.u0_hi}], u1 in [{ranges.u1_lo}, {ranges.u1_hi}]"
        )

    def values(self, z):
        """Evaluate every kernel at the matching entry of ``z`` (broadcastable)."""
        return _beta_values(np.asarray(z, dtype=np.float64), self.p, self.q, self.u0, self.u1, self.uc)
