"""Dense-matrix primitives: Moore-Penrose pseudo-inverse and spectral radius."""

import numpy as np

__all__ = [
    "DegenerateMatrixError",
    "pseudo_inverse",
    "spectral_radius",
    "scale_to_spectral_radius",
]


class DegenerateMatrixError(ValueError):
    """The matrix cannot support the requested operation (e.g. zero spectral radius)."""


def as_matrix(a, name="matrix"):
    """Coerce to a finite 2-D float64 array, rejecting NaN/Inf and empty axes."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"{name} must be 2-D with at least one row and column, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def pseudo_inverse(a):
    """Moore-Penrose pseudo-inverse computed through the SVD.

    Singular values below ``max(m, n) * eps * sigma_max`` are treated as
    zero, so rank-deficient inputs (including all-zero columns, which beta
    activations can produce) are handled without blow-up.
    """
    a = as_matrix(a)
    rcond = max(a.shape) * np.finfo(np.float64).eps
    return np.linalg.pinv(a, rcond=rcond)


def spectral_radius(a):
    """Largest eigenvalue modulus of a square matrix.

    Real matrices can carry complex conjugate eigenvalue pairs; the radius
    is the maximum complex modulus, the only reading under which a radius
    below 1 guarantees a contracting recurrence.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"spectral radius requires a square matrix, got shape {a.shape}")
    return float(np.max(np.abs(np.linalg.eigvals(a))))


def scale_to_spectral_radius(a, target):
    """Rescale ``a`` so its spectral radius equals ``target`` in (0, 1).

    A scalar multiply scales every eigenvalue linearly and preserves the
    zero pattern of ``a`` exactly. Raises :class:`DegenerateMatrixError`
    when the radius of ``a`` is zero (a nilpotent or zero matrix cannot be
    rescaled to a positive radius).
    """
    a = as_matrix(a)
    if not 0.0 < target < 1.0:
        raise ValueError(f"target spectral radius must lie in (0, 1), got {target}")
    rho = spectral_radius(a)
    if rho == 0.0:
        raise DegenerateMatrixError("matrix has spectral radius 0 and cannot be rescaled")
    return a * (target / rho)
