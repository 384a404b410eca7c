"""Dense vector/matrix helpers: p-norms, conjugate exponents, power iteration.

Vectors are 1-D float64 ndarrays, matrices 2-D square float64 ndarrays.
``math.inf`` is the only accepted spelling of an infinite exponent.
"""

import math

import numpy as np

from .errors import ConvergenceError, InvalidExponentError

__all__ = [
    "pnorm",
    "holder_conjugate",
    "matvec",
    "dominant_eigenvalue",
    "as_vector",
    "as_matrix",
]


def as_vector(v) -> np.ndarray:
    """Coerce to a finite 1-D float64 array."""
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"expected a nonempty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must be finite")
    return arr


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite square 2-D float64 array."""
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.size == 0:
        raise ValueError(f"expected a nonempty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


def pnorm(v, r: float) -> float:
    """Vector r-norm, r in [1, inf]; r=inf is the max norm."""
    if not (r >= 1.0):
        raise InvalidExponentError(f"norm exponent must be >= 1, got {r}")
    v = np.asarray(v, dtype=float)
    if v.size == 0:
        return 0.0
    if math.isinf(r):
        return float(np.max(np.abs(v)))
    if r == 1.0:
        return float(np.sum(np.abs(v)))
    if r == 2.0:
        return float(np.sqrt(np.dot(v, v)))
    # scale out the max entry so |v_i/s| <= 1 and the powers cannot overflow
    s = float(np.max(np.abs(v)))
    if s == 0.0:
        return 0.0
    return float(s * np.sum((np.abs(v) / s) ** r) ** (1.0 / r))


def holder_conjugate(p: float) -> float:
    """Exponent q with 1/p + 1/q = 1, for p in [1, 2]; p=1 maps to inf."""
    if not (1.0 <= p <= 2.0):
        raise InvalidExponentError(f"primal exponent must lie in [1, 2], got {p}")
    if p == 1.0:
        return math.inf
    return p / (p - 1.0)


def matvec(m, v) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    v = np.asarray(v, dtype=float)
    if m.ndim != 2 or m.shape[1] != v.shape[0]:
        raise ValueError(f"dimension mismatch: {m.shape} @ {v.shape}")
    return m @ v


def dominant_eigenvalue(m, tol: float = 1e-10, max_iter: int = 10_000) -> float:
    """Largest eigenvalue of a symmetric PSD matrix via power iteration.

    Starts from the all-ones vector so repeated calls are reproducible.
    Stops when the residual ||M x - lam x||_2 <= tol * max(lam, tiny),
    which certifies lam is within tol (relative) of an eigenvalue; for a
    PSD matrix whose dominant eigenspace is reachable from the all-ones
    start this is the largest one.
    """
    m = as_matrix(m)
    n = m.shape[0]
    x = np.ones(n) / math.sqrt(n)
    lam = 0.0
    for _ in range(max_iter):
        y = m @ x
        norm_y = float(np.linalg.norm(y))
        if norm_y == 0.0:
            raise ConvergenceError("power iteration start vector lies in the nullspace")
        lam = float(x @ y)
        x = y / norm_y
        residual = float(np.linalg.norm(m @ x - lam * x))
        if residual <= tol * max(abs(lam), np.finfo(float).tiny):
            if lam <= 0.0:
                raise ConvergenceError(f"matrix is not PSD: dominant estimate {lam}")
            return lam
    raise ConvergenceError(
        f"power iteration did not reach tol={tol} within {max_iter} iterations "
        f"(last estimate {lam})"
    )
