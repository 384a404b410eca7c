"""Prox-structures, Bregman divergences, mirror maps, and the mirror step.

The distance generator is d(x) = ||x||_a^2 / (2(a-1)) with a in (1, 2],
which is 1-strongly convex with respect to the a-norm. For a primal
exponent p in (1, 2] we take a = p; for p = 1 the smoothing exponent
a = 2 ln n / (2 ln n - 1) keeps d differentiable while staying within a
constant factor (1/e) of the 1-norm geometry.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, InvalidExponentError, SolverError
from .linalg import pnorm

__all__ = [
    "ProxStructure",
    "make_prox",
    "prox_value",
    "mirror_map",
    "inverse_mirror_map",
    "bregman",
    "mirror_step",
    "mirror_step_bisection",
]


@dataclass(frozen=True)
class ProxStructure:
    """Exponents defining one prox geometry; immutable and freely shareable.

    p: primal exponent in [1, 2]
    a: smoothing exponent in (1, 2]; equals p for p > 1
    b: dual exponent a/(a-1)
    n: dimension
    scale: 1 / (2(a-1)), the coefficient of ||x||_a^2 in d
    """

    p: float
    a: float
    b: float
    n: int
    scale: float


def make_prox(p: float, n: int) -> ProxStructure:
    """Prox structure for primal exponent p in dimension n."""
    if not (1.0 <= p <= 2.0):
        raise InvalidExponentError(f"primal exponent must lie in [1, 2], got {p}")
    n = int(n)
    if n < 1:
        raise ConfigurationError(f"dimension must be positive, got {n}")
    if p == 1.0:
        if n < 2:
            raise ConfigurationError("the 1-norm prox structure needs dimension >= 2")
        # a = 2 ln n / (2 ln n - 1); for n = 2 the formula exceeds 2, where the
        # family stops being 1-strongly convex in its own norm, so clamp to the
        # Euclidean endpoint (n >= 3 never clamps).
        a = min(2.0, 2.0 * math.log(n) / (2.0 * math.log(n) - 1.0))
    else:
        a = p
    b = a / (a - 1.0)
    return ProxStructure(p=p, a=a, b=b, n=n, scale=1.0 / (2.0 * (a - 1.0)))


def _check_dim(P: ProxStructure, v: np.ndarray):
    if v.shape != (P.n,):
        raise ValueError(f"expected shape ({P.n},), got {v.shape}")


def prox_value(P: ProxStructure, x) -> float:
    """d(x) = scale * ||x||_a^2."""
    x = np.asarray(x, dtype=float)
    _check_dim(P, x)
    return P.scale * pnorm(x, P.a) ** 2


def mirror_map(P: ProxStructure, x) -> np.ndarray:
    """Gradient of d at x.

    grad_i = (1/(a-1)) * ||x||_a^(2-a) * |x_i|^(a-1) * sign(x_i);
    the continuous extension at the origin is 0.
    """
    x = np.asarray(x, dtype=float)
    _check_dim(P, x)
    if P.a == 2.0:
        return x.copy()
    s = float(np.max(np.abs(x)))
    if s == 0.0:
        return np.zeros_like(x)
    u = np.abs(x) / s
    norm_u = np.sum(u ** P.a) ** (1.0 / P.a)
    # pulled the max entry out of both factors: s^(2-a) * s^(a-1) = s
    return (s / (P.a - 1.0)) * norm_u ** (2.0 - P.a) * u ** (P.a - 1.0) * np.sign(x)


def inverse_mirror_map(P: ProxStructure, g) -> np.ndarray:
    """Inverse of mirror_map: x_i = (a-1) * ||g||_b^(2-b) * |g_i|^(b-1) * sign(g_i)."""
    g = np.asarray(g, dtype=float)
    _check_dim(P, g)
    if P.a == 2.0:
        return g.copy()
    s = float(np.max(np.abs(g)))
    if s == 0.0:
        return np.zeros_like(g)
    u = np.abs(g) / s
    norm_u = np.sum(u ** P.b) ** (1.0 / P.b)
    return (P.a - 1.0) * s * norm_u ** (2.0 - P.b) * u ** (P.b - 1.0) * np.sign(g)


def bregman(P: ProxStructure, z, y) -> float:
    """Bregman divergence V_z(y) = d(y) - d(z) - <grad d(z), y - z>."""
    z = np.asarray(z, dtype=float)
    y = np.asarray(y, dtype=float)
    return prox_value(P, y) - prox_value(P, z) - float(mirror_map(P, z) @ (y - z))


def mirror_step(P: ProxStructure, z, v, alpha: float) -> np.ndarray:
    """Minimizer over R^n of alpha*<v, y - z> + V_z(y).

    Solved in closed form through the dual map: grad d(z') = grad d(z) - alpha*v.
    """
    z = np.asarray(z, dtype=float)
    if alpha < 0.0:
        raise ConfigurationError(f"step weight must be nonnegative, got {alpha}")
    if alpha == 0.0:
        return z.copy()
    v = np.asarray(v, dtype=float)
    _check_dim(P, v)
    return inverse_mirror_map(P, mirror_map(P, z) - alpha * v)


def mirror_step_bisection(P: ProxStructure, z, v, alpha: float, tol: float = 1e-6) -> np.ndarray:
    """Same minimizer as mirror_step, found by one-dimensional bisection.

    The stationarity condition grad d(y) = w (w = grad d(z) - alpha*v) fixes
    sign(y_i) = sign(w_i) and, once t = ||y||_a is known,
    |y_i| = ((a-1) |w_i| t^(a-2))^(1/(a-1)). Consistency of t with the norm of
    the reconstructed y is a scalar root-finding problem in t, monotone
    increasing, and is bisected to a tolerance one order finer than ``tol``.
    Kept as an independent slow path for checking the closed-form solver.
    """
    if tol <= 0.0:
        raise ConfigurationError(f"tolerance must be positive, got {tol}")
    z = np.asarray(z, dtype=float)
    if alpha < 0.0:
        raise ConfigurationError(f"step weight must be nonnegative, got {alpha}")
    if alpha == 0.0:
        return z.copy()
    v = np.asarray(v, dtype=float)
    _check_dim(P, v)
    w = mirror_map(P, z) - alpha * v
    wabs = np.abs(w)
    if not np.any(wabs > 0.0):
        return np.zeros_like(z)

    a = P.a

    def reconstruct(t: float) -> np.ndarray:
        return ((a - 1.0) * wabs * t ** (a - 2.0)) ** (1.0 / (a - 1.0))

    def gap(t: float) -> float:
        return t - pnorm(reconstruct(t), a)

    lo = hi = 1.0
    for _ in range(200):
        if gap(lo) < 0.0:
            break
        lo *= 0.5
    else:
        raise SolverError(f"no lower bracket for the norm equation (lo={lo}, gap={gap(lo)})")
    for _ in range(200):
        if gap(hi) > 0.0:
            break
        hi *= 2.0
    else:
        raise SolverError(f"no upper bracket for the norm equation (hi={hi}, gap={gap(hi)})")

    target = 0.1 * tol
    while hi - lo > target * max(1.0, lo):
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    return reconstruct(t) * np.sign(w)
