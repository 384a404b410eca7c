"""Objective abstraction (value + directional derivative) and the benchmark quadratic."""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .linalg import dominant_eigenvalue

__all__ = [
    "Objective",
    "QuadraticProblem",
    "quadratic_problem",
    "quad_value",
    "quad_dir_deriv",
    "model_quadratic",
    "fd_check",
]


@dataclass(frozen=True)
class QuadraticProblem:
    """f(x) = 1/2 <x - x_star, B (x - x_star)> with B symmetric PSD, lam_max(B) = 1.

    The canonical instance starts at x0 = (0, ..., 0, 1) with minimizer
    x_star = (1, 0, ..., 0), so the gradient Lipschitz constant is L = 1.
    """

    B: np.ndarray
    x_star: np.ndarray
    x0: np.ndarray
    L: float = 1.0

    @property
    def n(self) -> int:
        return self.x_star.shape[0]

    def objective(self) -> "Objective":
        return Objective(
            value=lambda x: quad_value(self, x),
            dir_deriv=lambda x, e: quad_dir_deriv(self, x, e),
            L=self.L,
            optimum=(self.x_star, 0.0),
            quadratic=self,
        )


@dataclass(frozen=True)
class Objective:
    """Value plus directional-derivative oracle.

    dir_deriv(x, e) returns <grad f(x), e>; L is the Lipschitz constant of
    grad f in the 2-norm; optimum, when known, is (x_star, f_star). A
    quadratic payload, when present, lets the solver keep incremental
    matrix-vector products instead of evaluating from scratch.
    """

    value: Callable[[np.ndarray], float]
    dir_deriv: Callable[[np.ndarray, np.ndarray], float]
    L: float
    optimum: Optional[tuple] = None
    quadratic: Optional[QuadraticProblem] = None


def quadratic_problem(n: int, seed: int) -> QuadraticProblem:
    """Random benchmark instance: B = A^T A / lam_max(A^T A), A ~ iid U[0,1)."""
    if n < 2:
        raise ValueError(f"benchmark dimension must be >= 2, got {n}")
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    A = rng.random((n, n))
    M = A.T @ A
    M = 0.5 * (M + M.T)  # bitwise symmetry regardless of BLAS blocking
    lam = dominant_eigenvalue(M, tol=1e-10)
    B = M / lam
    x_star = np.zeros(n)
    x_star[0] = 1.0
    x0 = np.zeros(n)
    x0[-1] = 1.0
    return QuadraticProblem(B=B, x_star=x_star, x0=x0, L=1.0)


def quad_value(Q: QuadraticProblem, x) -> float:
    d = np.asarray(x, dtype=float) - Q.x_star
    return 0.5 * float(d @ (Q.B @ d))


def quad_dir_deriv(Q: QuadraticProblem, x, e) -> float:
    d = np.asarray(x, dtype=float) - Q.x_star
    return float((Q.B @ d) @ np.asarray(e, dtype=float))


def model_quadratic(x_c, g_c, f_c: float, L: float) -> Objective:
    """Exact local quadratic model: f_c + <g_c, y - x_c> + (L/2)||y - x_c||_2^2."""
    if L <= 0.0:
        raise ValueError(f"curvature must be positive, got {L}")
    x_c = np.asarray(x_c, dtype=float)
    g_c = np.asarray(g_c, dtype=float)

    def value(y):
        d = np.asarray(y, dtype=float) - x_c
        return f_c + float(g_c @ d) + 0.5 * L * float(d @ d)

    def dir_deriv(y, e):
        d = np.asarray(y, dtype=float) - x_c
        return float((g_c + L * d) @ np.asarray(e, dtype=float))

    return Objective(value=value, dir_deriv=dir_deriv, L=L)


def fd_check(obj: Objective, x, e, h: float = 1e-6) -> float:
    """Relative disagreement between dir_deriv and a central finite difference."""
    x = np.asarray(x, dtype=float)
    e = np.asarray(e, dtype=float)
    dd = obj.dir_deriv(x, e)
    central = (obj.value(x + h * e) - obj.value(x - h * e)) / (2.0 * h)
    return abs(dd - central) / max(1.0, abs(dd))
