"""Monte-Carlo verifiers for the sphere-moment bounds and the constrained-step experiment.

The moment checks estimate expectations over directions uniform on the unit
sphere and compare them against the closed-form bounds that drive the rate
constant. The box experiment measures the one-step progress functional on a
box whose facet passes through the current point and demonstrates that the
scaled estimator's expected progress exceeds n^2 times the expected plain
progress, so the unconstrained argument does not carry over to constrained
problems.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .sphere import SphereSampler

__all__ = [
    "McEstimate",
    "BoxRegion",
    "CounterexampleReport",
    "project_box",
    "prog",
    "counterexample_experiment",
    "check_qnorm_moment",
    "check_weighted_qnorm_moment",
    "check_estimator_qnorm_moment",
    "check_projection_identity",
    "qnorm_moment_samples",
    "weighted_qnorm_samples",
    "estimator_qnorm_samples",
    "projection_samples",
]

_BATCH = 20_000  # rows sampled at a time; bounds peak memory at ~80 MB for n=512
_FP_GUARD = 1e-12  # pure floating-point allowance for exact-identity checks


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    samples: int

    @classmethod
    def from_samples(cls, values: np.ndarray) -> "McEstimate":
        values = np.asarray(values, dtype=float)
        m = values.size
        se = float(np.std(values, ddof=1) / math.sqrt(m)) if m > 1 else 0.0
        return cls(mean=float(np.mean(values)), stderr=se, samples=m)


@dataclass(frozen=True)
class BoxRegion:
    """Axis-aligned box; entries of lower/upper may be -inf/+inf."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ConfigurationError(f"bound shapes differ: {lo.shape} vs {hi.shape}")
        if not np.all(lo <= hi):
            raise ConfigurationError("box is empty: lower > upper somewhere")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


def project_box(Q: BoxRegion, x) -> np.ndarray:
    """Componentwise clip of x into the box; idempotent."""
    return np.clip(np.asarray(x, dtype=float), Q.lower, Q.upper)


def prog(s, x, Q: BoxRegion, L: float) -> float:
    """One-step progress functional -min_{y in Q} {<s, y-x> + (L/2)||y-x||^2}.

    Computed through the projection y_hat = clip(x - s/L):
    ||s||^2/(2L) - (L/2) ||y_hat - (x - s/L)||^2. Nonnegative since y = x
    is feasible.
    """
    s = np.asarray(s, dtype=float)
    x = np.asarray(x, dtype=float)
    if not Q.contains(x):
        raise ConfigurationError("base point lies outside the region")
    target = x - s / L
    y_hat = project_box(Q, target)
    miss = y_hat - target
    return float(s @ s) / (2.0 * L) - 0.5 * L * float(miss @ miss)


@dataclass(frozen=True)
class CounterexampleReport:
    """Estimates from the box experiment.

    lhs: E Prog with the n-scaled estimator; rhs: n^2 (f(x) - E f(y));
    difference: lhs - rhs per sample; residual: E <r, s - grad f(x)> where
    r is the projection miss. identity_max_abs is the largest per-sample
    violation of the exact progress decomposition; scaling_max_abs the
    largest violation of Prog(n s) = n^2 Prog(s).
    """

    lhs: McEstimate
    rhs: McEstimate
    difference: McEstimate
    residual: McEstimate
    identity_max_abs: float
    scaling_max_abs: float
    clipped_fraction: float


def counterexample_experiment(
    n: int,
    grad,
    half_width: float,
    L: float,
    m: int,
    sampler: SphereSampler,
) -> CounterexampleReport:
    """Sample the progress functional on a box facet centered at the current point.

    The local model around x = 0 is f(y) = <grad, y> + (L/2)||y||^2 and the box
    extends half_width sideways and 2*half_width away from the facet on the side
    the gradient points into, so its unconstrained minimizer -grad/L exits
    through the facet and only that constraint can bind.
    """
    grad = np.asarray(grad, dtype=float)
    if grad.shape != (n,) or not np.any(grad != 0.0):
        raise ConfigurationError("gradient must be a nonzero vector of length n")
    if grad[-1] == 0.0:
        raise ConfigurationError("gradient needs a nonzero component normal to the facet")
    if half_width <= 0.0 or L <= 0.0 or m < 2:
        raise ConfigurationError("need half_width > 0, L > 0, m >= 2")
    reach = n * float(np.linalg.norm(grad)) / L
    if reach >= half_width:
        raise ConfigurationError(
            f"half_width {half_width} too small: steps reach {reach}, side constraints could bind"
        )
    if sampler.dim != n:
        raise ConfigurationError(f"sampler dimension {sampler.dim} != n={n}")

    lower = np.full(n, -half_width)
    upper = np.full(n, half_width)
    if grad[-1] > 0.0:
        lower[-1], upper[-1] = 0.0, 2.0 * half_width
    else:
        lower[-1], upper[-1] = -2.0 * half_width, 0.0
    Q = BoxRegion(lower, upper)

    lhs = np.empty(m)
    progress = np.empty(m)
    residual = np.empty(m)
    identity_max = 0.0
    scaling_max = 0.0
    clipped = 0

    done = 0
    while done < m:
        batch = min(_BATCH, m - done)
        E = sampler.sample_many(batch)
        c = E @ grad  # <grad, e> per sample
        s = c[:, None] * E
        target = -s / L  # x - s/L with x = 0
        y = np.clip(target, lower, upper)
        r = y - target
        target_n = -(n / L) * s
        y_n = np.clip(target_n, lower, upper)
        r_n = y_n - target_n

        fy = y @ grad + 0.5 * L * np.einsum("ij,ij->i", y, y)
        f_drop = -fy  # f(x) - f(y) with f(x) = 0
        rr = np.einsum("ij,ij->i", r, r)
        rr_n = np.einsum("ij,ij->i", r_n, r_n)
        res = np.einsum("ij,ij->i", r, s - grad[None, :])
        lhs_batch = (n * c) ** 2 / (2.0 * L) - 0.5 * L * rr_n
        prog_plain = c**2 / (2.0 * L) - 0.5 * L * rr

        identity_max = max(identity_max, float(np.max(np.abs(prog_plain + res - f_drop))))
        scaling_max = max(scaling_max, float(np.max(np.abs(lhs_batch - n**2 * prog_plain))))
        clipped += int(np.count_nonzero(rr > 0.0))

        sl = slice(done, done + batch)
        lhs[sl] = lhs_batch
        progress[sl] = f_drop
        residual[sl] = res
        done += batch

    rhs = n**2 * progress
    return CounterexampleReport(
        lhs=McEstimate.from_samples(lhs),
        rhs=McEstimate.from_samples(rhs),
        difference=McEstimate.from_samples(lhs - rhs),
        residual=McEstimate.from_samples(residual),
        identity_max_abs=identity_max,
        scaling_max_abs=scaling_max,
        clipped_fraction=clipped / m,
    )


def _qnorm_sq_rows(E: np.ndarray, q: float) -> np.ndarray:
    """Squared q-norm of each row."""
    if math.isinf(q):
        return np.max(np.abs(E), axis=1) ** 2
    if q == 2.0:
        return np.einsum("ij,ij->i", E, E)
    if q == 4.0:  # repeated squaring beats a float-exponent pow by ~10x
        sq = E * E
        return np.sqrt(np.einsum("ij,ij->i", sq, sq))
    return np.sum(np.abs(E) ** q, axis=1) ** (2.0 / q)


def _batched(m: int, sampler: SphereSampler, stat):
    out = np.empty(m)
    done = 0
    while done < m:
        batch = min(_BATCH, m - done)
        out[done : done + batch] = stat(sampler.sample_many(batch))
        done += batch
    return out


def qnorm_moment_samples(q: float, m: int, sampler: SphereSampler) -> np.ndarray:
    """Per-draw ||e||_q^2."""
    return _batched(m, sampler, lambda E: _qnorm_sq_rows(E, q))


def weighted_qnorm_samples(q: float, s, m: int, sampler: SphereSampler) -> np.ndarray:
    """Per-draw <s, e>^2 ||e||_q^2."""
    s = np.asarray(s, dtype=float)
    return _batched(m, sampler, lambda E: (E @ s) ** 2 * _qnorm_sq_rows(E, q))


def estimator_qnorm_samples(q: float, gradient, m: int, sampler: SphereSampler) -> np.ndarray:
    """Per-draw ||n <g, e> e||_q^2 for the scaled estimator, n = sampler.dim."""
    g = np.asarray(gradient, dtype=float)
    n = sampler.dim
    return _batched(m, sampler, lambda E: (n * (E @ g)) ** 2 * _qnorm_sq_rows(E, q))


def projection_samples(s, m: int, sampler: SphereSampler) -> np.ndarray:
    """Per-draw <s, e>^2."""
    s = np.asarray(s, dtype=float)
    return _batched(m, sampler, lambda E: (E @ s) ** 2)


def _require_moment_regime(n: int, q: float):
    if n < 8:
        raise ConfigurationError(f"the moment bounds require n >= 8, got {n}")
    if not (q >= 2.0):
        raise ConfigurationError(f"the moment bounds require q >= 2, got {q}")


def check_qnorm_moment(n: int, q: float, m: int, sampler: SphereSampler):
    """E||e||_q^2 <= min(q-1, 16 ln n - 8) n^(2/q - 1); one-sided 3-stderr rule."""
    _require_moment_regime(n, q)
    est = McEstimate.from_samples(qnorm_moment_samples(q, m, sampler))
    bound = min(q - 1.0, 16.0 * math.log(n) - 8.0) * n ** (2.0 / q - 1.0)
    return est, bound, est.mean - 3.0 * est.stderr <= bound + _FP_GUARD * max(1.0, bound)


def check_weighted_qnorm_moment(n: int, q: float, s, m: int, sampler: SphereSampler):
    """E<s,e>^2 ||e||_q^2 <= sqrt(3) ||s||^2 min(2q-1, 32 ln n - 8) n^(2/q - 2)."""
    _require_moment_regime(n, q)
    s = np.asarray(s, dtype=float)
    est = McEstimate.from_samples(weighted_qnorm_samples(q, s, m, sampler))
    bound = (
        math.sqrt(3.0)
        * float(s @ s)
        * min(2.0 * q - 1.0, 32.0 * math.log(n) - 8.0)
        * n ** (2.0 / q - 2.0)
    )
    return est, bound, est.mean - 3.0 * est.stderr <= bound + _FP_GUARD * max(1.0, bound)


def check_estimator_qnorm_moment(n: int, q: float, gradient, m: int, sampler: SphereSampler):
    """E||n <g,e> e||_q^2 <= sqrt(3) min(2q-1, 32 ln n - 8) n^(2/q) ||g||^2."""
    _require_moment_regime(n, q)
    g = np.asarray(gradient, dtype=float)
    est = McEstimate.from_samples(estimator_qnorm_samples(q, g, m, sampler))
    bound = (
        math.sqrt(3.0)
        * min(2.0 * q - 1.0, 32.0 * math.log(n) - 8.0)
        * n ** (2.0 / q)
        * float(g @ g)
    )
    return est, bound, est.mean - 3.0 * est.stderr <= bound + _FP_GUARD * max(1.0, bound)


def check_projection_identity(n: int, s, m: int, sampler: SphereSampler):
    """E<s,e>^2 = ||s||^2/n exactly; two-sided 3-stderr rule.

    A small epsilon allowance covers the degenerate n = 1 case where every
    sample equals the target and the standard error underflows rounding.
    """
    s = np.asarray(s, dtype=float)
    if not np.any(s != 0.0):
        raise ConfigurationError("reference vector must be nonzero")
    est = McEstimate.from_samples(projection_samples(s, m, sampler))
    target = float(s @ s) / n
    tol = 3.0 * est.stderr + _FP_GUARD * max(1.0, abs(target))
    return est, target, abs(est.mean - target) <= tol
