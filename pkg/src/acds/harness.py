"""Experiment orchestration: multi-seed sweeps, aggregation, trace serialization.

File contracts:
  trace CSV   header ``k,f_y,gap,oracle_calls,elapsed_ms``, one row per checkpoint
  bound CSV   header ``N,bound_n2,bound_n1sq`` (N^2 and (N+1)^2 denominators)
  summary     JSON with the spec echo, one record per run, and the aggregates
All floats are written with 17 significant digits so traces are exact to reread.
"""

import json
import math
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .driver import AcdsConfig, convergence_bound, initial_divergence, run_acds
from .errors import AcdsError, ConfigurationError
from .oracle import quadratic_problem
from .prox import make_prox
from .sphere import SphereSampler

__all__ = [
    "TRACE_HEADER",
    "BOUND_HEADER",
    "ExperimentSpec",
    "AggregateSummary",
    "run_experiment",
    "bound_curve",
    "write_trace",
    "write_bound_curve",
]

TRACE_HEADER = "k,f_y,gap,oracle_calls,elapsed_ms"
BOUND_HEADER = "N,bound_n2,bound_n1sq"


@dataclass
class ExperimentSpec:
    """One sweep: a problem instance crossed with prox exponents and solver seeds."""

    n: int
    problem_seed: int
    p_values: list
    seeds: list
    out_dir: Path
    max_iterations: Optional[int] = None
    target_gap: Optional[float] = None
    checkpoint_stride: Optional[int] = None
    problem: str = "quadratic"

    def __post_init__(self):
        if self.problem != "quadratic":
            raise ConfigurationError(f"unknown problem kind {self.problem!r}")
        if not self.p_values or not all(1.0 <= p <= 2.0 for p in self.p_values):
            raise ConfigurationError("p_values must be a nonempty list within [1, 2]")
        if not self.seeds:
            raise ConfigurationError("need at least one solver seed")
        if self.max_iterations is None and self.target_gap is None:
            raise ConfigurationError("need max_iterations, a target gap, or both")
        self.out_dir = Path(self.out_dir)

    def echo(self) -> dict:
        return {
            "problem": self.problem,
            "n": self.n,
            "problem_seed": self.problem_seed,
            "p_values": list(self.p_values),
            "seeds": list(self.seeds),
            "max_iterations": self.max_iterations,
            "target_gap": self.target_gap,
            "checkpoint_stride": self.checkpoint_stride,
        }


@dataclass
class AggregateSummary:
    """Pure function of the emitted traces.

    gap_stats: per (p, checkpoint) mean/median/min/max over the runs that
    reached that checkpoint; iterations_to_target: per p, the per-seed first
    checkpoint at (or below) the target gap and their median.
    """

    gap_stats: list = field(default_factory=list)
    iterations_to_target: list = field(default_factory=list)
    completed_runs: int = 0
    failed_runs: int = 0


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def write_trace(path: Path, rows):
    lines = [TRACE_HEADER]
    for k, fy, gap, calls, ms in rows:
        lines.append(f"{k},{_fmt(fy)},{_fmt(gap)},{calls},{ms:.3f}")
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def bound_curve(d0: float, L: float, C: float, checkpoints) -> list:
    """(N, 4*d0*L*C/N^2) at each checkpoint; monotone decreasing."""
    return [(int(N), convergence_bound(d0, L, C, int(N))) for N in checkpoints]


def write_bound_curve(path: Path, d0: float, L: float, C: float, checkpoints):
    lines = [BOUND_HEADER]
    for N in checkpoints:
        b2 = convergence_bound(d0, L, C, int(N))
        b1 = convergence_bound(d0, L, C, int(N), plus_one=True)
        lines.append(f"{int(N)},{_fmt(b2)},{_fmt(b1)}")
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def trace_filename(p: float, seed: int) -> str:
    return f"trace_p{p:g}_seed{seed}.csv"


def run_experiment(spec: ExperimentSpec) -> AggregateSummary:
    """Execute the sweep, write per-run traces, bound curves, and summary.json.

    All runs share one problem instance; for a given solver seed the sampled
    direction sequence is identical across p values (each run builds a fresh
    sampler from the same seed), so prox structures are compared on the same
    randomness. Per-run solver failures are recorded in the summary without
    aborting the sweep.
    """
    spec.out_dir.mkdir(parents=True, exist_ok=True)
    prob = quadratic_problem(spec.n, spec.problem_seed)
    obj = prob.objective()

    runs = []
    summary = AggregateSummary()
    gaps = {}  # (p, k) -> list of gaps
    iters_to_target = {}  # p -> {seed: k or None}

    for p in spec.p_values:
        P = make_prox(p, spec.n)
        d0 = initial_divergence(P, prob.x0, prob.x_star)
        checkpoints = None
        for seed in spec.seeds:
            cfg = AcdsConfig(
                n=spec.n,
                p=p,
                L=prob.L,
                seed=seed,
                max_iterations=spec.max_iterations,
                target_gap=spec.target_gap,
                checkpoint_stride=spec.checkpoint_stride,
            )
            entry = {"seed": seed, "p": p, "theta": d0, "c_const": cfg.rate_const}
            try:
                rec = run_acds(
                    obj,
                    P,
                    cfg,
                    SphereSampler(spec.n, seed),
                    prob.x0,
                    problem_info={
                        "kind": spec.problem,
                        "n": spec.n,
                        "problem_seed": spec.problem_seed,
                    },
                )
            except AcdsError as exc:
                entry["error"] = f"{type(exc).__name__}: {exc}"
                summary.failed_runs += 1
                runs.append(entry)
                continue

            name = trace_filename(p, seed)
            write_trace(spec.out_dir / name, rec.rows)
            entry.update(
                iterations=rec.iterations,
                final_gap=rec.rows[-1][2],
                trace_path=name,
                config_hash=rec.config_hash,
            )
            runs.append(entry)
            summary.completed_runs += 1

            for k, _, gap, _, _ in rec.rows:
                gaps.setdefault((p, k), []).append(gap)
            if spec.target_gap is not None:
                hit = next((k for k, _, g, _, _ in rec.rows if g <= spec.target_gap), None)
                iters_to_target.setdefault(p, {})[seed] = hit
            if checkpoints is None:
                checkpoints = [k for k, *_ in rec.rows if k >= 1]

        if checkpoints:
            write_bound_curve(
                spec.out_dir / f"bound_p{p:g}.csv", d0, prob.L, cfg.rate_const, checkpoints
            )

    for (p, k) in sorted(gaps, key=lambda t: (t[0], t[1])):
        vals = gaps[(p, k)]
        summary.gap_stats.append(
            {
                "p": p,
                "k": k,
                "runs": len(vals),
                "mean": statistics.fmean(vals),
                "median": statistics.median(vals),
                "min": min(vals),
                "max": max(vals),
            }
        )
    if spec.target_gap is not None:
        for p in spec.p_values:
            per_seed = iters_to_target.get(p, {})
            reached = [v for v in per_seed.values() if v is not None]
            summary.iterations_to_target.append(
                {
                    "p": p,
                    "per_seed": {str(s): per_seed.get(s) for s in spec.seeds},
                    "reached": len(reached),
                    "median": statistics.median(reached) if reached else None,
                }
            )

    doc = {
        "spec": spec.echo(),
        "runs": runs,
        "aggregates": {
            "gap_stats": summary.gap_stats,
            "iterations_to_target": summary.iterations_to_target,
            "completed_runs": summary.completed_runs,
            "failed_runs": summary.failed_runs,
        },
    }
    (spec.out_dir / "summary.json").write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n"
    )
    return summary
