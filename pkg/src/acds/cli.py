"""Command-line entry point: run, sweep, verify, counterexample, bound.

Flags may also come from a flat JSON config file (--config); explicit flags
win on conflict. All randomness flows from --seed / --problem-seed, and the
infinite dual exponent is spelled ``inf``.
"""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .driver import (
    AcdsConfig,
    convergence_bound,
    initial_divergence,
    iterations_for_accuracy,
    rate_constant,
    run_acds,
)
from .errors import AcdsError, ConfigurationError
from .harness import ExperimentSpec, run_experiment, write_trace
from .linalg import holder_conjugate
from .oracle import quadratic_problem
from .prox import make_prox
from .sphere import ReplaySampler, SphereSampler
from .verify import (
    check_estimator_qnorm_moment,
    check_projection_identity,
    check_qnorm_moment,
    check_weighted_qnorm_moment,
    counterexample_experiment,
)

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acds",
        description="Accelerated random-direction search and its companion verifiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="single optimization run on the benchmark quadratic")
    run.add_argument("--problem", choices=["quadratic"], default=None)
    run.add_argument("--n", type=int, default=None)
    run.add_argument("--p", type=float, default=None)
    run.add_argument("--eps", type=float, default=None, help="target gap (needs known optimum)")
    run.add_argument("--iters", type=int, default=None, help="iteration cap")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--problem-seed", type=int, default=None)
    run.add_argument("--stride", type=int, default=None)
    run.add_argument("--out", type=str, default=None)
    run.add_argument("--config", type=str, default=None)

    sweep = sub.add_parser("sweep", help="multi-seed, multi-p experiment")
    sweep.add_argument("--n", type=int, default=None)
    sweep.add_argument("--p", type=str, default=None, help="comma-separated exponents, e.g. 1,1.8,2")
    sweep.add_argument("--seeds", type=str, default=None, help="comma list or a:b range")
    sweep.add_argument("--eps", type=float, default=None)
    sweep.add_argument("--iters", type=int, default=None)
    sweep.add_argument("--problem-seed", type=int, default=None)
    sweep.add_argument("--stride", type=int, default=None)
    sweep.add_argument("--out", type=str, default=None)
    sweep.add_argument("--config", type=str, default=None)
    sweep.add_argument(
        "--extended",
        action="store_true",
        help="paper-scale preset: n=1000, p in {1,2,1.8,1.9}, eps=1e-4 (minutes of runtime)",
    )

    verify = sub.add_parser("verify", help="Monte-Carlo checks of the sphere-moment bounds")
    verify.add_argument("--n", type=int, default=None)
    verify.add_argument("--q", type=float, default=None, help="dual exponent >= 2; inf allowed")
    verify.add_argument("--samples", type=int, default=None)
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--out", type=str, default=None, help="write the JSON report here")
    verify.add_argument("--config", type=str, default=None)

    ce = sub.add_parser("counterexample", help="constrained-step progress experiment on a box")
    ce.add_argument("--n", type=int, default=None)
    ce.add_argument("--half-width", type=float, default=None)
    ce.add_argument("--L", type=float, default=None)
    ce.add_argument("--samples", type=int, default=None)
    ce.add_argument("--seed", type=int, default=None)
    ce.add_argument("--out", type=str, default=None)
    ce.add_argument("--config", type=str, default=None)

    bound = sub.add_parser("bound", help="rate constant, initial divergence, bound values")
    bound.add_argument("--n", type=int, default=None)
    bound.add_argument("--p", type=float, default=None)
    bound.add_argument("--eps", type=float, default=None)
    bound.add_argument("--iters", type=int, default=None)
    bound.add_argument("--config", type=str, default=None)

    return parser


def _load_config(path):
    if path is None:
        return {}
    doc = json.loads(Path(path).read_text())
    if not isinstance(doc, dict):
        raise ConfigurationError("config file must hold a flat JSON object")
    return doc


class _Options:
    """Flag values merged over config-file values merged over defaults."""

    def __init__(self, args, config: dict):
        self._args = args
        self._config = config

    def get(self, key: str, default=None):
        flag = getattr(self._args, key, None)
        if flag is not None and flag is not False:
            return flag
        if key in self._config:
            return self._config[key]
        return default


def _parse_seeds(text: str) -> list:
    text = str(text)
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi)))
    return [int(chunk) for chunk in text.split(",") if chunk != ""]


def _parse_p_list(text) -> list:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(chunk) for chunk in str(text).split(",") if chunk != ""]


def _cmd_run(opts: _Options) -> int:
    n = int(opts.get("n", 10))
    p = float(opts.get("p", 1.0))
    seed = int(opts.get("seed", 0))
    problem_seed = int(opts.get("problem_seed", 1))
    eps = opts.get("eps")
    iters = opts.get("iters")
    out_dir = Path(opts.get("out", "."))
    problem = str(opts.get("problem", "quadratic"))
    if problem != "quadratic":  # argparse restricts the flag; config files reach here
        raise ConfigurationError(f"unknown problem kind {problem!r}")

    prob = quadratic_problem(n, problem_seed)
    P = make_prox(p, n)
    cfg = AcdsConfig(
        n=n,
        p=p,
        L=prob.L,
        seed=seed,
        max_iterations=None if iters is None else int(iters),
        target_gap=None if eps is None else float(eps),
        checkpoint_stride=opts.get("stride"),
    )
    d0 = initial_divergence(P, prob.x0, prob.x_star)
    print(f"run: problem=quadratic n={n} p={p:g} q={cfg.q:g} seed={seed} problem-seed={problem_seed}")
    print(f"rate constant C = {cfg.rate_const:.12g}")
    print(f"initial divergence = {d0:.12g}")

    rec = run_acds(
        prob.objective(),
        P,
        cfg,
        SphereSampler(n, seed),
        prob.x0,
        problem_info={"kind": "quadratic", "n": n, "problem_seed": problem_seed},
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    trace_path = out_dir / "trace.csv"
    write_trace(trace_path, rec.rows)
    meta = {
        "config": rec.config,
        "config_hash": rec.config_hash,
        "theta": rec.initial_divergence,
        "c_const": cfg.rate_const,
        "iterations": rec.iterations,
        "final_gap": rec.rows[-1][2],
        "oracle_calls": rec.rows[-1][3],
        "trace_path": trace_path.name,
    }
    (out_dir / "run.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    print(f"finished: iterations={rec.iterations} final_gap={rec.rows[-1][2]:.12g} "
          f"oracle_calls={rec.rows[-1][3]}")
    print(f"trace: {trace_path}")
    return 0


def _cmd_sweep(opts: _Options, extended: bool) -> int:
    if extended:
        n = int(opts.get("n", 1000))
        p_values = [1.0, 2.0, 1.8, 1.9]
        seeds = _parse_seeds(opts.get("seeds", "0"))[:1] or [0]
        eps, iters = 1e-4, int(opts.get("iters", 300_000))
    else:
        n = int(opts.get("n", 10))
        p_values = _parse_p_list(opts.get("p", "1,2"))
        seeds = _parse_seeds(opts.get("seeds", "0:20"))
        eps = opts.get("eps")
        iters = opts.get("iters")
    spec = ExperimentSpec(
        n=n,
        problem_seed=int(opts.get("problem_seed", 1)),
        p_values=p_values,
        seeds=seeds,
        out_dir=Path(opts.get("out", ".")),
        max_iterations=None if iters is None else int(iters),
        target_gap=None if eps is None else float(eps),
        checkpoint_stride=opts.get("stride"),
    )
    print(f"sweep: n={spec.n} p={','.join(f'{p:g}' for p in spec.p_values)} "
          f"seeds={len(spec.seeds)} problem-seed={spec.problem_seed}")
    summary = run_experiment(spec)
    print(f"completed runs: {summary.completed_runs}, failed: {summary.failed_runs}")
    for item in summary.iterations_to_target:
        print(f"p={item['p']:g}: reached target in {item['reached']} runs, "
              f"median iterations = {item['median']}")
    print(f"summary: {spec.out_dir / 'summary.json'}")
    return 0


def _json_q(q: float):
    return "inf" if math.isinf(q) else q


def _cmd_verify(opts: _Options) -> int:
    n = int(opts.get("n", 100))
    q = float(opts.get("q", 2.0))
    m = int(opts.get("samples", 100_000))
    seed = int(opts.get("seed", 0))
    out = opts.get("out")
    if n < 8:
        raise ConfigurationError(f"the moment-bound suite requires n >= 8, got {n}")
    if not (q >= 2.0):
        raise ConfigurationError(f"the moment bounds require q >= 2, got {q}")

    directions = SphereSampler(n, seed).sample_many(m)
    aux = np.random.default_rng([seed, 1])
    results = []

    def add(check: str, est, ref: float, ok: bool):
        results.append(
            {
                "check": check,
                "n": n,
                "q": _json_q(q),
                "samples": est.samples,
                "mean": est.mean,
                "stderr": est.stderr,
                "bound_or_target": ref,
                "pass": bool(ok),
            }
        )
        verdict = "PASS" if ok else "FAIL"
        print(f"{check}: n={n} q={q:g} samples={est.samples} mean={est.mean:.6g} "
              f"stderr={est.stderr:.3g} bound_or_target={ref:.6g} {verdict}")

    est, bound, ok = check_qnorm_moment(n, q, m, ReplaySampler(directions))
    add("qnorm-moment", est, bound, ok)
    for j in range(3):
        s = aux.normal(size=n)
        est, bound, ok = check_weighted_qnorm_moment(n, q, s, m, ReplaySampler(directions))
        add(f"weighted-qnorm-moment[{j}]", est, bound, ok)
    g = aux.normal(size=n)
    est, bound, ok = check_estimator_qnorm_moment(n, q, g, m, ReplaySampler(directions))
    add("estimator-qnorm-moment", est, bound, ok)
    s = aux.normal(size=n)
    est, target, ok = check_projection_identity(n, s, m, ReplaySampler(directions))
    add("projection-identity", est, target, ok)

    if out:
        Path(out).write_text(json.dumps(results, indent=2, sort_keys=True) + "\n")
        print(f"report: {out}")
    return 0 if all(r["pass"] for r in results) else 1


def _cmd_counterexample(opts: _Options) -> int:
    n = int(opts.get("n", 4))
    half_width = float(opts.get("half_width", 1e3))
    L = float(opts.get("L", 1.0))
    m = int(opts.get("samples", 100_000))
    seed = int(opts.get("seed", 0))
    out = opts.get("out")

    grad = np.ones(n) / math.sqrt(n)
    rep = counterexample_experiment(n, grad, half_width, L, m, SphereSampler(n, seed))
    sep = rep.difference.mean / rep.difference.stderr if rep.difference.stderr else math.inf
    res = rep.residual.mean / rep.residual.stderr if rep.residual.stderr else 0.0
    print(f"counterexample: n={n} half_width={half_width:g} L={L:g} samples={m} seed={seed}")
    print(f"scaled progress (lhs):   {rep.lhs.mean:.6g} +- {rep.lhs.stderr:.3g}")
    print(f"n^2 * plain drop (rhs):  {rep.rhs.mean:.6g} +- {rep.rhs.stderr:.3g}")
    print(f"lhs - rhs:               {rep.difference.mean:.6g} +- {rep.difference.stderr:.3g} "
          f"({sep:.1f} stderr)")
    print(f"residual <r, s - grad>:  {rep.residual.mean:.6g} +- {rep.residual.stderr:.3g} "
          f"({res:.1f} stderr)")
    print(f"identity max violation:  {rep.identity_max_abs:.3g}")
    print(f"scaling max violation:   {rep.scaling_max_abs:.3g}")
    exceeds = rep.difference.mean > 3.0 * rep.difference.stderr
    negative = rep.residual.mean < -3.0 * rep.residual.stderr
    print(f"scaled progress exceeds the unconstrained identity: {'YES' if exceeds and negative else 'NO'}")
    if out:
        doc = {
            "n": n,
            "half_width": half_width,
            "L": L,
            "samples": m,
            "seed": seed,
            "lhs": {"mean": rep.lhs.mean, "stderr": rep.lhs.stderr},
            "rhs": {"mean": rep.rhs.mean, "stderr": rep.rhs.stderr},
            "difference": {"mean": rep.difference.mean, "stderr": rep.difference.stderr},
            "residual": {"mean": rep.residual.mean, "stderr": rep.residual.stderr},
            "identity_max_abs": rep.identity_max_abs,
            "scaling_max_abs": rep.scaling_max_abs,
            "clipped_fraction": rep.clipped_fraction,
            "pass": bool(exceeds and negative),
        }
        Path(out).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        print(f"report: {out}")
    return 0


def _cmd_bound(opts: _Options) -> int:
    n = int(opts.get("n", 10))
    p = float(opts.get("p", 1.0))
    eps = opts.get("eps")
    iters = opts.get("iters")

    q = holder_conjugate(p)
    C = rate_constant(n, q)
    P = make_prox(p, n)
    prob_x0 = np.zeros(n)
    prob_x0[-1] = 1.0
    prob_xs = np.zeros(n)
    prob_xs[0] = 1.0
    d0 = initial_divergence(P, prob_x0, prob_xs)
    print(f"n={n} p={p:g} q={q:g}")
    print(f"C = {C:.12g}")
    print(f"theta (benchmark endpoints) = {d0:.12g}")
    if eps is not None:
        N = iterations_for_accuracy(d0, 1.0, C, float(eps))
        print(f"iterations for eps={float(eps):g}: N = {N}")
    if iters is not None:
        b = convergence_bound(d0, 1.0, C, int(iters))
        b1 = convergence_bound(d0, 1.0, C, int(iters), plus_one=True)
        print(f"bound at N={int(iters)}: {b:.12g} (with (N+1)^2: {b1:.12g})")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        opts = _Options(args, _load_config(getattr(args, "config", None)))
        if args.command == "run":
            return _cmd_run(opts)
        if args.command == "sweep":
            return _cmd_sweep(opts, extended=bool(getattr(args, "extended", False)))
        if args.command == "verify":
            return _cmd_verify(opts)
        if args.command == "counterexample":
            return _cmd_counterexample(opts)
        if args.command == "bound":
            return _cmd_bound(opts)
        parser.error(f"unknown command {args.command!r}")
    except (AcdsError, OSError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
