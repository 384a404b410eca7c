"""Acceptance suite: one test per gate criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict lines.
"""

import json
import math
import statistics

import numpy as np
import pytest

from acds import (
    AcdsConfig,
    ReplaySampler,
    SphereSampler,
    bregman,
    check_estimator_qnorm_moment,
    check_projection_identity,
    check_qnorm_moment,
    check_weighted_qnorm_moment,
    convergence_bound,
    counterexample_experiment,
    initial_divergence,
    inverse_mirror_map,
    make_prox,
    mirror_map,
    mirror_step,
    mirror_step_bisection,
    quadratic_problem,
    rate_constant,
    run_acds,
    schedule,
)
from acds.cli import main as cli_main
from acds.linalg import holder_conjugate, pnorm
from acds.verify import estimator_qnorm_samples, weighted_qnorm_samples

PROBLEM_SEED = 1


def _report(name: str, ok: bool, detail: str = ""):
    suffix = f" ({detail})" if detail else ""
    print(f"[{'PASS' if ok else 'FAIL'}] {name}{suffix}")
    assert ok, f"{name}{suffix}"


def test_expected_gap_below_theoretical_bound():
    """Mean gap over 100 seeds stays below 4*theta*L*C/N^2 at N = 100..1000 for p in {1, 2}."""
    n = 10
    checkpoints = list(range(100, 1001, 100))
    prob = quadratic_problem(n, PROBLEM_SEED)
    obj = prob.objective()
    worst = ("", 0.0)
    ok = True
    for p in (1.0, 2.0):
        P = make_prox(p, n)
        d0 = initial_divergence(P, prob.x0, prob.x_star)
        C = rate_constant(n, holder_conjugate(p))
        gaps = np.zeros((100, len(checkpoints)))
        for seed in range(100):
            cfg = AcdsConfig(n=n, p=p, L=1.0, seed=seed, max_iterations=1000,
                             checkpoint_stride=100)
            rec = run_acds(obj, P, cfg, SphereSampler(n, seed), prob.x0)
            by_k = {row[0]: row[2] for row in rec.rows}
            gaps[seed] = [by_k[k] for k in checkpoints]
        means = gaps.mean(axis=0)
        for N, mean_gap in zip(checkpoints, means):
            bound = convergence_bound(d0, 1.0, C, N)
            ratio = mean_gap / bound
            if ratio > worst[1]:
                worst = (f"p={p:g} N={N}", ratio)
            ok &= mean_gap <= bound
    _report("theorem bound in expectation (n=10, 100 seeds, p in {1,2})", ok,
            f"worst mean/bound ratio {worst[1]:.3f} at {worst[0]}")


def test_desk_scale_iterations_to_tolerance():
    """20-seed median of iterations to gap <= 1e-3 on the n=10 benchmark is <= 2500 (p=1)."""
    n = 10
    prob = quadratic_problem(n, PROBLEM_SEED)
    obj = prob.objective()
    P = make_prox(1.0, n)
    iters = []
    for seed in range(20):
        cfg = AcdsConfig(n=n, p=1.0, L=1.0, seed=seed, max_iterations=20_000, target_gap=1e-3)
        rec = run_acds(obj, P, cfg, SphereSampler(n, seed), prob.x0)
        iters.append(rec.iterations)
    median = statistics.median(iters)
    _report("desk-scale benchmark reaches 1e-3 (n=10, p=1, 20 seeds)", median <= 2500,
            f"median iterations {median:g}, range {min(iters)}..{max(iters)}")


def test_projection_second_moment_identity():
    """E<s,e>^2 equals ||s||^2/n within 3 stderr at m=2e5, plus the exact basis average."""
    rng = np.random.default_rng(2024)
    ok = True
    details = []
    for n in (1, 8, 100):
        s = rng.normal(size=n)
        est, target, good = check_projection_identity(n, s, 200_000, SphereSampler(n, n))
        ok &= good
        details.append(f"n={n} |mean-target|={abs(est.mean - target):.2e}")
    # averaging <s,u>^2 over an orthonormal basis gives the target exactly
    n = 100
    s = rng.normal(size=n)
    target = float(s @ s) / n
    ok &= abs(np.mean((np.eye(n) @ s) ** 2) - target) <= 1e-12
    Qmat, _ = np.linalg.qr(rng.normal(size=(n, n)))
    ok &= abs(np.mean((Qmat.T @ s) ** 2) - target) <= 1e-12
    _report("projection second-moment identity (n in {1,8,100}, m=2e5)", ok, "; ".join(details))


def test_direction_moment_bounds():
    """Sphere moment bounds hold at 3 stderr for (n, q) in {8,64,512} x {2,4,inf}, m=1e5.

    Directions are drawn once per dimension and replayed across the checks of
    that dimension; the scaled-estimator statistic must equal n^2 times the
    weighted statistic bitwise on the shared draws.
    """
    m = 100_000
    rng = np.random.default_rng(77)
    ok = True
    worst_margin = math.inf
    for n in (8, 64, 512):
        E = SphereSampler(n, n).sample_many(m)
        for q in (2.0, 4.0, math.inf):
            est, bound, good = check_qnorm_moment(n, q, m, ReplaySampler(E))
            ok &= good
            if est.stderr > 1e-12:  # q=2 is deterministic: ||e||_2 = 1
                worst_margin = min(worst_margin, (bound - est.mean) / est.stderr)
            for _ in range(3):
                s = rng.normal(size=n)
                est, bound, good = check_weighted_qnorm_moment(n, q, s, m, ReplaySampler(E))
                ok &= good
                worst_margin = min(worst_margin, (bound - est.mean) / est.stderr)
            g = rng.normal(size=n)
            est, bound, good = check_estimator_qnorm_moment(n, q, g, m, ReplaySampler(E))
            ok &= good
            worst_margin = min(worst_margin, (bound - est.mean) / est.stderr)
            scaled = estimator_qnorm_samples(q, g, m, ReplaySampler(E))
            plain = weighted_qnorm_samples(q, g, m, ReplaySampler(E))
            ok &= bool(np.array_equal(scaled, n**2 * plain))
    _report("direction moment bounds (9 regimes, m=1e5)", ok,
            f"tightest one-sided margin {worst_margin:.0f} stderr")


def test_constrained_progress_counterexample():
    """Scaled progress exceeds n^2 times the plain drop; residual is negative; identities exact."""
    n = 4
    grad = np.ones(n) / math.sqrt(n)
    rep = counterexample_experiment(n, grad, 1e3, 1.0, 100_000, SphereSampler(n, 0))
    combined = math.hypot(rep.lhs.stderr, rep.rhs.stderr)
    ok = rep.lhs.mean - rep.rhs.mean > 3.0 * combined
    ok &= rep.difference.mean > 3.0 * rep.difference.stderr
    ok &= rep.residual.mean < -3.0 * rep.residual.stderr
    ok &= rep.identity_max_abs <= 1e-9
    ok &= rep.scaling_max_abs <= 1e-9
    _report("constrained one-step progress counterexample (n=4, m=1e5)", ok,
            f"separation {(rep.lhs.mean - rep.rhs.mean) / combined:.0f} combined stderr, "
            f"residual {rep.residual.mean / rep.residual.stderr:.0f} stderr, "
            f"identity {rep.identity_max_abs:.1e}, scaling {rep.scaling_max_abs:.1e}")


def test_prox_mirror_suite():
    """100 random instances per (p, n): divergence bounds, roundtrips, solver agreement."""
    rng = np.random.default_rng(5)
    ok = True
    worst = {"roundtrip": 0.0, "residual": 0.0, "bisection": 0.0, "threept": 0.0}
    for p in (1.0, 1.8, 2.0):
        for n in (10, 100):
            P = make_prox(p, n)
            for _ in range(100):
                scale = rng.uniform(0.05, 5.0)
                z = rng.normal(size=n) * scale
                y = rng.normal(size=n) * scale
                v = rng.normal(size=n)
                u = rng.normal(size=n) * scale
                alpha = rng.uniform(0.01, 1.5)

                breg = bregman(P, z, y)
                lower = 0.5 * pnorm(y - z, P.a) ** 2
                ok &= breg >= -1e-12 and breg >= lower - 1e-9 * max(1.0, lower)

                rt = np.max(np.abs(inverse_mirror_map(P, mirror_map(P, z)) - z))
                worst["roundtrip"] = max(worst["roundtrip"], rt)

                zp = mirror_step(P, z, v, alpha)
                res = pnorm(mirror_map(P, zp) - mirror_map(P, z) + alpha * v, math.inf)
                worst["residual"] = max(worst["residual"], res)

                zb = mirror_step_bisection(P, z, v, alpha, tol=1e-6)
                rel = np.linalg.norm(zb - zp) / max(1.0, np.linalg.norm(zp))
                worst["bisection"] = max(worst["bisection"], rel)

                lhs = float(-(mirror_map(P, y) - mirror_map(P, z)) @ (y - u))
                rhs = bregman(P, z, u) - bregman(P, y, u) - bregman(P, z, y)
                worst["threept"] = max(worst["threept"], abs(lhs - rhs))
    ok &= worst["roundtrip"] <= 1e-10
    ok &= worst["residual"] <= 1e-8
    ok &= worst["bisection"] <= 1e-6
    ok &= worst["threept"] <= 1e-9
    _report("prox/mirror suite (100 instances per p in {1,1.8,2}, n in {10,100})", ok,
            f"roundtrip {worst['roundtrip']:.1e}, step residual {worst['residual']:.1e}, "
            f"bisection {worst['bisection']:.1e}, three-point {worst['threept']:.1e}")


def test_schedule_identities_and_hand_simulation():
    """Step-pair identities to 1e-12 up to k=1e4 and a bit-exact hand-simulated iteration.

    The recurrence's terms grow like k^2/(4LC), so its tolerance is read
    relative to the running term size.
    """
    ok = True
    for L, C in ((1.0, 100.0), (1.0, rate_constant(10, math.inf))):
        prev = None
        for k in range(10_001):
            alpha, tau = schedule(k, L, C)
            ok &= abs(tau * alpha * L * C - 1.0) <= 1e-12
            if prev is not None:
                lhs = prev**2 * L * C
                rhs = alpha**2 * L * C - alpha + 1.0 / (4.0 * L * C)
                ok &= abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))
            prev = alpha

    # one iteration, nothing but raw arithmetic: p=2, n=2, L=1, C=n^2=4,
    # x0=(1,0), e=(1,0) on f(x) = ||x||^2/2
    e = np.array([1.0, 0.0])
    x0 = np.array([1.0, 0.0])
    alpha, tau = 2.0 / (2.0 * 1.0 * 4.0), 1.0
    x1 = tau * x0 + (1.0 - tau) * x0
    dd = float(x1 @ e)
    y1 = x1 - (dd / 1.0) * e
    z1 = x0 - alpha * (2 * dd) * e

    from acds import Objective

    obj = Objective(value=lambda x: 0.5 * float(x @ x), dir_deriv=lambda x, ee: float(x @ ee),
                    L=1.0, optimum=(np.zeros(2), 0.0))

    class Fixed:
        dim, seed, generator_info = 2, -1, "fixed"

        def sample(self):
            return e.copy()

    cfg = AcdsConfig(n=2, p=2.0, L=1.0, seed=0, max_iterations=1)
    rec = run_acds(obj, make_prox(2.0, 2), cfg, Fixed(), x0)
    st = rec.final_state
    ok &= (alpha, tau) == (0.25, 1.0)
    ok &= np.array_equal(st.x, x1) and np.array_equal(st.y, y1) and np.array_equal(st.z, z1)
    ok &= st.y.tolist() == [0.0, 0.0] and st.z.tolist() == [0.5, 0.0]
    _report("schedule identities to 1e-12 and bit-exact hand-simulated iteration", ok)


def test_trace_determinism(tmp_path, capsys):
    """Repeated run/sweep invocations emit byte-identical CSVs (elapsed_ms excluded)."""

    def strip_elapsed(text):
        return "\n".join(",".join(line.split(",")[:4]) for line in text.strip().split("\n"))

    run_argv = ["run", "--n", "10", "--p", "1", "--iters", "120", "--stride", "40",
                "--seed", "5", "--problem-seed", str(PROBLEM_SEED)]
    sweep_argv = ["sweep", "--n", "10", "--p", "1,2", "--seeds", "0:3", "--iters", "60",
                  "--stride", "20", "--problem-seed", str(PROBLEM_SEED)]
    ok = True
    for a, b, argv, files in (
        ("ra", "rb", run_argv, ["trace.csv"]),
        ("sa", "sb", sweep_argv,
         [f"trace_p{p}_seed{s}.csv" for p in (1, 2) for s in range(3)]),
    ):
        assert cli_main(argv + ["--out", str(tmp_path / a)]) == 0
        assert cli_main(argv + ["--out", str(tmp_path / b)]) == 0
        for name in files:
            fa = strip_elapsed((tmp_path / a / name).read_text())
            fb = strip_elapsed((tmp_path / b / name).read_text())
            ok &= fa == fb
    capsys.readouterr()
    _report("run/sweep determinism: byte-identical traces modulo elapsed_ms", ok)
