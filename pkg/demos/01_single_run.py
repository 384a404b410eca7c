#!/usr/bin/env python3
"""Minimize the benchmark quadratic with two prox geometries and compare.

The objective is f(x) = 1/2 <x - x*, B(x - x*)> with B built from a random
matrix and normalized so its largest eigenvalue is 1 (hence L = 1). The
solver only ever sees directional derivatives <grad f(x), e> along random
unit directions e, never the full gradient.
"""

import numpy as np

from acds import (
    AcdsConfig,
    SphereSampler,
    convergence_bound,
    initial_divergence,
    make_prox,
    quadratic_problem,
    run_acds,
)

n = 10
iterations = 1000
prob = quadratic_problem(n, seed=1)
obj = prob.objective()
print(f"benchmark quadratic: n={n}, f(x0) = {obj.value(prob.x0):.6g}, optimum 0 at x*\n")

for p in (1.0, 2.0):
    P = make_prox(p, n)
    d0 = initial_divergence(P, prob.x0, prob.x_star)
    cfg = AcdsConfig(n=n, p=p, L=prob.L, seed=0, max_iterations=iterations, checkpoint_stride=200)
    rec = run_acds(obj, P, cfg, SphereSampler(n, seed=0), prob.x0)
    print(f"p = {p:g}  (dual exponent q = {cfg.q:g}, rate constant C = {cfg.rate_const:.4g}, "
          f"start-to-optimum divergence = {d0:.4g})")
    print("    k      f(y_k)        gap         bound 4*D0*L*C/k^2")
    for k, fy, gap, _, _ in rec.rows:
        bound = convergence_bound(d0, prob.L, cfg.rate_const, k) if k else float("inf")
        print(f"  {k:5d}  {fy:.4e}  {gap:.4e}   {bound:.4e}")
    print()

print("The observed gap sits far below the guarantee on this instance; the")
print("1-norm geometry pays a ~11x larger rate constant at n=10, which is why")
print("its advantage only shows up in much higher dimensions.")
