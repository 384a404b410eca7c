#!/usr/bin/env python3
"""Multi-seed sweep over prox exponents, with emitted traces and bound curves.

Every solver seed reuses the same direction stream across all p values, so
the geometries are compared on identical randomness. Outputs land in
demo_out/: one trace CSV per run, a bound curve per exponent, and a summary
JSON with per-checkpoint aggregates. The plot tool in frontend/ consumes
exactly these files.
"""

import json
from pathlib import Path

from acds.harness import ExperimentSpec, run_experiment

out = Path("demo_out")
spec = ExperimentSpec(
    n=10,
    problem_seed=1,
    p_values=[1.0, 1.8, 2.0],
    seeds=list(range(10)),
    out_dir=out,
    max_iterations=1000,
    target_gap=1e-3,
    checkpoint_stride=100,
)
summary = run_experiment(spec)

print(f"completed {summary.completed_runs} runs -> {out}/")
for item in summary.iterations_to_target:
    print(f"  p={item['p']:g}: reached 1e-3 in {item['reached']} of {len(spec.seeds)} runs, "
          f"median iterations {item['median']}")

doc = json.loads((out / "summary.json").read_text())
print("\nmean gap by checkpoint:")
header = sorted({g["k"] for g in doc["aggregates"]["gap_stats"]})
print("  p \\ k " + "".join(f"{k:>11d}" for k in header))
for p in spec.p_values:
    row = {g["k"]: g["mean"] for g in doc["aggregates"]["gap_stats"] if g["p"] == p}
    print(f"  {p:<6g}" + "".join(f" {row.get(k, float('nan')):.4e}" for k in header))

print("\nfiles:", ", ".join(sorted(x.name for x in out.iterdir())))
