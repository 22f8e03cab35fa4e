"""How much does knowing an additive gap help?

Compares the classical threshold rule against the gap-augmented rule on the
heavy-tailed power family, where the top weight dwarfs everything else. The
classical rule is stuck near its tight guarantee of 1/e; with any gap the
rule only fails when the best element arrives during the waiting phase.
"""

import math

from gapsecretary import (
    AlgorithmSpec,
    ExperimentConfig,
    GapSpec,
    InstanceFamily,
    estimate_ratio,
    sweep_k,
)

N = 200
ITERS = 1000
SEED = 7

family = InstanceFamily("pareto_power")

classical = estimate_ratio(
    ExperimentConfig(
        family, N, ITERS, AlgorithmSpec("classical", tau=1 / math.e), master_seed=SEED
    )
)
print(f"power-family instances, n={N}, {ITERS} draws, seed {SEED}")
print(f"classical rule (tau=1/e):          ratio {classical.mean:.3f} "
      f"(selects the best in {classical.select_best_prob:.1%} of draws)")

config = ExperimentConfig(
    family, N, ITERS, AlgorithmSpec("exact-gap", tau=0.2), GapSpec(k=2), master_seed=SEED
)
print("\ngap rule with the fixed waiting time 0.2 (index-oblivious):")
for cell in sweep_k(config, [2, 50, 200], include_baseline=False):
    print(f"  gap index k={cell.k:>3}: ratio {cell.estimate.mean:.3f} "
          f"+- {cell.estimate.stderr:.3f}")

print("\ngap rule with the index-tuned waiting time 1 - (1/(k+1))^(1/k):")
for cell in sweep_k(config, [2, 50, 200], tau_policy="from-k", include_baseline=False):
    print(f"  k={cell.k:>3} (tau={cell.tau:.3f}): ratio {cell.estimate.mean:.3f}")

print(
    "\nThe fixed waiting time already reaches ~0.8 (the chance the best "
    "element arrives after 0.2); tuning tau to the index trades small-k "
    "performance for large-k performance."
)
