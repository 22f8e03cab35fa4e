"""Trust, but enumerate.

On tiny instances the expected accepted weight has an exact value: sum over
every split of the elements around the waiting time and every arrival order
of the rest. This script pits the Monte Carlo engine against that oracle for
each single-selection rule.
"""

import math

import numpy as np

from gapsecretary import (
    AlgorithmSpec,
    WeightProfile,
    exact_expectation_small_n,
    simulate_fixed_profile,
)

ITERS = 200_000
SEED = 7

profile = WeightProfile.from_weights([5.0, 3.0, 2.0, 1.0])
gap = 2.5

print(f"weights {[round(w, 6) for w in profile.weights.tolist()]}, predicted gap {gap}, {ITERS} draws\n")
print(f"{'rule':<17} {'exact':>9} {'monte carlo':>12} {'z':>6}")
for spec in (
    AlgorithmSpec("classical", tau=0.4),
    AlgorithmSpec("strict-classical", tau=0.4),
    AlgorithmSpec("exact-gap", tau=0.4),
    AlgorithmSpec("bounded", tau=0.4, epsilon=0.5),
    AlgorithmSpec("robust", tau=0.4, gamma=0.2),
):
    exact = exact_expectation_small_n(profile, spec, gap)
    sim = simulate_fixed_profile(profile, spec, ITERS, SEED, gap_values=gap)
    values = sim["accept_weight"]
    mc = values.mean()
    se = values.std(ddof=1) / math.sqrt(ITERS)
    z = 0.0 if se == 0 else (mc - exact) / se
    print(f"{spec.tag:<17} {exact:>9.5f} {mc:>12.5f} {z:>+6.2f}")

hand = exact_expectation_small_n(
    WeightProfile.from_weights([2.0, 1.0]), AlgorithmSpec("exact-gap", tau=0.5), 0.0
)
print(
    f"\nhand-checkable case (weights [2,1], tau=0.5, zero gap): "
    f"{hand} = 0.5*0.5*2 + 0.25*1.5"
)

# the oracle also quantifies what overshooting costs: nothing is ever taken
dead = exact_expectation_small_n(profile, AlgorithmSpec("exact-gap", tau=0.4), 6.0)
print(f"gap above the top weight: exact expected value {dead}")
