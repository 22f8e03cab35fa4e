"""The closed-form guarantees, evaluated.

Walks the bound for the exact-gap rule across gap indices, shows the
component terms that min/max-compose it, and prints the special values
worth remembering.
"""

import math

from gapsecretary import (
    alpha_exact,
    guarantee_bounded_error,
    guarantee_exact_gap,
    l_selection_bound,
    tau_for_k,
    two_three_tie_prob,
)

print("exact-gap rule, index-tuned waiting time:")
print(f"{'k':>7} {'tau_k':>8} {'alpha':>8} {'stated':>8}  binding")
for k in (2, 3, 7, 12, 50, 1000, 10**5):
    tau = tau_for_k(k)
    report = alpha_exact(tau, k)
    print(
        f"{k:>7} {tau:>8.4f} {report.alpha:>8.4f} {guarantee_exact_gap(k):>8.4f}  "
        f"{report.binding_term}"
    )

print("\nindex-oblivious mode (fixed tau = 0.2):")
worst = min(alpha_exact(0.2, k).alpha for k in range(2, 2000))
print(f"  worst alpha over small k: {worst:.5f}  (stays above 0.4 for every k)")
print(f"  alpha at k=2: {alpha_exact(0.2, 2).alpha:.5f} = 0.3*ln(5) - 0.08")

report = guarantee_bounded_error(0.2, 7)
print(f"\nbounded prediction error: value >= {report.alpha:.4f} * w1 - 2*epsilon")

print(f"\ntied second/third weights, strict rule at tau=0.359:")
print(f"  select-best probability >= {two_three_tie_prob(0.359):.4f} "
      f"(vs 1/e = {1/math.e:.4f})")

print("\nmulti-selection bound at tau = 1/e:")
for L, beta in [(2, 0.45), (3, 0.30), (5, 0.15)]:
    print(f"  L={L}, beta={beta}: >= {l_selection_bound(L, beta):.4f}")
