"""
When rates do propagate: convergence in mean
============================================

If E|X_n| = o(n**-beta) then E|mean(X_1..X_n)| = o(n**-beta) as well.  The
power-law family has exact moments E|X_i| = i**-r * spread/2, so the scaled
diagnostic n**beta * E|mean| can be compared against direct summation.

The same dyadic family from the counterexample illustrates the dichotomy:
below the family's alpha the diagnostic decays, above it the scaled mean
escapes to infinity.

Run:
    python demos/demo_rate_propagation.py
"""

from math import fsum

from cesarolab import MonteCarloConfig, Seed, SequenceSpec, estimate_scaled_l1

seed = Seed(20260810)

# power law: r = 0.8, beta = 0.5 < r, so the diagnostic must decay
spec = SequenceSpec.power_law(r=0.8, spread=2.0)
cfg = MonteCarloConfig(replications=500, seed=seed, n_grid=(100, 1000, 10000))
result = estimate_scaled_l1(spec, 0.5, cfg)

print("power_law(r=0.8, spread=2), beta=0.5:")
print("    n      estimate    exact moment")
for row in result.rows:
    if row.statistic != "scaled_l1":
        continue
    exact = row.n**0.5 * fsum(i**-0.8 for i in range(1, row.n + 1)) / row.n
    print(f"{row.n:>7}    {row.value:.4f}      {exact:.4f}")

# dyadic family, below alpha: decays; the counterexample regime is beta > alpha
spec_ce = SequenceSpec.counterexample(alpha=0.4, beta=0.6)
cfg_ce = MonteCarloConfig(replications=500, seed=seed, n_grid=(2**8, 2**10, 2**12))
result_ce = estimate_scaled_l1(spec_ce, 0.3, cfg_ce)
print("\ndyadic family with alpha=0.4, scaled at beta'=0.3 (< alpha):")
for row in result_ce.rows:
    if row.statistic == "scaled_l1":
        print(f"n={row.n:>5}: n^0.3 * E|mean| = {row.value:.4f}")
print("decaying, as the tail-integrability condition predicts for beta' < alpha.")
