"""
Finite-horizon diagnostics for almost sure convergence
======================================================

Almost sure convergence of n**beta * mean_n cannot be observed directly; a
necessary-condition proxy is the window exceedance profile

    pr( max_{m <= k <= n_cap} k**beta |mean_k| > eps )

which must drain to zero as the window start m grows whenever the scaled
means converge almost surely.  Two contrasting families:

* summable scaled tails (Borel-Cantelli regime) -> profile drains fast;
* the dyadic counterexample at beta > alpha -> profile stays put.

Run:
    python demos/demo_almost_sure.py
"""

from cesarolab import MonteCarloConfig, Seed, SequenceSpec, path_sup_diagnostic

seed = Seed(20260810)

bc = SequenceSpec.borel_cantelli(beta=0.5, a=1.0, s=2.0)
cfg = MonteCarloConfig(replications=400, seed=seed, n_grid=(10**4,))
res = path_sup_diagnostic(bc, 0.5, (100, 1000), 10**4, 0.5, cfg)
print("borel_cantelli(beta=0.5, a=1, s=2), eps=0.5, horizon 10^4:")
for row in res.rows:
    print(f"  window start m={row.n:>5}: exceedance {row.value:.3f} "
          f"[{row.ci_low:.3f}, {row.ci_high:.3f}]")

ce = SequenceSpec.counterexample(alpha=0.4, beta=0.6)
cfg2 = MonteCarloConfig(replications=400, seed=seed, n_grid=(2**14,))
res2 = path_sup_diagnostic(ce, 0.6, (256, 1024, 4096), 2**14, 0.5, cfg2)
print("\ndyadic counterexample (alpha=0.4) scaled at beta=0.6:")
for row in res2.rows:
    print(f"  window start m={row.n:>5}: exceedance {row.value:.3f} "
          f"[{row.ci_low:.3f}, {row.ci_high:.3f}]")
print("\nthe first profile drains toward 0; the second refuses to.")
