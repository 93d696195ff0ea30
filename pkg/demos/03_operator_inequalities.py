"""Operator concavity probes and the finite-frame Berezin-Lieb inequality."""
from chargedbose import berezin_lieb as bl

for name in ("sqrt", "pair_minus_t", "square"):
    res = bl.probe_operator_concavity(bl.XI[name], d=6, trials=500, seed=0)
    print(f"{name:>13}: min eigenvalue {res.min_eigenvalue:+.3e}, first violation {res.first_violation}")

out = bl.berezin_lieb_suite(seed=0, trials=200, max_d=8)
print(f"concave side min {out['concave_operator_min']:.3e}; convex side max {out['convex_operator_max']:.3e}")
print(f"dilation residual {out['dilation_max_residual']:.1e}; failed trials {out['failed_trials']}")
