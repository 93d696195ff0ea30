"""One-component bound: approach to the high-density law as the cutoff shrinks."""
from chargedbose import jellium, kernels

I0 = kernels.compute_I0().quadrature
rho = 1e4
u = rho ** (-1 / 3)
profile = jellium.build_eta(50 * u, u, rho)
prev = None
for eps in (1e-2, 5e-3, 2.5e-3):
    rep = jellium.assemble_bound(profile, jellium.JelliumParams(rho, eps=eps), I0)
    lim = rep.extras["foldy_limit"]
    dev = lim["deviation"]
    ratio = "" if prev is None else f"  ratio {dev / prev:.4f}"
    print(f"eps={eps:.2e}  main minus Foldy term {dev:.3e} (relative {lim['relative_deviation']:.2e}){ratio}")
    prev = dev
