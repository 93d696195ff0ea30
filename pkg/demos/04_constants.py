"""The Coulomb pairing constant I0 and the pointwise optimal occupation g(p)."""
import numpy as np

from chargedbose import kernels

res = kernels.compute_I0()
print(f"I0 by quadrature     {res.quadrature:.10f} (abs err {res.abserr:.1e})")
print(f"I0 by Gamma values   {res.gamma_form:.10f}")
print(f"alternate closed form {res.closed_form:.10f} (ratio {res.closed_form / res.quadrature:.6f})")

for p in np.logspace(-2, 1, 4):
    rep = kernels.check_g_optimality(float(p))
    print(f"p={p:7.3f}  g={rep.g:.6e}  scanned argmin={rep.argmin:.6e}")
