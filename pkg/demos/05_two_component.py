"""Radial minimizer for A and the itemized two-component upper bound."""
from chargedbose import dyson, kernels

I0 = kernels.compute_I0().quadrature
res = dyson.minimize_variational(I0=I0)
print(f"A = {res.A:.8f}; virial residual {abs(res.T - 0.75 * I0 * res.P) / res.T:.1e}")

for n in (1e6, 1e8, 1e10):
    rep = dyson.assemble_bound(res.profile, dyson.TrialParameters(n), I0)
    print(f"n={n:.0e}")
    for row in rep.rows():
        print(f"   {row['term']:>16} {row['value']:+.4e}  n^{row['exponent']}")
