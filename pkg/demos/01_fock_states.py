"""Coherent and squeezed states on a truncated Fock space.

Builds each state, reports how much norm the truncation discarded, and
compares number statistics against their closed forms.
"""
import numpy as np

from chargedbose import fock

basis = fock.build_basis(1, 14)
N = fock.number_operator(basis)

coh = fock.prepare_state(basis, fock.Coherent([0.8]))
mean = fock.expectation(coh, N).real
var = fock.expectation(coh, N @ N).real - mean**2
print(f"coherent |phi|^2=0.64: mean {mean:.12f}  variance {var:.12f}  defect {coh.truncation_defect:.1e}")

lam = 0.1
sq = fock.prepare_state(basis, fock.Squeezed(lam, [1.0]))
mean = fock.expectation(sq, N).real
var = fock.expectation(sq, N @ N).real - mean**2
print(f"squeezed lambda={lam}: mean {mean:.12f} (expect {lam**2 / (1 - lam**2):.12f})")
print(f"                    variance {var:.12f} (expect {2 * lam**2 / (1 - lam**2) ** 2:.12f})")
print("odd amplitudes all zero:", bool(np.all(sq.amplitudes[1::2] == 0)))

try:
    fock.prepare_state(fock.build_basis(1, 14), fock.Squeezed(0.5, [1.0]))
except fock.TruncationError as err:
    print(f"lambda=0.5 needs a larger basis: N_max >= {err.required_n_max}")
