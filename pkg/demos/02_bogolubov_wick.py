"""Quasi-free states: Wick contraction versus brute-force Fock matrices."""
import numpy as np

from chargedbose import bogolubov as bg
from chargedbose import fock

rng = np.random.default_rng(1)
q, _ = np.linalg.qr(rng.normal(size=(2, 2)))
data = bg.BogolubovData.from_spectral(bg.SpectralPairs(q.T, [0.08, 0.05]), np.zeros(2))
basis = fock.build_basis(2, 14)
state = fock.prepare_state(basis, fock.Bogolubov(data))

ops = [bg.Ladder(bool(rng.integers(2)), rng.normal(size=2) + 1j * rng.normal(size=2)) for _ in range(6)]
m = np.eye(basis.size, dtype=complex)
for op in ops:
    kind = "creation" if op.dagger else "annihilation"
    m = m @ fock.ladder_matrix(basis, op.vec, kind).matrix
direct = np.vdot(state.amplitudes, m @ state.amplitudes)
wick = bg.wick_expectation(bg.quasi_free_two_point(data, ops), ops).value
print(f"six-point function: matrices {direct:.12f}")
print(f"                    pairings {wick:.12f}")
print(f"difference {abs(direct - wick):.1e}")
print("one-particle density matrix:\n", np.round(bg.one_pdm_matrix(data), 6))
