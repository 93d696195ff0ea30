import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chargedbose import bogolubov as bg
from chargedbose import fock


def _orthonormal(rng, d, k):
    q, _ = np.linalg.qr(rng.normal(size=(d, d)))
    return q.T[:k]


def _data(rng, d, lams, phi):
    return bg.BogolubovData.from_spectral(bg.SpectralPairs(_orthonormal(rng, d, len(lams)), lams), phi)


def _swap_symmetric(rng, d):
    A = rng.normal(size=(d * d, d * d))
    W4 = (A + A.T).reshape(d, d, d, d)
    return (0.5 * (W4 + W4.transpose(1, 0, 3, 2))).reshape(d * d, d * d)


@pytest.fixture(scope="module")
def reference():
    """d=2, lambda=(0.4, 0.3), |phi|=0.8 prepared on a basis deep enough for 1e-12 defect."""
    rng = np.random.default_rng(11)
    phi = np.array([0.48, 0.64j])
    data = _data(rng, 2, [0.4, 0.3], phi)
    basis = fock.build_basis(2, 40)
    state = fock.prepare_state(basis, fock.Bogolubov(data))
    cr = [fock.ladder_matrix(basis, e, "creation").matrix for e in np.eye(2)]
    an = [c.conj().T for c in cr]
    return data, basis, state, cr, an


# --- single mode values ---------------------------------------------------------------


def test_single_mode_half():
    data = bg.BogolubovData.from_spectral(bg.SpectralPairs([[1.0]], [0.5]), [0.0])
    assert data.gamma1[0, 0].real == pytest.approx(1 / 3, abs=1e-15)
    assert data.xi1[0, 0].real == pytest.approx(-2 / 3, abs=1e-15)
    e = np.array([1.0])
    assert bg.two_pdm(data, e, e, e, e).real == pytest.approx(2 / 3, abs=1e-14)


@given(st.floats(0.0, 0.95))
def test_lambda_inverse(lam):
    pairs = bg.SpectralPairs([[1.0]], [lam])
    assert bg.lambda_from_gamma(pairs.occupations[0]) == pytest.approx(lam, abs=1e-12)


def test_coherent_two_pdm():
    z = 0.7 - 0.2j
    data = bg.BogolubovData.from_spectral(bg.SpectralPairs(np.zeros((0, 1)), []), [z])
    e = np.array([1.0])
    assert bg.two_pdm(data, e, e, e, e).real == pytest.approx(abs(z) ** 4, abs=1e-14)
    assert bg.one_pdm(data, e, e).real == pytest.approx(abs(z) ** 2, abs=1e-14)


def test_spectral_pairs_rejects_bad_input():
    with pytest.raises(ValueError, match="outside"):
        bg.SpectralPairs([[1.0]], [1.0])
    with pytest.raises(ValueError, match="orthonormal"):
        bg.SpectralPairs([[1.0, 0.0], [1.0, 1.0]], [0.1, 0.2])
    with pytest.raises(ValueError, match="parameters"):
        bg.SpectralPairs([[1.0, 0.0]], [0.1, 0.2])


# --- pair validity -----------------------------------------------------------------


def test_valid_pair_residuals(rng):
    data = _data(rng, 4, [0.6, 0.3, 0.1], np.zeros(4))
    rep = bg.validate_pair(data.gamma1, data.xi1)
    assert rep.ok
    assert rep.residuals["symplectic"] <= 1e-12


def test_perturbed_pair_flagged(rng):
    data = _data(rng, 3, [0.5, 0.2], np.zeros(3))
    rep = bg.validate_pair(data.gamma1, data.xi1 + 1e-6 * np.eye(3))
    assert not rep.ok
    assert rep.residuals["xi_star_xi"] > 1e-10
    assert rep.residuals["xi_symmetry"] <= 1e-15


def test_pair_shape_mismatch():
    with pytest.raises(ValueError, match="square"):
        bg.validate_pair(np.eye(2), np.eye(3))


def test_degenerate_basis_is_deterministic():
    gamma = 0.5 * np.eye(3)
    gamma[2, 2] = 0.1
    a = bg.BogolubovData.from_gamma(gamma, np.zeros(3))
    b = bg.BogolubovData.from_gamma(gamma.copy(), np.zeros(3))
    assert np.array_equal(a.pairs.psi, b.pairs.psi)
    assert np.allclose(a.gamma1, gamma, atol=1e-12)


def test_from_gamma_round_trip(rng):
    data = _data(rng, 3, [0.5, 0.2, 0.05], np.zeros(3))
    again = bg.BogolubovData.from_gamma(data.gamma1, np.zeros(3))
    assert np.allclose(again.gamma1, data.gamma1, atol=1e-12)
    assert np.allclose(again.xi1, data.xi1, atol=1e-12)


def test_from_gamma_rejects_negative():
    with pytest.raises(ValueError, match="positive"):
        bg.BogolubovData.from_gamma(np.diag([0.2, -0.1]), np.zeros(2))


# --- density matrices against the Fock oracle ---------------------------------------------


def test_reference_state_is_resolved(reference):
    _, _, state, _, _ = reference
    assert state.truncation_defect <= 1e-12


def test_one_pdm_matches_fock(reference):
    data, _, state, cr, an = reference
    psi = state.amplitudes
    G = np.array([[np.vdot(psi, cr[a] @ an[b] @ psi) for b in range(2)] for a in range(2)])
    assert np.abs(G - bg.one_pdm_matrix(data)).max() <= 1e-8


def test_two_pdm_matches_fock(reference):
    data, _, state, cr, an = reference
    psi = state.amplitudes
    D = bg.two_pdm_tensor(data)
    for a in range(2):
        for b in range(2):
            for m in range(2):
                for n in range(2):
                    v = np.vdot(psi, cr[a] @ cr[b] @ an[n] @ an[m] @ psi)
                    assert abs(v - D[a, b, m, n]) <= 1e-8


def test_two_pdm_terms_sum_to_tensor(reference, rng):
    data = reference[0]
    vecs = [rng.normal(size=2) + 1j * rng.normal(size=2) for _ in range(4)]
    terms = bg.two_pdm_terms(data, *vecs)
    assert len(terms) == 10
    u1, u2, v2, v1 = vecs
    D = bg.two_pdm_tensor(data)
    via_tensor = np.einsum("abmn,a,b,m,n->", D, u1, u2, v1.conj(), v2.conj())
    assert sum(terms.values()) == pytest.approx(via_tensor, abs=1e-12)


def test_quadratic_expectation_matches_fock(reference, rng):
    data, basis, state, _, _ = reference
    A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    T = A + A.conj().T
    W = _swap_symmetric(rng, 2)
    H = fock.second_quantize_one_body(basis, T) + fock.second_quantize_two_body(basis, W)
    direct = fock.expectation(state, H).real
    assert bg.quadratic_expectation(data, T, W) == pytest.approx(direct, abs=1e-8)


def test_quadratic_expectation_validates(reference):
    data = reference[0]
    with pytest.raises(ValueError, match="Hermitian"):
        bg.quadratic_expectation(data, [[0, 1], [0, 0]])
    W = np.zeros((4, 4))
    W[0, 1] = 1
    with pytest.raises(ValueError, match="swap"):
        bg.quadratic_expectation(data, np.eye(2), W)


def test_number_moments(rng):
    psi = np.eye(3)[:2]
    data = bg.BogolubovData.from_spectral(bg.SpectralPairs(psi, [0.5, 0.3]), [0, 0, 0.9])
    g = data.gamma1.real
    assert np.allclose(g @ data.phi, 0)
    norm2 = 0.81
    assert bg.number_mean(data) == pytest.approx(norm2 + np.trace(g), abs=1e-14)
    expected = norm2 + 2 * np.trace(g @ (g + np.eye(3)))
    assert bg.number_variance(data) == pytest.approx(expected, abs=1e-12)


def test_one_pdm_sesquilinearity(reference, rng):
    data = reference[0]
    u, v = rng.normal(size=2) + 1j * rng.normal(size=2), rng.normal(size=2) + 1j * rng.normal(size=2)
    alpha = 0.3 - 1.1j
    base = bg.one_pdm(data, u, v)
    assert bg.one_pdm(data, alpha * u, v) == pytest.approx(alpha * base, abs=1e-13)
    assert bg.one_pdm(data, u, alpha * v) == pytest.approx(np.conj(alpha) * base, abs=1e-13)


def test_dimension_mismatch(reference):
    with pytest.raises(ValueError, match="dimension"):
        bg.one_pdm(reference[0], np.ones(3), np.ones(2))


# --- Wick rule --------------------------------------------------------------------------


@pytest.mark.parametrize("n,count", [(2, 1), (4, 3), (6, 15), (8, 105)])
def test_pairing_counts(n, count):
    assert len(list(bg.pairings(range(n)))) == count


def test_odd_products_flagged():
    res = bg.wick_expectation(lambda i, j: 1.0, [0, 1, 2])
    assert res.odd and res.value == 0


def test_wick_rejects_long_products():
    with pytest.raises(ValueError, match="at most 8"):
        bg.wick_expectation(lambda i, j: 1.0, list(range(10)))


@pytest.mark.parametrize("m", [2, 3])
def test_wick_matches_fock(m, rng):
    data = _data(rng, 2, [0.08, 0.05], np.zeros(2))
    basis = fock.build_basis(2, 14)
    state = fock.prepare_state(basis, fock.Bogolubov(data))
    for _ in range(5):
        ops = [bg.Ladder(bool(rng.integers(2)), rng.normal(size=2) + 1j * rng.normal(size=2))
               for _ in range(2 * m)]
        mat = np.eye(basis.size, dtype=complex)
        for op in ops:
            mat = mat @ fock.ladder_matrix(basis, op.vec, "creation" if op.dagger else "annihilation").matrix
        direct = np.vdot(state.amplitudes, mat @ state.amplitudes)
        wick = bg.wick_expectation(bg.quasi_free_two_point(data, ops), ops)
        assert wick.n_pairings == {2: 3, 3: 15}[m]
        assert abs(direct - wick.value) <= 1e-9 * max(1.0, abs(wick.value))


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 0.9), st.floats(0.0, 0.9), st.floats(-1, 1), st.floats(-1, 1))
def test_generated_pairs_are_valid(l1, l2, p1, p2):
    data = bg.BogolubovData.from_spectral(bg.SpectralPairs(np.eye(2), [l1, l2]), [p1, p2])
    rep = bg.validate_pair(data.gamma1, data.xi1, tol=1e-8 * (1 + np.abs(data.xi1).max() ** 2))
    assert rep.ok
    assert bg.number_variance(data) >= -1e-10
