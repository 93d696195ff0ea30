import math
from fractions import Fraction

import numpy as np
import pytest

from chargedbose import jellium as J
from chargedbose import kernels


# --- edge profile -----------------------------------------------------------------------


@pytest.mark.parametrize("L,r", [(5.0, 1.0), (50.0, 1.0), (50.0, 12.0), (200.0, 0.3)])
def test_eta_invariants(L, r):
    rho = 7.0
    p = J.build_eta(L, r, rho)
    assert p.norm_eta() == pytest.approx(1.0, abs=1e-12)
    t = np.linspace(-1, L + 1, 20001)
    assert np.all(p.eta(t) <= p.c * (1 + 1e-15))
    assert p.eta(0.0) == 0 and p.eta(L) == 0
    assert rho * (L - 2 * r) ** 3 <= p.n <= rho * L**3
    assert p.c**2 == pytest.approx(1 / (L - 2 * r + 26 * r / 35), rel=1e-14)


def test_smoothstep_integrals():
    from scipy import integrate

    s2, _ = integrate.quad(lambda t: float(J.smoothstep(t)) ** 2, 0, 1)
    ds2, _ = integrate.quad(lambda t: float(J.smoothstep_prime(t)) ** 2, 0, 1)
    assert s2 == pytest.approx(float(J.SMOOTHSTEP_S2), rel=1e-13)
    assert ds2 == pytest.approx(float(J.SMOOTHSTEP_DS2), rel=1e-13)


def test_eta_is_c1():
    p = J.build_eta(10.0, 1.0, 1.0)
    h = 1e-7
    for t0 in (0.0, p.r, p.L - p.r, p.L):
        left = (p.eta(t0) - p.eta(t0 - h)) / h
        right = (p.eta(t0 + h) - p.eta(t0)) / h
        assert abs(left - right) <= 1e-5


def test_eta_derivative_matches_difference_quotient():
    p = J.build_eta(10.0, 1.5, 1.0)
    t = np.linspace(0.01, 9.99, 101)
    h = 1e-6
    fd = (p.eta(t + h) - p.eta(t - h)) / (2 * h)
    assert np.allclose(fd, p.eta_prime(t), atol=1e-7)


def test_build_eta_rejects_wide_edges():
    with pytest.raises(ValueError, match="r < L/4"):
        J.build_eta(4.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        J.build_eta(4.0, 0.0, 1.0)
    with pytest.raises(ValueError, match="rho"):
        J.build_eta(10.0, 1.0, -1.0)


def test_small_edge_limit():
    L = 10.0
    p = J.build_eta(L, 1e-9, 3.0)
    assert p.c**2 == pytest.approx(1 / L, rel=1e-9)
    assert p.n == pytest.approx(3.0 * L**3, rel=1e-8)


def test_kinetic_closed_form_and_scaling():
    vals = []
    for L in (20.0, 50.0, 200.0, 1000.0):
        p = J.build_eta(L, 1.0, 1.0)
        assert p.kinetic() == pytest.approx(p.kinetic_numeric(), rel=1e-12)
        vals.append(p.r * p.L * p.kinetic() / 3)
    assert max(vals) <= 3.0
    assert max(vals) / min(vals) <= 1.2


def test_derivative_constant_bounded():
    consts = [J.build_eta(L, r, 1.0).derivative_constant() for L in (20.0, 100.0, 500.0) for r in (0.5, 2.0)]
    assert max(consts) <= 2.0
    p = J.build_eta(20.0, 2.0, 1.0)
    t = np.linspace(0, 20, 40001)
    assert np.abs(p.eta_prime(t)).max() * p.r * math.sqrt(p.L) <= p.derivative_constant() * (1 + 1e-12)


# --- mismatch -----------------------------------------------------------------------------


def test_mismatch_vanishes_with_edge():
    L = 20.0
    big = J.mismatch_gaussian(J.build_eta(L, 2.0, 1.0))
    small = J.mismatch_gaussian(J.build_eta(L, 0.02, 1.0))
    assert small < 1e-3 * big


def test_mismatch_scaling_sweep():
    L = 20.0
    ratios = [J.mismatch_gaussian(J.build_eta(L, r, 1.0)) / (L**3 * r**2) for r in (L / 100, L / 30, L / 8)]
    assert all(x > 0 for x in ratios)
    assert max(ratios) <= 25.0


def test_mismatch_scales_like_rho_squared():
    a = J.mismatch_gaussian(J.build_eta(10.0, 1.0, 1.0))
    b = J.mismatch_gaussian(J.build_eta(10.0, 1.0, 3.0))
    assert b / a == pytest.approx(9.0, rel=1e-12)


def test_mismatch_oracle():
    p = J.build_eta(5.0, 1.0, 1.0)
    fast, direct = J.mismatch_gaussian(p), J.mismatch_direct(p)
    assert abs(fast - direct) <= 1e-3 * direct


def test_phi0_metrics():
    m = J.phi0_metrics(J.build_eta(20.0, 1.0, 1.0))
    assert m["kinetic_error"] <= 1e-10 * m["kinetic"]
    assert m["mismatch_error"] <= 1e-4 * m["mismatch"]
    assert m["norm_eta"] == pytest.approx(1.0, abs=1e-12)


# --- pairing symbol -------------------------------------------------------------------------


@pytest.mark.parametrize("rho", [1.0, 1e3, 1e6])
@pytest.mark.parametrize("eps", [0.0, 0.05, 1.0])
def test_neutrality(rho, eps):
    u = rho ** (-1 / 3)
    sym = J.build_gamma_symbol(J.build_eta(20 * u, u, rho), eps)
    assert sym.neutrality_residual <= 1e-12 * rho
    assert sym.z0_sq >= 0


@pytest.mark.parametrize("eps", [0.0, 0.1, 2.0])
def test_trace_two_routes(eps):
    sym = J.build_gamma_symbol(J.build_eta(30.0, 1.0, 50.0), eps)
    assert sym.trace == pytest.approx(sym.trace_phase_space(), rel=1e-8)


def test_trace_density_integral():
    p = J.build_eta(6.0, 1.0, 50.0)
    sym = J.build_gamma_symbol(p, 0.1)
    x, w = np.polynomial.legendre.leggauss(12)
    pts, wts = [], []
    for a, b in zip(p.breakpoints[:-1], p.breakpoints[1:]):
        pts.append(0.5 * (b - a) * x + 0.5 * (a + b))
        wts.append(0.5 * (b - a) * w)
    t, wt = np.concatenate(pts), np.concatenate(wts)
    X = np.stack(np.meshgrid(t, t, t, indexing="ij"), axis=-1)
    W = wt[:, None, None] * wt[None, :, None] * wt[None, None, :]
    assert float(np.sum(W * sym.rho_gamma(X))) == pytest.approx(sym.trace, rel=1e-10)


def test_no_pairing_limit():
    p = J.build_eta(20.0, 1.0, 10.0)
    sym = J.build_gamma_symbol(p, 100.0)
    assert sym.z0_sq / p.n == pytest.approx(1.0, abs=1e-10)
    assert sym.trace < 1e-6


def test_feasibility_error():
    M0 = kernels.radial_moments(0.01).M0
    thr = J.feasibility_threshold(M0)
    assert thr == pytest.approx((2**-0.75 * math.pi**-2.25 * M0) ** 4, rel=1e-14)
    with pytest.raises(J.FeasibilityError) as info:
        J.build_gamma_symbol(J.build_eta(20.0, 1.0, 0.5 * thr), 0.01)
    assert info.value.rho_threshold == pytest.approx(thr)
    J.build_gamma_symbol(J.build_eta(20.0, 1.0, 2 * thr), 0.01)


# --- J profile -------------------------------------------------------------------------------


@pytest.fixture(scope="module")
def j_sweep():
    return {L: J.j_profile_checks(J.build_eta(L, 1.0, 1.0)) for L in (50.0, 100.0, 200.0)}


def test_j_sandwich(j_sweep):
    for L, c in j_sweep.items():
        assert c["sandwich_ok"]
        assert (1 - 2 / L) ** 3 <= c["mass_J"] <= 1
        assert 1 - c["mass_J"] <= 3 * 2 / L


def test_j_mass_parseval(j_sweep):
    for c in j_sweep.values():
        assert c["mass_j"] == pytest.approx(c["mass_j_parseval"], rel=1e-8)


def test_j_decay(j_sweep):
    for c in j_sweep.values():
        assert c["decay_constant"] <= 1.0


def test_j_tail_scaling(j_sweep):
    consts = [c["tail_constant"] for c in j_sweep.values()]
    assert max(consts) / min(consts) <= 2.0


def test_j_profile_at_zero():
    p = J.build_eta(30.0, 1.0, 1.0)
    mass_eta2 = 1.0
    assert float(J.j_profile(p, 0.0)[0]) == pytest.approx(mass_eta2 / (2 * math.pi * p.c**2), rel=1e-12)


# --- exchange -----------------------------------------------------------------------------


def test_sup_g_small_cutoff():
    out = J.exchange_bound(J.build_eta(20.0, 1.0, 100.0), 0.1)
    assert out["sup_g"] == pytest.approx(kernels.eval_g(0.1))
    assert out["sup_g"] == pytest.approx(2**-1.5 * 100, rel=0.02)


def test_exchange_scaling():
    eps = 0.3
    vals = []
    for rho in (1e2, 1e4, 1e6):
        for L in (20.0, 50.0):
            u = rho ** (-1 / 3)
            out = J.exchange_bound(J.build_eta(L * u, u, rho), eps)
            vals.append(out["norm_bound"] / (eps**-2 * rho * (L * u) ** 3))
    assert max(vals) <= 0.2
    assert max(vals) / min(vals) <= 2.0


def test_exchange_vanishes_without_pairing():
    p = J.build_eta(20.0, 1.0, 100.0)
    a, b = J.exchange_bound(p, 10.0), J.exchange_bound(p, 100.0)
    for key in ("norm_bound", "cauchy_schwarz_hardy"):
        assert b[key] < 1e-6 * a[key]


def test_exchange_rejects_zero_cutoff():
    with pytest.raises(ValueError, match="eps > 0"):
        J.exchange_bound(J.build_eta(20.0, 1.0, 100.0), 0.0)


def test_hardy_direction():
    out = J.hardy_direction_check(seed=3)
    assert out["ok"]
    assert 0 < out["exact"] <= out["hardy_chain"]


# --- assembly ------------------------------------------------------------------------------


@pytest.fixture(scope="module")
def profile():
    return J.build_eta(50.0, 1.0, 1e4)


def test_bound_terms_signs(profile):
    rep = J.assemble_bound(profile, J.JelliumParams(1e4))
    assert rep.main.value < 0
    for t in rep.terms[1:]:
        assert t.value >= 0, t.name
    assert rep.extras["neutrality_residual"] <= 1e-12 * 1e4


def test_bound_exponents(profile):
    rep = J.assemble_bound(profile, J.JelliumParams(1e4))
    assert rep.main.exponent == Fraction(5, 4)
    assert rep.term("exchange").exponent == Fraction(7, 6)
    assert rep.extras["foldy_limit"]["exponent"] == "7/6"
    assert J.foldy_schedule_exponent() == Fraction(5, 4) - Fraction(1, 12)


def test_foldy_limit(profile):
    rep = J.assemble_bound(profile, J.JelliumParams(1e4, eps=1e-5))
    fl = rep.extras["foldy_limit"]
    assert 0 < fl["relative_deviation"] <= 1e-4


@pytest.mark.parametrize("eps", [1e-2, 3e-3, 1e-3])
def test_foldy_deviation_halves(profile, eps):
    dev = [J.assemble_bound(profile, J.JelliumParams(1e4, eps=e)).extras["foldy_limit"]["deviation"]
           for e in (eps, eps / 2)]
    assert dev[0] > 0 and dev[1] > 0
    assert 0.45 <= dev[1] / dev[0] <= 0.55


def test_zero_cutoff_has_no_exchange_terms(profile):
    rep = J.assemble_bound(profile, J.JelliumParams(1e4, eps=0.0))
    with pytest.raises(KeyError):
        rep.term("exchange")
    assert rep.extras["foldy_limit"]["ratio"] == pytest.approx(1.0, abs=1e-9)


def test_params_validation():
    with pytest.raises(ValueError):
        J.JelliumParams(-1.0)
    with pytest.raises(ValueError):
        J.JelliumParams(1.0, eps=-0.1)
    assert J.JelliumParams(4096.0).cutoff == pytest.approx(0.5)
