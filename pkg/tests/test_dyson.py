import math
from fractions import Fraction

import numpy as np
import pytest

from chargedbose import dyson, kernels
from chargedbose.report import BoundReport


# --- grid and Gaussian oracle ------------------------------------------------------------


def test_radial_grid_rejects_bad_input():
    with pytest.raises(ValueError):
        dyson.radial_grid(-1.0, 100)
    with pytest.raises(ValueError):
        dyson.radial_grid(10.0, 2)


def test_profile_invariants():
    with pytest.raises(ValueError, match="nonnegative"):
        dyson.RadialProfile(5.0, [1, 0.5, -0.1, 0.1, 0])
    with pytest.raises(ValueError, match="vanish"):
        dyson.RadialProfile(5.0, [1, 0.5, 0.3, 0.1, 0.1])


def test_gaussian_energy_is_second_order(I0):
    a = 0.7
    exact = dyson.gaussian_closed_form(a, I0)["energy"]
    errs = []
    for K in (250, 500, 1000):
        prof = dyson.gaussian_profile(a, 20.0, K)
        errs.append(abs(dyson.energy_terms(prof, I0)[0] - exact))
    for coarse, fine in zip(errs, errs[1:]):
        assert 3.5 <= coarse / fine <= 4.5


def test_gaussian_mass_is_one():
    assert dyson.gaussian_profile(0.5, 30.0, 2000).mass == pytest.approx(1.0, abs=1e-10)


def test_gradient_matches_finite_differences(I0):
    prof = dyson.gaussian_profile(0.7, 20.0, 400)
    v = np.array(prof.values)
    grad = dyson.energy_gradient(v, prof.R, I0)
    h = 1e-6 * v.max()
    big = np.flatnonzero(np.abs(grad) >= 1e-2 * np.abs(grad).max())
    for k in big[:: max(1, big.size // 25)]:
        up, dn = v.copy(), v.copy()
        up[k] += h
        dn[k] -= h
        fd = (dyson.energy_value(up, prof.R, I0) - dyson.energy_value(dn, prof.R, I0)) / (2 * h)
        assert fd == pytest.approx(grad[k], rel=1e-6)


# --- minimizer ----------------------------------------------------------------------


def test_minimizer_shape(minimizer):
    v = minimizer.profile.values
    assert np.all(v >= 0)
    assert np.all(np.diff(v) <= 1e-8)
    assert minimizer.profile.mass == pytest.approx(1.0, abs=1e-10)
    assert v[-1] == 0


def test_energy_history_non_increasing(minimizer):
    assert np.all(np.diff(minimizer.history) <= 0)


def test_virial_and_energy_identity(minimizer):
    T, P, I0 = minimizer.T, minimizer.P, minimizer.I0
    assert abs(T - 0.75 * I0 * P) <= 1e-3 * T
    assert abs(minimizer.A - 0.625 * I0 * P) <= 1e-3 * minimizer.A
    assert minimizer.A == pytest.approx(0.0503412, rel=1e-5)


def test_A_stable_under_refinement(minimizer, I0):
    fine = dyson.minimize_variational(K=2 * minimizer.profile.K, I0=I0)
    assert abs(fine.A - minimizer.A) <= 5e-3 * minimizer.A


def test_minimizer_beats_gaussians(minimizer, I0):
    best = -minimizer.A
    for a in (0.1, 0.3, 0.7, 1.5):
        g = dyson.gaussian_profile(a, minimizer.profile.R, minimizer.profile.K).normalized()
        assert best <= dyson.energy_terms(g, I0)[0]


def test_grid_too_small(I0):
    with pytest.raises(dyson.GridTooSmallError, match="enlarge R"):
        dyson.minimize_variational(R=4.0, K=400, I0=I0)


def test_convergence_error(I0):
    with pytest.raises(dyson.ConvergenceError):
        dyson.minimize_variational(K=400, I0=I0, max_iter=3)


def test_initial_profile_grid_mismatch(I0):
    with pytest.raises(ValueError, match="different grid"):
        dyson.minimize_variational(K=400, I0=I0, initial=dyson.gaussian_profile(1.0, 60.0, 200))


# --- scaling ------------------------------------------------------------------------------


def test_scale_identity_at_one(minimizer):
    sc = dyson.scale_condensate(minimizer.profile, 1.0)
    assert np.array_equal(sc.grid.values, minimizer.profile.values)


@pytest.mark.parametrize("n", [1e4, 1e8])
def test_scaling_laws(minimizer, n):
    for name, resid in dyson.scale_condensate(minimizer.profile, n).checks().items():
        assert resid <= 1e-8, name


def test_trace_scaling(minimizer):
    tr = lambda n: dyson.phase_space_traces(minimizer.profile, dyson.TrialParameters(n)).trace_gamma
    assert tr(2e6) / tr(1e6) == pytest.approx(2**0.6, rel=1e-10)


def test_mean_number_ratio(minimizer):
    ratios = []
    for n in (1e4, 1e6, 1e8):
        t = dyson.phase_space_traces(minimizer.profile, dyson.TrialParameters(n))
        ratios.append((t.mean_number - n) / n**0.6)
    assert max(ratios) - min(ratios) <= 1e-10 * max(ratios)


def test_variance_needs_cutoff(minimizer):
    t = dyson.phase_space_traces(minimizer.profile, dyson.TrialParameters(1e4))
    assert t.variance_integral is None
    t = dyson.phase_space_traces(minimizer.profile, dyson.TrialParameters(1e4, eps=0.1))
    assert t.variance_integral > 0
    assert t.c_chi == pytest.approx(3.0, abs=1e-10)


def test_separable_trace(minimizer):
    out = dyson.separable_trace_check(minimizer.profile, 1e3)
    assert out["rel_diff"] <= 1e-6


def test_schedule():
    p = dyson.TrialParameters(1e8)
    assert p.scheduled
    assert p.schedule_residual() <= 1e-12
    with pytest.raises(ValueError):
        dyson.TrialParameters(-1.0)


# --- packet kernel ------------------------------------------------------------------------


def test_theta_kernel(minimizer):
    params = dyson.TrialParameters(1e4, ell=1.0)
    res = dyson.theta_kernel_expectation(0.0, 1.0, params, minimizer.profile)
    assert res.value == pytest.approx(res.value_closed_form, rel=1e-8)
    assert res.estimate_ok
    assert set(res.chain) >= {"smoothness", "localization", "combined"}


def test_theta_kernel_delta_limit(minimizer):
    params = dyson.TrialParameters(1e4, ell=1e3)
    res = dyson.theta_kernel_expectation(0.0, 1.0, params, minimizer.profile)
    assert res.estimate_gap <= 1e-3


# --- bound assembly --------------------------------------------------------------------------


def test_exponents_exact():
    chk = dyson.exponent_checks()
    assert chk["schedule_balance"] and chk["relative_order"] and chk["tail_exponent"]
    assert chk["e1"] == chk["e2"] == Fraction(48, 35)
    assert chk["tail"] == Fraction(67, 50)
    z = Fraction(2, 35)
    assert 3 * z - Fraction(1, 5) == -z / 2 == Fraction(-1, 35)


def test_main_term_is_minus_A(minimizer):
    n = 1e8
    rep = dyson.assemble_bound(minimizer.profile, dyson.TrialParameters(n), minimizer.I0)
    assert rep.main.value / n**1.4 == pytest.approx(-minimizer.A, rel=1e-8)
    assert rep.main.exponent == Fraction(7, 5)
    for t in rep.terms[1:]:
        assert t.value >= 0 and t.exponent == Fraction(48, 35)


def test_constants_zero_gives_main_only(minimizer):
    params = dyson.TrialParameters(1e6, constants={"C": 0.0})
    rep = dyson.assemble_bound(minimizer.profile, params, minimizer.I0)
    assert rep.total == rep.main.value


def test_total_is_sum(minimizer):
    rep = dyson.assemble_bound(minimizer.profile, dyson.TrialParameters(1e6), minimizer.I0)
    assert rep.total == pytest.approx(sum(t.value for t in rep.terms), rel=1e-12)
    assert isinstance(rep, BoundReport)
    assert [r["term"] for r in rep.rows()][0] == "main"


def test_cutoff_raises_main_term(minimizer):
    base = dyson.assemble_bound(minimizer.profile, dyson.TrialParameters(1e6), minimizer.I0)
    cut = dyson.assemble_bound(minimizer.profile, dyson.TrialParameters(1e6, eps=0.05), minimizer.I0)
    assert cut.main.value > base.main.value


# --- fixed N -----------------------------------------------------------------------------------


def test_fixed_N_structure(minimizer):
    rep = dyson.fixed_N_bound(1e8, 0.1, minimizer.profile, I0=minimizer.I0)
    tail = rep.term("number_tail")
    assert tail.exponent == Fraction(67, 50)
    assert rep.extras["N"] - 1e8**0.6 == pytest.approx(rep.extras["n"])
    assert rep.extras["variance_bound"] > rep.extras["n"]


def test_fixed_N_tail_vanishes_for_large_M(minimizer):
    small = dyson.fixed_N_bound(1e8, 0.1, minimizer.profile, I0=minimizer.I0, M=1e4)
    large = dyson.fixed_N_bound(1e8, 0.1, minimizer.profile, I0=minimizer.I0, M=1e40)
    assert large.term("number_tail").value < 1e-12 * small.term("number_tail").value


def test_holder_plug_in():
    n = 1e6
    M = n**0.6
    second, var = n * n + 2 * n, 2 * n
    direct = M**-0.6 * second**0.7 * var**0.3
    assert direct == pytest.approx(n**-0.36 * (n * n + 2 * n) ** 0.7 * (2 * n) ** 0.3, rel=1e-14)


def test_fixed_N_errors(minimizer):
    with pytest.raises(ValueError, match="cutoff"):
        dyson.fixed_N_bound(1e8, 0.0, minimizer.profile)
    with pytest.raises(ValueError, match="too small"):
        dyson.fixed_N_bound(1.0, 0.1, minimizer.profile)
