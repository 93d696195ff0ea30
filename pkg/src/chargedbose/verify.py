"""Oracle and inequality suites used by ``chargedbose verify``.

Every suite returns ``{"checks": {name: {"value", "threshold", "ok"}}, "ok": bool}``
and may add an ``"advisories"`` map of measured quantities that are reported
but not gated.  Outputs depend only on the seed, never on timing.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import berezin_lieb as bl
from . import bogolubov as bg
from . import dyson, fock, jellium, kernels, packets

__all__ = ["SUITES", "run_suite", "run_all"]


def _check(value: float, threshold: float, ok: bool | None = None) -> dict:
    value = float(value)
    if ok is None:
        ok = value <= threshold
    return {"value": value, "threshold": float(threshold), "ok": bool(ok)}


def _summary(checks: dict, advisories: dict | None = None) -> dict:
    out = {"checks": checks, "ok": all(c["ok"] for c in checks.values())}
    if advisories:
        out["advisories"] = advisories
    return out


def _rel(a, b) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


# --- Fock oracles ----------------------------------------------------------------


def squeezed_amplitudes(lam: float, n_max: int) -> np.ndarray:
    """Single-mode squeezed vacuum: c_{2m} = (1 - lam^2)^{1/4} (-lam/2)^m sqrt((2m)!) / m!."""
    c = np.zeros(n_max + 1)
    for m in range(n_max // 2 + 1):
        c[2 * m] = (1 - lam * lam) ** 0.25 * (-lam / 2) ** m * math.sqrt(math.factorial(2 * m)) / math.factorial(m)
    return c


def _series_moment(c: np.ndarray, j: int, k: int) -> float:
    """<a*^j a^k> from single-mode amplitudes c_N."""
    total = 0.0
    for N in range(k, len(c)):
        M = N - k + j
        if M >= len(c):
            continue
        down = math.sqrt(math.perm(N, k))
        up = math.sqrt(math.perm(M, j))
        total += c[M] * c[N] * down * up
    return total


def fock_suite(seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    checks = {}
    # coherent, d = 2
    basis = fock.build_basis(2, 14)
    phi = rng.uniform(-0.6, 0.6, size=2) + 1j * rng.uniform(-0.6, 0.6, size=2)
    st = fock.prepare_state(basis, fock.Coherent(phi))
    N = fock.number_operator(basis)
    mean = fock.expectation(st, N).real
    var = fock.expectation(st, N @ N).real - mean**2
    norm2 = float(np.vdot(phi, phi).real)
    checks["coherent_defect"] = _check(st.truncation_defect, 1e-12)
    checks["coherent_mean"] = _check(abs(mean - norm2), 1e-10)
    checks["coherent_variance"] = _check(abs(var - norm2), 1e-10)
    # squeezed, d = 1
    lam = 0.15
    b1 = fock.build_basis(1, 14)
    sq = fock.prepare_state(b1, fock.Squeezed(lam, [1.0]))
    N1 = fock.number_operator(b1)
    m1 = fock.expectation(sq, N1).real
    v1 = fock.expectation(sq, N1 @ N1).real - m1**2
    checks["squeezed_defect"] = _check(sq.truncation_defect, 1e-12)
    checks["squeezed_mean"] = _check(abs(m1 - lam**2 / (1 - lam**2)), 1e-10)
    checks["squeezed_variance"] = _check(abs(v1 - 2 * lam**2 / (1 - lam**2) ** 2), 1e-10)
    c = squeezed_amplitudes(lam, 14)
    cr = fock.ladder_matrix(b1, [1.0], "creation").matrix
    an = fock.ladder_matrix(b1, [1.0], "annihilation").matrix
    worst = 0.0
    for j in range(3):
        for k in range(3):
            op = np.linalg.matrix_power(cr, j) @ np.linalg.matrix_power(an, k)
            val = np.vdot(sq.amplitudes, op @ sq.amplitudes)
            worst = max(worst, abs(val - _series_moment(c / np.linalg.norm(c), j, k)))
    checks["squeezed_moments"] = _check(worst, 1e-10)
    # CCR below the top sector
    f = rng.normal(size=2) + 1j * rng.normal(size=2)
    g = rng.normal(size=2) + 1j * rng.normal(size=2)
    af = fock.ladder_matrix(basis, f, "annihilation").matrix
    ag = fock.ladder_matrix(basis, g, "creation").matrix
    comm = af @ ag - ag @ af
    low = basis.totals < basis.n_max
    target = np.vdot(f, g) * np.eye(basis.size)
    checks["ccr"] = _check(np.abs((comm - target)[np.ix_(low, low)]).max(), 1e-12)
    return _summary(checks)


def _random_bogolubov(rng, d: int, lam_max: float, phi_scale: float) -> bg.BogolubovData:
    q, _ = np.linalg.qr(rng.normal(size=(d, d)))
    lam = rng.uniform(0.02, lam_max, size=d)
    phi = phi_scale * (rng.normal(size=d) + 1j * rng.normal(size=d))
    return bg.BogolubovData.from_spectral(bg.SpectralPairs(q.T, lam), phi)


def bogolubov_suite(seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    d = 2
    basis = fock.build_basis(d, 14)
    checks = {}
    # Wick on the undisplaced state
    bare = _random_bogolubov(rng, d, 0.08, 0.0)
    st = fock.prepare_state(basis, fock.Bogolubov(bare))
    checks["quasi_free_defect"] = _check(st.truncation_defect, 1e-12)
    worst = {4: 0.0, 6: 0.0}
    for m in (2, 3):
        for _ in range(6):
            ops = [bg.Ladder(bool(rng.integers(2)), rng.normal(size=d) + 1j * rng.normal(size=d))
                   for _ in range(2 * m)]
            mat = np.eye(basis.size, dtype=complex)
            for op in ops:
                kind = "creation" if op.dagger else "annihilation"
                mat = mat @ fock.ladder_matrix(basis, op.vec, kind).matrix
            direct = np.vdot(st.amplitudes, mat @ st.amplitudes)
            wick = bg.wick_expectation(bg.quasi_free_two_point(bare, ops), ops).value
            worst[2 * m] = max(worst[2 * m], abs(direct - wick) / max(1.0, abs(wick)))
    checks["wick_m2"] = _check(worst[4], 1e-9)
    checks["wick_m3"] = _check(worst[6], 1e-9)
    # density matrices of the displaced state
    data = _random_bogolubov(rng, d, 0.12, 0.25)
    st = fock.prepare_state(basis, fock.Bogolubov(data))
    checks["bogolubov_defect"] = _check(st.truncation_defect, 1e-12)
    cr = [fock.ladder_matrix(basis, e, "creation").matrix for e in np.eye(d)]
    an = [c.conj().T for c in cr]
    G = np.array([[np.vdot(st.amplitudes, cr[a] @ an[b] @ st.amplitudes) for b in range(d)] for a in range(d)])
    one = bg.one_pdm_matrix(data)
    checks["one_pdm"] = _check(np.abs(G - one).max(), 1e-8)
    D = bg.two_pdm_tensor(data)
    worst2 = 0.0
    for a in range(d):
        for b in range(d):
            for m in range(d):
                for n in range(d):
                    v = np.vdot(st.amplitudes, cr[a] @ cr[b] @ an[n] @ an[m] @ st.amplitudes)
                    worst2 = max(worst2, abs(v - D[a, b, m, n]))
    checks["two_pdm"] = _check(worst2, 1e-8)
    rep = bg.validate_pair(data.gamma1, data.xi1)
    checks["pair_validity"] = _check(max(rep.residuals.values()), bg.PAIR_TOL)
    alt = fock.displaced_state(basis, data)
    checks["weyl_route"] = _check(np.abs(alt.amplitudes - st.amplitudes).max(), 1e-10)
    return _summary(checks)


# --- kernels, packets ----------------------------------------------------------


def kernels_suite(seed: int = 0) -> dict:
    checks = {}
    I0 = kernels.compute_I0()
    checks["I0_quadrature_vs_gamma_form"] = _check(_rel(I0.quadrature, I0.gamma_form), 1e-8)
    br = kernels.check_bracket_identity()
    checks["bracket_pointwise"] = _check(br.max_pointwise_residual, 1e-10)
    checks["bracket_integrated"] = _check(br.integrated_rel_error, 1e-6)
    worst_step = 0.0
    worst_stat = 0.0
    for p in np.logspace(-2, 1, 20):
        rep = kernels.check_g_optimality(float(p))
        worst_step = max(worst_step, abs(rep.argmin - rep.g) / rep.grid_step)
        worst_stat = max(worst_stat, rep.stationarity_residual)
    checks["g_optimality_argmin_steps"] = _check(worst_step, 1.0)
    checks["g_optimality_stationarity"] = _check(worst_stat, 1e-8)
    mom = kernels.radial_moments(1e-3)
    checks["V_closed_form"] = _check(_rel(mom.V, kernels.V_closed_form(1e-3)), 1e-8)
    advisories = {
        "I0_printed_closed_form": I0.closed_form,
        "I0_printed_closed_form_ratio": I0.closed_form / I0.quadrature,
        "seam_relative_gap": _rel(float(kernels.g_naive(kernels.SEAM)), float(kernels.g_stable(kernels.SEAM))),
    }
    return _summary(checks, advisories)


def packets_suite(seed: int = 0) -> dict:
    checks = {}
    worst = max(abs(packets.j_ell_mass(ell)[0] - 1) for ell in (0.3, 1.0, 3.0))
    checks["j_mass"] = _check(worst, 1e-10)
    ratio = max(
        (lambda e: e.gap / e.bound)(packets.convolution_estimate(ell, p))
        for ell in (0.3, 1.0, 3.0) for p in (0.3, 1.0, 3.0)
    )
    checks["convolution_estimate_ratio"] = _check(ratio, 1.0)
    dawson = max(
        _rel(packets.convolve_inverse_square(p, ell), float(packets.convolve_inverse_square_exact(p, ell)))
        for ell in (0.3, 1.0, 3.0) for p in (0.3, 1.0, 3.0)
    )
    checks["convolution_dawson"] = _check(dawson, 1e-8)
    checks["chi_gradient"] = _check(abs(packets.chi_gradient_constant() - 3.0), 1e-10)
    return _summary(checks)


# --- Berezin-Lieb ---------------------------------------------------------------


def berezin_suite(seed: int = 0) -> dict:
    res = bl.berezin_lieb_suite(seed, trials=200, max_d=8)
    checks = {
        "concave_operator_violation": _check(-res["concave_operator_min"], 1e-10),
        "concave_scalar_violation": _check(-res["concave_scalar_min"], 1e-10),
        "convex_operator_violation": _check(res["convex_operator_max"], 1e-10),
        "convex_scalar_violation": _check(res["convex_scalar_max"], 1e-10),
        "dilation_residual": _check(res["dilation_max_residual"], 1e-10),
    }
    children = np.random.SeedSequence(seed).spawn(3)
    seeds = [int(c.generate_state(1)[0]) for c in children]
    for name, s in zip(("sqrt", "pair_minus_t"), seeds):
        rep = bl.probe_operator_concavity(bl.XI[name], 6, 500, s)
        checks[f"concavity_{name}_violation"] = _check(-rep.min_eigenvalue, 1e-10, rep.concave_consistent)
    sq = bl.probe_operator_concavity(bl.XI["square"], 6, 500, seeds[2])
    checks["concavity_square_counterexample"] = _check(sq.min_eigenvalue, -1e-10, not sq.concave_consistent)
    return _summary(checks)


# --- two-component ----------------------------------------------------------------


def dyson_suite(seed: int = 0) -> dict:
    checks = {}
    res = dyson.minimize_variational()
    checks["virial"] = _check(res.virial_residual, 1e-3)
    checks["energy_identity"] = _check(res.energy_identity_residual, 1e-3)
    # gradient at a generic (non-stationary) trial profile, on nodes where it is not
    # swamped by rounding in E
    R, I0 = res.profile.R, res.I0
    v = np.array(dyson.gaussian_profile(0.7, R, res.profile.K).values)
    grad = dyson.energy_gradient(v, R, I0)
    bulk = np.flatnonzero(np.abs(grad) >= 1e-2 * np.abs(grad).max())
    h = 1e-6 * v.max()
    worst = 0.0
    for k in bulk[:: max(1, len(bulk) // 8)]:
        up, dn = v.copy(), v.copy()
        up[k] += h
        dn[k] -= h
        fd = (dyson.energy_value(up, R, I0) - dyson.energy_value(dn, R, I0)) / (2 * h)
        worst = max(worst, _rel(fd, grad[k]))
    checks["gradient_fd"] = _check(worst, 1e-6)
    ex = dyson.exponent_checks()
    checks["schedule_balance"] = _check(0.0, 0.0, ex["schedule_balance"] and ex["relative_order"])
    checks["tail_exponent"] = _check(0.0, 0.0, ex["tail_exponent"])
    sep = dyson.separable_trace_check(res.profile, 1e3)
    checks["separable_trace"] = _check(sep["rel_diff"], 1e-6)
    return _summary(checks, {"A": res.A, "iterations": res.iterations})


# --- one-component ------------------------------------------------------------------


def jellium_suite(seed: int = 0) -> dict:
    checks = {}
    worst = 0.0
    for rho in (1.0, 1e2, 1e4):
        for eps in (0.05, 0.5):
            prof = jellium.build_eta(20 * rho ** (-1 / 3), rho ** (-1 / 3), rho)
            sym = jellium.build_gamma_symbol(prof, eps)
            worst = max(worst, sym.neutrality_residual / rho)
    checks["neutrality"] = _check(worst, 1e-12)
    small = jellium.build_eta(5.0, 1.0, 1.0)
    checks["mismatch_oracle"] = _check(
        _rel(jellium.mismatch_gaussian(small), jellium.mismatch_direct(small)), 1e-3
    )
    sandwich = all(jellium.j_profile_checks(jellium.build_eta(L, 1.0, 1.0))["sandwich_ok"] for L in (50.0, 100.0, 200.0))
    checks["j_sandwich"] = _check(0.0, 0.0, sandwich)
    hd = jellium.hardy_direction_check(seed=seed)
    checks["hardy_direction"] = _check(hd["exact"] / hd["hardy_chain"], 1.0)
    prof = jellium.build_eta(50.0, 1.0, 1e4)
    dev = [
        jellium.assemble_bound(prof, jellium.JelliumParams(1e4, eps=e)).extras["foldy_limit"]["deviation"]
        for e in (1e-2, 5e-3)
    ]
    ratio = dev[1] / dev[0]
    checks["foldy_deviation_halving"] = _check(ratio, 0.55, 0.45 <= ratio <= 0.55 and dev[0] > 0)
    ok = jellium.foldy_schedule_exponent() == Fraction(5, 4) - Fraction(1, 12) == Fraction(7, 6)
    checks["foldy_schedule_exponent"] = _check(0.0, 0.0, ok)
    return _summary(checks)


SUITES = {
    "fock": fock_suite,
    "bogolubov": bogolubov_suite,
    "kernels": kernels_suite,
    "packets": packets_suite,
    "berezin": berezin_suite,
    "dyson": dyson_suite,
    "jellium": jellium_suite,
}


def run_suite(name: str, seed: int = 0) -> dict:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](seed)


def run_all(seed: int = 0, names=None) -> dict:
    names = list(SUITES) if names is None else list(names)
    results = {n: run_suite(n, seed) for n in names}
    return {"suites": results, "ok": all(r["ok"] for r in results.values())}
