"""Two-component gas: the variational constant A and the trial-state energy bound.

The radial problem is

    -A = inf { 1/2 int |grad Phi|^2 - I0 int Phi^{5/2} : Phi >= 0, int Phi^2 = 1 }

on a uniform grid r_k = k h, k = 0..K, with Phi(R) = 0.  Integrals use the
trapezoid rule with weight 4 pi r^2; the gradient term uses forward
differences with the midpoint weight 4 pi r_{k+1/2}^2 / h.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.linalg import solve_banded

from .kernels import compute_I0, eval_g, radial_moments
from .packets import chi_gradient_constant, convolve_inverse_square, convolve_inverse_square_exact
from .report import BoundReport, BoundTerm, Tag

__all__ = [
    "ConvergenceError",
    "GridTooSmallError",
    "RadialProfile",
    "VariationalResult",
    "TrialParameters",
    "PhaseSpaceTraces",
    "ScaledCondensate",
    "radial_grid",
    "gaussian_profile",
    "gaussian_closed_form",
    "energy_terms",
    "energy_gradient",
    "minimize_variational",
    "scale_condensate",
    "phase_space_traces",
    "separable_trace_check",
    "theta_kernel_expectation",
    "assemble_bound",
    "fixed_N_bound",
    "SCHEDULE_EXPONENT",
    "DEFAULT_CONSTANTS",
]

#: Default packet width l = n^{-12/35}, i.e. n^{2/5} l = n^{2/35}.
SCHEDULE_EXPONENT = Fraction(-12, 35)
DEFAULT_CONSTANTS = {"C": 1.0, "C0": 1.0, "C1": 1.0, "C2": 1.0, "C_lower": 1.0}

F = Fraction


class ConvergenceError(ArithmeticError):
    pass


class GridTooSmallError(ValueError):
    pass


def radial_grid(R: float, K: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nodes r (K+1), mass weights b = 4 pi w r^2 and stiffness c (K links)."""
    if R <= 0 or K < 4:
        raise ValueError(f"need R > 0 and K >= 4, got R={R}, K={K}")
    h = R / K
    r = np.arange(K + 1) * h
    w = np.full(K + 1, h)
    w[0] = w[-1] = h / 2
    b = 4 * math.pi * w * r * r
    mid = (np.arange(K) + 0.5) * h
    c = 4 * math.pi * mid * mid / h
    return r, b, c


@dataclass(frozen=True)
class RadialProfile:
    R: float
    values: np.ndarray  # Phi(r_k), k = 0..K, last entry 0

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 1 or v.size < 5:
            raise ValueError("profile needs at least 5 nodes")
        if np.any(v < 0):
            raise ValueError(f"profile must be nonnegative (min {v.min():.3e})")
        if v[-1] != 0:
            raise ValueError("profile must vanish at the outer radius")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def K(self) -> int:
        return self.values.size - 1

    @property
    def h(self) -> float:
        return self.R / self.K

    @property
    def r(self) -> np.ndarray:
        return np.arange(self.K + 1) * self.h

    def _grid(self):
        return radial_grid(self.R, self.K)

    def moment(self, s: float) -> float:
        """int Phi^s d^3x."""
        _, b, _ = self._grid()
        return float(np.sum(b * self.values**s))

    @property
    def mass(self) -> float:
        return self.moment(2.0)

    @property
    def kinetic(self) -> float:
        """int |grad Phi|^2."""
        _, _, c = self._grid()
        return float(np.sum(c * np.diff(self.values) ** 2))

    def __call__(self, r):
        return np.interp(np.abs(r), self.r, self.values, right=0.0)

    def normalized(self) -> "RadialProfile":
        return RadialProfile(self.R, self.values / math.sqrt(self.mass))


def gaussian_profile(a: float, R: float, K: int) -> RadialProfile:
    """Samples of (2a/pi)^{3/4} exp(-a r^2), unit mass in the continuum."""
    r = np.arange(K + 1) * (R / K)
    v = (2 * a / math.pi) ** 0.75 * np.exp(-a * r * r)
    v[-1] = 0.0
    return RadialProfile(R, v)


def gaussian_closed_form(a: float, I0: float) -> dict:
    """Continuum kinetic, 5/2-moment and energy of the unit-mass Gaussian."""
    T = 3 * a
    P = (2 * a / math.pi) ** (15 / 8) * (2 * math.pi / (5 * a)) ** 1.5
    return {"T": T, "P": P, "energy": 0.5 * T - I0 * P}


def energy_terms(profile: RadialProfile, I0: float) -> tuple[float, float, float]:
    """(energy, T, P) with energy = T/2 - I0 P."""
    T = profile.kinetic
    P = profile.moment(2.5)
    return 0.5 * T - I0 * P, T, P


def _energy(v, b, c, I0):
    d = np.diff(v)
    T = float(np.sum(c * d * d))
    P = float(np.sum(b * np.clip(v, 0, None) ** 2.5))
    return 0.5 * T - I0 * P, T, P


def _gradient(v, b, c, I0):
    d = np.diff(v)
    g = np.zeros_like(v)
    g[:-1] -= c * d
    g[1:] += c * d
    g -= 2.5 * I0 * b * np.clip(v, 0, None) ** 1.5
    g[-1] = 0.0  # Dirichlet node is not a free variable
    return g


def energy_gradient(values, R: float, I0: float) -> np.ndarray:
    """Gradient of T/2 - I0 P with respect to the free nodes 0..K-1 (last entry 0)."""
    v = np.asarray(values, dtype=float)
    _, b, c = radial_grid(R, v.size - 1)
    return _gradient(v, b, c, I0)


def energy_value(values, R: float, I0: float) -> float:
    v = np.asarray(values, dtype=float)
    _, b, c = radial_grid(R, v.size - 1)
    return _energy(v, b, c, I0)[0]


__all__.append("energy_value")


@dataclass(frozen=True)
class VariationalResult:
    profile: RadialProfile
    A: float
    T: float
    P: float
    I0: float
    iterations: int
    history: np.ndarray = field(repr=False)

    @property
    def virial_residual(self) -> float:
        """|T - (3/4) I0 P| / T."""
        return abs(self.T - 0.75 * self.I0 * self.P) / self.T

    @property
    def energy_identity_residual(self) -> float:
        """|A - (5/8) I0 P| / A."""
        return abs(self.A - 0.625 * self.I0 * self.P) / self.A


def _preconditioner(b, c):
    # banded L + B on the free nodes 0..K-1
    K = c.size
    diag = np.zeros(K)
    diag += c
    diag[1:] += c[:-1]
    ab = np.zeros((3, K))
    ab[1] = diag + b[:K]
    ab[0, 1:] = -c[:-1]
    ab[2, :-1] = -c[:-1]
    return ab


def minimize_variational(
    R: float = 60.0,
    K: int = 2000,
    I0: float | None = None,
    tol: float = 1e-10,
    patience: int = 10,
    max_iter: int = 20000,
    initial: RadialProfile | None = None,
    boundary_tol: float = 1e-8,
) -> VariationalResult:
    """Preconditioned projected gradient flow on the unit sphere of L^2.

    Each step moves along M^{-1} G projected to stay tangent to the mass
    constraint (M = discrete Laplacian plus mass matrix), clamps negative
    values and renormalizes.  The step is halved until the energy does not
    increase and grows by 1.5 after each accepted step.
    """
    if I0 is None:
        I0 = compute_I0().quadrature
    r, b, c = radial_grid(R, K)
    if initial is None:
        v = np.exp(-r * r / 2)
        v[-1] = 0.0
    else:
        if initial.K != K or initial.R != R:
            raise ValueError("initial profile lives on a different grid")
        v = np.array(initial.values)
    v /= math.sqrt(np.sum(b * v * v))
    ab = _preconditioner(b, c)
    free = slice(0, K)

    E = _energy(v, b, c, I0)[0]
    history = [E]
    tau = 1.0
    it = 0
    quiet = 0
    while quiet < patience:
        it += 1
        if it > max_iter:
            raise ConvergenceError(f"no convergence after {max_iter} iterations (energy {E:.12g})")
        G = _gradient(v, b, c, I0)[free]
        MG = solve_banded((1, 1), ab, G)
        MB = solve_banded((1, 1), ab, b[free] * v[free])
        alpha = (v[free] @ (b[free] * MG)) / (v[free] @ (b[free] * MB))
        d = MG - alpha * MB
        while True:
            w = v.copy()
            w[free] = np.clip(v[free] - tau * d, 0, None)
            w /= math.sqrt(np.sum(b * w * w))
            En = _energy(w, b, c, I0)[0]
            if En <= E:
                break
            tau *= 0.5
            if tau < 1e-14:
                raise ConvergenceError(f"step size collapsed at iteration {it}")
        quiet = quiet + 1 if abs(En - E) < tol * abs(En) else 0
        v, E = w, En
        history.append(E)
        tau = min(1.5 * tau, 10.0)

    prof = RadialProfile(R, v)
    edge = v[int(0.95 * K):]
    if edge.max() > boundary_tol:
        raise GridTooSmallError(
            f"profile still {edge.max():.3e} near the outer radius R={R}; enlarge R"
        )
    E, T, P = _energy(v, b, c, I0)
    return VariationalResult(prof, -E, T, P, I0, it, np.array(history))


# --- scaling and phase space -----------------------------------------------------


@dataclass(frozen=True)
class ScaledCondensate:
    """phi0(x) = n^{3/10} Phi(n^{1/5} x) sampled on the shrunk grid."""

    n: float
    profile: RadialProfile

    @property
    def grid(self) -> RadialProfile:
        s = self.n**0.2
        return RadialProfile(self.profile.R / s, self.n**0.3 * self.profile.values)

    def __call__(self, x):
        return self.n**0.3 * self.profile(self.n**0.2 * np.asarray(x, dtype=float))

    def checks(self) -> dict:
        """Relative residuals of the three scaling laws used for the trace and kinetic terms."""
        g, P = self.grid, self.profile
        n = self.n
        return {
            "mass": abs(g.mass - P.mass) / P.mass,
            "kinetic": abs(g.kinetic - n**0.4 * P.kinetic) / (n**0.4 * P.kinetic),
            "three_halves": abs(n**0.75 * g.moment(1.5) - n**0.6 * P.moment(1.5))
            / (n**0.6 * P.moment(1.5)),
        }


def scale_condensate(profile: RadialProfile, n: float) -> ScaledCondensate:
    if n <= 0:
        raise ValueError("n must be positive")
    return ScaledCondensate(n, profile)


@dataclass(frozen=True)
class TrialParameters:
    n: float
    ell: float | None = None  # None selects the default schedule
    eps: float = 0.0
    constants: dict = field(default_factory=lambda: dict(DEFAULT_CONSTANTS))

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("n must be positive")
        if self.eps < 0:
            raise ValueError("eps must be nonnegative")
        if self.ell is not None and self.ell <= 0:
            raise ValueError("ell must be positive")
        merged = dict(DEFAULT_CONSTANTS)
        merged.update(self.constants)
        object.__setattr__(self, "constants", merged)

    @property
    def scheduled(self) -> bool:
        return self.ell is None

    @property
    def width(self) -> float:
        return self.n ** float(SCHEDULE_EXPONENT) if self.ell is None else self.ell

    def schedule_residual(self) -> float:
        """|l n^{2/5} - n^{2/35}| / n^{2/35}."""
        return abs(self.width * self.n**0.4 - self.n ** (2 / 35)) / self.n ** (2 / 35)


@dataclass(frozen=True)
class PhaseSpaceTraces:
    trace_gamma: float
    kinetic_main: float
    kinetic_packet_correction: float
    variance_integral: float | None
    c_chi: float
    mean_number: float


_TRACE_PREF = 2**-0.75 * math.pi**-2.25
_KIN_PREF = 2**0.75 * math.pi**-1.75
_COUL_PREF = 2**-0.25 * math.pi**-1.75


def phase_space_traces(profile: RadialProfile, params: TrialParameters, moments=None) -> PhaseSpaceTraces:
    n, eps = params.n, params.eps
    if moments is None:
        moments = radial_moments(eps, need_V=eps > 0)
    s32 = profile.moment(1.5)
    s52 = profile.moment(2.5)
    tr = _TRACE_PREF * n**0.6 * s32 * moments.M0
    kin = _KIN_PREF * n**1.4 * s52 * moments.M2
    c_chi = chi_gradient_constant()
    packet = c_chi / params.width**2 * tr
    var = _TRACE_PREF * n**0.6 * s32 * moments.V if moments.V is not None else None
    return PhaseSpaceTraces(tr, kin, packet, var, c_chi, n + tr)


def separable_trace_check(profile: RadialProfile, n: float, eps: float = 0.0, panels_per_decade: int = 40) -> dict:
    """(2 pi)^-3 int int f(u, p) du dp on a (|u|, |p|) tensor grid, against the reduced form.

    The momentum integral is done on a fixed absolute log grid for every u, so
    the p -> p / s(u) rescaling behind the reduced form is not used.
    """
    phi = scale_condensate(profile, n).grid
    r, b, _ = radial_grid(phi.R, phi.K)
    s = (8 * math.pi * n * phi.values**2) ** 0.25
    x, w = np.polynomial.legendre.leggauss(8)
    edges = np.linspace(-8.0, 5.0, 13 * panels_per_decade + 1)
    lo, hi = edges[:-1, None], edges[1:, None]
    t = (0.5 * (hi - lo) * x + 0.5 * (hi + lo)).ravel()
    wt = (0.5 * (hi - lo) * w).ravel() * math.log(10)
    p = 10.0**t
    inner = np.zeros_like(s)
    on = s > 0
    with np.errstate(divide="ignore", over="ignore"):
        G = eval_g(p[None, :] / s[on, None], eps)
    inner[on] = (G * (4 * math.pi * p**3 * wt)[None, :]).sum(axis=1)
    direct = (2 * math.pi) ** -3 * float(np.sum(b * inner))
    reduced = phase_space_traces(profile, TrialParameters(n, eps=eps)).trace_gamma
    return {"direct": direct, "reduced": reduced, "rel_diff": abs(direct - reduced) / reduced}


# --- packet kernel ------------------------------------------------------------------


@dataclass(frozen=True)
class ThetaKernelResult:
    value: float
    value_closed_form: float
    phi0_sq: float
    chain: dict
    estimate_gap: float
    estimate_bound: float

    @property
    def estimate_ok(self) -> bool:
        return self.estimate_gap <= self.estimate_bound


__all__.append("ThetaKernelResult")


def theta_kernel_expectation(u: float, p: float, params: TrialParameters, profile: RadialProfile) -> ThetaKernelResult:
    """<theta_{u,p}| |x-y|^-1 |theta_{u,p}> for phi0 frozen at its value at |u|.

    ``chain`` lists the three correction terms that relate the packet
    expectation with varying phi0 to this constant value; each carries the
    configurable constant ``C``.
    """
    n, ell = params.n, params.width
    C = params.constants["C"]
    phi0 = float(scale_condensate(profile, n)(u))
    conv = convolve_inverse_square(p, ell)
    value = 4 * math.pi * conv * phi0**2
    closed = 4 * math.pi * float(convolve_inverse_square_exact(p, ell)) * phi0**2
    z = n**0.4 * ell
    delta = z * n**-0.2
    chain = {
        "delta_prime": delta,
        "smoothness": -C * z**4 * n**-0.6 / delta,
        "localization": -C * delta * z**2 * n**-0.2,
        "combined": -C * z**3 * n**-0.4,
    }
    gap = abs(p**-2 - conv)
    return ThetaKernelResult(value, closed, phi0**2, chain, gap, ell**-0.5 * p**-2.5)


# --- bound assembly ---------------------------------------------------------------


def _error_exponents() -> tuple[Fraction, Fraction]:
    z = F(2, 5) + SCHEDULE_EXPONENT  # exponent of n^{2/5} l
    return F(7, 5) + 3 * z - F(1, 5), F(7, 5) - z / 2


def assemble_bound(profile: RadialProfile, params: TrialParameters, I0: float | None = None, moments=None) -> BoundReport:
    """Upper bound on the energy of the two-component trial state.

    main = n^{7/5} (T/2 + 2^{-1/4} pi^{-7/4} P (M2 - X)), which equals
    n^{7/5} (T/2 - I0 P) at eps = 0.
    """
    if I0 is None:
        I0 = compute_I0().quadrature
    if moments is None:
        moments = radial_moments(params.eps, need_V=params.eps > 0)
    n, ell = params.n, params.width
    C = params.constants["C"]
    T, P = profile.kinetic, profile.moment(2.5)
    bracket = 0.5 * T + _COUL_PREF * P * (moments.M2 - moments.X)
    z = n**0.4 * ell
    e1, e2 = _error_exponents() if params.scheduled else (None, None)
    terms = (
        BoundTerm("main", n**1.4 * bracket, Tag.PAIRING_ENERGY, F(7, 5)),
        BoundTerm("packet_localization", C * n**1.4 * z**3 * n**-0.2, Tag.PACKET_SCHEDULE, e1, "C"),
        BoundTerm("kernel_smoothing", C * n**1.4 * z**-0.5, Tag.PACKET_SCHEDULE, e2, "C"),
    )
    traces = phase_space_traces(profile, params, moments)
    extras = {
        "n": n,
        "ell": ell,
        "eps": params.eps,
        "main_per_n75": bracket,
        "variational_energy": 0.5 * T - I0 * P,
        "kinetic_packet_correction": 0.5 * traces.kinetic_packet_correction,
        "mean_number": traces.mean_number,
    }
    return BoundReport("two-component", "n", terms, extras)


def _tail_exponent() -> Fraction:
    # M^{-3/5} with M ~ N^{3/5}, times <N^2>^{7/10} var^{3/10} ~ n^{7/5} n^{3/10}
    return F(-3, 5) * F(3, 5) + F(2, 1) * F(7, 10) + F(3, 10)


def fixed_N_bound(
    N: float,
    eps: float,
    profile: RadialProfile,
    constants: dict | None = None,
    I0: float | None = None,
    M: float | None = None,
) -> BoundReport:
    """Canonical bound: grand-canonical state at n = N - C0 N^{3/5} plus the particle-number tail."""
    if eps <= 0:
        raise ValueError("the fixed-N bound needs a momentum cutoff eps > 0")
    const = dict(DEFAULT_CONSTANTS)
    const.update(constants or {})
    n = N - const["C0"] * N**0.6
    if n <= 0:
        raise ValueError(f"N = {N} too small: n = N - C0 N^(3/5) = {n} <= 0")
    params = TrialParameters(n, eps=eps, constants=const)
    moments = radial_moments(eps)
    base = assemble_bound(profile, params, I0, moments)
    tr = phase_space_traces(profile, params, moments)
    mean = tr.mean_number
    var = n + 2 * tr.variance_integral
    second = var + mean * mean
    if M is None:
        M = const["C2"] * N**0.6
    tail = M**-0.6 * second**0.7 * var**0.3
    expo = _tail_exponent()
    terms = base.terms + (
        BoundTerm("number_tail", const["C_lower"] * tail, Tag.NUMBER_TAIL, expo, "C_lower"),
    )
    extras = dict(base.extras)
    extras.update({
        "N": N,
        "variance_bound": var,
        "C_eps": 2 * tr.variance_integral / n**0.6,
        "second_moment": second,
        "M": M,
        "tail_raw": tail,
    })
    return BoundReport("two-component fixed N", "N", terms, extras)


def exponent_checks() -> dict:
    """Exact rational checks of the error-term bookkeeping."""
    e1, e2 = _error_exponents()
    return {
        "schedule_balance": e1 == e2 == F(7, 5) - F(1, 35),
        "relative_order": e1 - F(7, 5) == F(-1, 35),
        "tail_exponent": _tail_exponent() == F(7, 5) - F(3, 50) == F(67, 50),
        "e1": e1,
        "e2": e2,
        "tail": _tail_exponent(),
    }


__all__.append("exponent_checks")
