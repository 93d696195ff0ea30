"""One-component gas: edge profile, neutrality, exchange bounds and the bound assembly.

The box is (0, L)^3 with background density rho.  The condensate shape is
phi0(x) = eta(x1) eta(x2) eta(x3) where eta rises from 0 to a plateau c over
a layer of width r at each end (smoothstep ramp) and int eta^2 = 1.  Lengths
are absolute; the command-line layer expresses them in units of rho^{-1/3}.

Coulomb double integrals of separable densities are evaluated through

    1/|x| = (2/sqrt(pi)) int_0^inf exp(-s^2 |x|^2) ds,

which turns them into products of one-dimensional kernels
K_fg(s) = int int f(x) g(y) exp(-s^2 (x-y)^2) dx dy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import integrate, special

from .kernels import compute_I0, eval_g, radial_moments
from .report import BoundReport, BoundTerm, Tag

__all__ = [
    "FeasibilityError",
    "EdgeProfile",
    "JelliumParams",
    "GammaSymbol",
    "build_eta",
    "phi0_metrics",
    "mismatch_gaussian",
    "mismatch_direct",
    "build_gamma_symbol",
    "j_profile_checks",
    "exchange_bound",
    "hardy_direction_check",
    "assemble_bound",
    "foldy_schedule_exponent",
    "SMOOTHSTEP_S2",
    "SMOOTHSTEP_DS2",
]

F = Fraction

#: int_0^1 s^2 and int_0^1 s'^2 for s(t) = 3t^2 - 2t^3.
SMOOTHSTEP_S2 = F(13, 35)
SMOOTHSTEP_DS2 = F(6, 5)

_GL8 = np.polynomial.legendre.leggauss(8)
_GL16 = np.polynomial.legendre.leggauss(16)


class FeasibilityError(ValueError):
    def __init__(self, message: str, rho_threshold: float):
        super().__init__(message)
        self.rho_threshold = rho_threshold


def smoothstep(t):
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    return t * t * (3 - 2 * t)


def smoothstep_prime(t):
    t = np.asarray(t, dtype=float)
    inside = (t > 0) & (t < 1)
    return np.where(inside, 6 * t * (1 - t), 0.0)


@dataclass(frozen=True)
class EdgeProfile:
    L: float
    r: float
    rho: float
    c: float

    @property
    def n(self) -> float:
        return self.rho / self.c**6

    @property
    def breakpoints(self) -> tuple:
        return (0.0, self.r, self.L - self.r, self.L)

    def eta(self, t):
        t = np.asarray(t, dtype=float)
        ramp = np.minimum(t, self.L - t) / self.r
        out = self.c * smoothstep(ramp)
        return np.where((t <= 0) | (t >= self.L), 0.0, out)

    def eta_prime(self, t):
        t = np.asarray(t, dtype=float)
        left = self.c / self.r * smoothstep_prime(t / self.r)
        right = -self.c / self.r * smoothstep_prime((self.L - t) / self.r)
        return left + right

    def deficit(self, t):
        """1 - eta^2 / c^2 inside the box, 0 outside."""
        t = np.asarray(t, dtype=float)
        inside = (t >= 0) & (t <= self.L)
        return np.where(inside, 1 - (self.eta(t) / self.c) ** 2, 0.0)

    def phi0(self, x):
        x = np.asarray(x, dtype=float)
        return np.prod(self.eta(x), axis=-1)

    def norm_eta(self) -> float:
        return _piecewise_integral(lambda t: self.eta(t) ** 2, self.breakpoints)

    def kinetic(self) -> float:
        """int |grad phi0|^2 = 3 int eta'^2 = 3 * 2 c^2 int s'^2 / r."""
        return 6 * self.c**2 * float(SMOOTHSTEP_DS2) / self.r

    def kinetic_numeric(self) -> float:
        return 3 * _piecewise_integral(lambda t: self.eta_prime(t) ** 2, self.breakpoints)

    def derivative_constant(self) -> float:
        """max |eta'| * r * L^{1/2}."""
        return self.c * 1.5 / self.r * self.r * math.sqrt(self.L)


def _piecewise_integral(f, breaks, nodes=_GL16) -> float:
    x, w = nodes
    total = 0.0
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b > a:
            t = 0.5 * (b - a) * x + 0.5 * (a + b)
            total += 0.5 * (b - a) * float(np.sum(w * f(t)))
    return total


def build_eta(L: float, r: float, rho: float) -> EdgeProfile:
    if not (0 < r < L / 4):
        raise ValueError(f"edge width must satisfy 0 < r < L/4, got r={r}, L={L}")
    if rho <= 0:
        raise ValueError("rho must be positive")
    c2 = 1.0 / (L - 2 * r + 2 * r * float(SMOOTHSTEP_S2))
    return EdgeProfile(L, r, rho, math.sqrt(c2))


@dataclass(frozen=True)
class JelliumParams:
    rho: float
    eps: float | None = None  # None selects eps = rho^{-1/12}
    constants: dict | None = None

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError("rho must be positive")
        if self.eps is not None and self.eps < 0:
            raise ValueError("eps must be nonnegative")
        const = {"C": 1.0}
        const.update(self.constants or {})
        object.__setattr__(self, "constants", const)

    @property
    def scheduled(self) -> bool:
        return self.eps is None

    @property
    def cutoff(self) -> float:
        return self.rho ** (-1 / 12) if self.eps is None else self.eps


# --- one-dimensional Gaussian kernels ------------------------------------------------


def _correlation(f, g, breaks_f, breaks_g, z):
    """C(z) = int f(x) g(x + z) dx for piecewise-polynomial f, g (exact by Gauss-Legendre)."""
    x, w = _GL8
    out = np.empty(len(z))
    lo_f, hi_f = breaks_f[0], breaks_f[-1]
    for k, zk in enumerate(z):
        pts = sorted({*breaks_f, *(b - zk for b in breaks_g)})
        lo, hi = max(lo_f, breaks_g[0] - zk), min(hi_f, breaks_g[-1] - zk)
        pts = [lo] + [p for p in pts if lo < p < hi] + [hi]
        acc = 0.0
        for a, b in zip(pts[:-1], pts[1:]):
            if b > a:
                t = 0.5 * (b - a) * x + 0.5 * (a + b)
                acc += 0.5 * (b - a) * float(np.sum(w * f(t) * g(t + zk)))
        out[k] = acc
    return out


def _z_nodes(breaks: list, scale_min: float, ratio: float = 1.4):
    """Gauss nodes on [0, Zmax] graded geometrically towards z = 0 and split at ``breaks``."""
    x, w = _GL16
    zmax = breaks[-1]
    edges = {0.0, *breaks}
    z = scale_min
    while z < zmax:
        edges.add(z)
        z *= ratio
    edges = sorted(e for e in edges if e <= zmax)
    a, b = np.array(edges[:-1]), np.array(edges[1:])
    nodes = (0.5 * (b - a)[:, None] * x + 0.5 * (a + b)[:, None]).ravel()
    weights = (0.5 * (b - a)[:, None] * w).ravel()
    return nodes, weights


@dataclass(frozen=True)
class KernelTable:
    """K(s) = int exp(-s^2 z^2) C(z) dz for a family of correlations C."""

    z: np.ndarray
    wz: np.ndarray
    C: dict  # name -> C(z) + C(-z) on the half line

    def __call__(self, s: float) -> dict:
        e = np.exp(-(s * self.z) ** 2) * self.wz
        return {k: float(e @ v) for k, v in self.C.items()}


def _kernel_table(funcs: dict, breaks: tuple, pairs: dict, resolution: float) -> KernelTable:
    L = breaks[-1]
    diffs = sorted({abs(a - b) for a in breaks for b in breaks} - {0.0})
    z, wz = _z_nodes(diffs, resolution)
    C = {}
    for name, (fa, fb) in pairs.items():
        plus = _correlation(funcs[fa], funcs[fb], breaks, breaks, z)
        minus = _correlation(funcs[fa], funcs[fb], breaks, breaks, -z)
        C[name] = plus + minus
    return KernelTable(z, wz, C)


def _s_integral(F: Callable[[float], float], s_lo: float, s_hi: float, per_decade: int = 12) -> float:
    """(2/sqrt(pi)) int_0^inf F(s) ds on a log grid, with end corrections.

    Below ``s_lo`` F is taken constant; above ``s_hi`` it decays as s^-3.
    """
    x, w = _GL8
    decades = math.log10(s_hi / s_lo)
    edges = np.logspace(math.log10(s_lo), math.log10(s_hi), int(math.ceil(decades * per_decade)) + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        la, lb = math.log(a), math.log(b)
        t = 0.5 * (lb - la) * x + 0.5 * (la + lb)
        s = np.exp(t)
        total += 0.5 * (lb - la) * sum(wi * si * F(si) for wi, si in zip(w, s))
    total += s_lo * F(s_lo)
    total += 0.5 * s_hi * F(s_hi)
    return float(2 / math.sqrt(math.pi) * total)


def _box_kernels(profile: EdgeProfile) -> KernelTable:
    one = lambda t: np.where((t >= 0) & (t <= profile.L), 1.0, 0.0)
    funcs = {"1": one, "d": profile.deficit}
    pairs = {"1d": ("1", "d"), "dd": ("d", "d")}
    return _kernel_table(funcs, profile.breakpoints, pairs, 1e-4 * profile.r)


def _k11(s, L):
    # int int_{[0,L]^2} exp(-s^2 (x-y)^2) dx dy
    return L * math.sqrt(math.pi) * special.erf(s * L) / s + math.expm1(-(s * L) ** 2) / s**2


def mismatch_gaussian(profile: EdgeProfile, per_decade: int = 12) -> float:
    """int int (n phi0^2 - rho)(x) |x-y|^-1 (n phi0^2 - rho)(y) over the box squared.

    With e = eta^2 / c^2 = 1 - d per coordinate, n phi0^2 - rho = rho (e1 e2 e3 - 1),
    whose Gaussian-transformed self-energy is
    (a - 2b + c)^3 - 2 (a - b)^3 + a^3 with a = K_11, b = K_1d, c = K_dd,
    expanded so that the large a^3 pieces cancel exactly.
    """
    L, r, rho = profile.L, profile.r, profile.rho
    table = _box_kernels(profile)

    def integrand(s):
        k = table(s)
        a, b, c = _k11(s, L), k["1d"], k["dd"]
        u = c - 2 * b
        return 3 * a * a * c + 3 * a * u * u - 6 * a * b * b + u**3 + 2 * b**3

    return rho**2 * _s_integral(integrand, 1e-4 / L, 1e4 / r, per_decade)


def mismatch_direct(profile: EdgeProfile, n_radial: int = 48, n_angle: int = 24) -> float:
    """Same double integral as int H(z) / |z| d^3z in spherical coordinates.

    H is the autocorrelation of rho (e1 e2 e3 - 1), assembled from 1D
    correlations.  Low order, for coarse cross-checks on small boxes.
    """
    L, rho = profile.L, profile.rho
    e = lambda t: np.where((t >= 0) & (t <= L), (profile.eta(t) / profile.c) ** 2, 0.0)
    one = lambda t: np.where((t >= 0) & (t <= L), 1.0, 0.0)
    br = profile.breakpoints

    # correlations on a fine 1D table, interpolated linearly
    zt = np.linspace(0, L, 4001)
    Cee = _correlation(e, e, br, br, zt)
    Ce1 = _correlation(e, one, br, br, zt)
    C11 = L - zt

    def H(z):
        az = np.abs(z)
        ee = np.prod(np.interp(az, zt, Cee, right=0.0), axis=-1)
        e1 = np.prod(np.interp(az, zt, Ce1, right=0.0), axis=-1)
        o = np.prod(np.interp(az, zt, C11, right=0.0), axis=-1)
        return ee - 2 * e1 + o

    xr, wr = np.polynomial.legendre.leggauss(n_radial)
    xa, wa = np.polynomial.legendre.leggauss(n_angle)
    # octant: theta in (0, pi/2), phi in (0, pi/2); H is even in each coordinate
    th = 0.25 * math.pi * (xa + 1)
    ph = 0.25 * math.pi * (xa + 1)
    total = 0.0
    panels = np.linspace(0, math.sqrt(3) * L, 25)
    for i, t in enumerate(th):
        for j, p in enumerate(ph):
            omega = np.array([math.sin(t) * math.cos(p), math.sin(t) * math.sin(p), math.cos(t)])
            acc = 0.0
            for a, b in zip(panels[:-1], panels[1:]):
                rr = 0.5 * (b - a) * xr + 0.5 * (a + b)
                acc += 0.5 * (b - a) * float(np.sum(wr * rr * H(rr[:, None] * omega[None, :])))
            total += wa[i] * wa[j] * (0.25 * math.pi) ** 2 * math.sin(t) * acc
    return 8 * rho**2 * total


def phi0_metrics(profile: EdgeProfile) -> dict:
    kin = profile.kinetic()
    q = mismatch_gaussian(profile)
    return {
        "kinetic": kin,
        "kinetic_error": abs(kin - profile.kinetic_numeric()),
        "mismatch": q,
        "mismatch_error": abs(q - mismatch_gaussian(profile, per_decade=6)),
        "norm_eta": profile.norm_eta(),
    }


# --- pairing symbol and neutrality -----------------------------------------------------

_TR = 2**-0.75 * math.pi**-2.25


@dataclass(frozen=True)
class GammaSymbol:
    profile: EdgeProfile
    eps: float
    M0: float
    z0_sq: float
    neutrality_residual: float

    def rho_gamma(self, x):
        p = self.profile
        return p.n * p.rho**-0.25 * _TR * p.phi0(x) ** 2 * self.M0

    @property
    def trace(self) -> float:
        """int rho_gamma = n rho^{-1/4} 2^{-3/4} pi^{-9/4} M0 (phi0 has unit norm)."""
        p = self.profile
        return p.n * p.rho**-0.25 * _TR * self.M0

    def trace_phase_space(self) -> float:
        """(2 pi)^-3 (n / rho) int g_eps(p / (8 pi rho)^{1/4}) d^3p, by direct quadrature."""
        p = self.profile
        k = (8 * math.pi * p.rho) ** 0.25
        v, _ = integrate.quad(
            lambda q: 4 * math.pi * q * q * float(eval_g(q / k, self.eps)),
            self.eps * k, np.inf, limit=400, epsabs=0, epsrel=1e-12,
        )
        return (2 * math.pi) ** -3 * p.n / p.rho * v


def feasibility_threshold(M0: float) -> float:
    """Smallest rho with 1 - 2^{-3/4} rho^{-1/4} pi^{-9/4} M0 >= 0."""
    return (_TR * M0) ** 4


__all__.append("feasibility_threshold")


def build_gamma_symbol(profile: EdgeProfile, eps: float, moments=None, grid: int = 21) -> GammaSymbol:
    if moments is None:
        moments = radial_moments(eps, need_V=False)
    rho = profile.rho
    bracket = 1 - _TR * rho**-0.25 * moments.M0
    if bracket < 0:
        thr = feasibility_threshold(moments.M0)
        raise FeasibilityError(
            f"z0^2 < 0: rho = {rho} is below the feasibility threshold {thr:.6g} for eps = {eps}", thr
        )
    z0_sq = profile.n * bracket
    t = np.linspace(0, profile.L, grid)
    X = np.stack(np.meshgrid(t, t, t, indexing="ij"), axis=-1).reshape(-1, 3)
    sym = GammaSymbol(profile, eps, moments.M0, z0_sq, 0.0)
    phi2 = profile.phi0(X) ** 2
    resid = float(np.max(np.abs(z0_sq * phi2 + sym.rho_gamma(X) - profile.n * phi2)))
    return GammaSymbol(profile, eps, moments.M0, z0_sq, resid)


# --- the 1D profile j ----------------------------------------------------------------


def eta_sq_transform(profile: EdgeProfile, tau):
    """|int exp(i tau t) eta(t)^2 dt|, using the symmetry about L/2."""
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    L, r, c = profile.L, profile.r, profile.c
    half = L / 2
    with np.errstate(invalid="ignore", divide="ignore"):
        plateau = np.where(tau == 0, L - 2 * r, 2 * np.sin(tau * (half - r)) / tau)
    x, w = _GL16
    edges = np.linspace(0, r, 5)
    ramp = np.zeros_like(tau)
    for a, b in zip(edges[:-1], edges[1:]):
        t = 0.5 * (b - a) * x + 0.5 * (a + b)
        vals = c**2 * smoothstep(t / r) ** 2 * 0.5 * (b - a) * w
        ramp += np.cos(np.outer(tau, t - half)) @ vals
    return np.abs(c**2 * plateau + 2 * ramp)


__all__.append("eta_sq_transform")


def j_profile(profile: EdgeProfile, tau):
    """j(tau) = (2 pi)^-1 n^{1/3} rho^{-1/3} |(eta^2)^(tau)|^2."""
    return eta_sq_transform(profile, tau) ** 2 / (2 * math.pi * profile.c**2)


__all__.append("j_profile")


def j_profile_checks(profile: EdgeProfile, tau_max_r: float = 50.0) -> dict:
    """Mass of j (trapezoid at spacing pi/L, exact for band-limited autocorrelations),
    the J sandwich, the tail beyond (3L)^{-1/2} and the decay constant."""
    L, r = profile.L, profile.r
    dt = math.pi / L
    T = tau_max_r / r
    k = np.arange(0, int(T / dt) + 1)
    jv = j_profile(profile, k * dt)
    mass_j = float(dt * (jv[0] + 2 * np.sum(jv[1:])))
    parseval = _piecewise_integral(lambda t: profile.eta(t) ** 4, profile.breakpoints) / profile.c**2
    a = (3 * L) ** -0.5
    inner, _ = integrate.quad(lambda t: float(j_profile(profile, t)[0]), 0, a, limit=200, epsabs=0, epsrel=1e-12)
    tail_1d = mass_j - 2 * inner
    mass_J = mass_j**3
    lower = (1 - 2 * r / L) ** 3
    far = k * dt >= 10 / L
    decay = float(np.max((k * dt) ** 2 * L * jv * far))
    return {
        "mass_j": mass_j,
        "mass_j_parseval": parseval,
        "mass_J": float(mass_J),
        "sandwich_lower": lower,
        "sandwich_ok": bool(lower <= mass_J <= 1.0),
        "tail_bound": 3 * tail_1d,
        "tail_constant": 3 * tail_1d * math.sqrt(L),
        "decay_constant": decay,
    }


# --- exchange terms ------------------------------------------------------------------


def _bl_moments(eps: float) -> dict:
    """int g_eps^2, int p^2 g_eps^2, int g_eps (g_eps + 1), int p^2 g_eps (g_eps + 1) over R^3."""
    def rad(f):
        v, _ = integrate.quad(lambda p: 4 * math.pi * p * p * f(p), eps, np.inf, limit=400, epsabs=0, epsrel=1e-11)
        return v

    g = lambda p: float(eval_g(p, eps))
    return {
        "g2": rad(lambda p: g(p) ** 2),
        "p2g2": rad(lambda p: p * p * g(p) ** 2),
        "gg1": rad(lambda p: g(p) * (g(p) + 1)),
        "p2gg1": rad(lambda p: p * p * g(p) * (g(p) + 1)),
    }


def exchange_bound(profile: EdgeProfile, eps: float, moments=None) -> dict:
    """Bounds on int int |gamma(x,y)|^2 / |x-y| and the same with sqrt(gamma(gamma+1)).

    ``norm_bound*`` use ||gamma_eps|| <= g(eps); ``cauchy_schwarz_hardy*`` use the
    convex Berezin-Lieb bounds on Tr gamma^2 and Tr(-Delta gamma^2).
    """
    if eps <= 0:
        raise ValueError("exchange bounds need eps > 0 (the norm of gamma is unbounded otherwise)")
    if moments is None:
        moments = radial_moments(eps, need_V=False)
    rho, n = profile.rho, profile.n
    k = (8 * math.pi * rho) ** 0.25
    pref = (2 * math.pi) ** -3 * n / rho
    kin0 = profile.kinetic()
    tr = pref * k**3 * moments.M0
    tr_kin = pref * (k**5 * moments.M2 + k**3 * moments.M0 * kin0)
    sup = float(eval_g(eps))
    bl = _bl_moments(eps)
    tr2 = pref * k**3 * bl["g2"]
    tr2_kin = pref * (k**5 * bl["p2g2"] + k**3 * bl["g2"] * kin0)
    trs = pref * k**3 * bl["gg1"]
    trs_kin = pref * (k**5 * bl["p2gg1"] + k**3 * bl["gg1"] * kin0)
    return {
        "sup_g": sup,
        "trace": tr,
        "trace_kinetic": tr_kin,
        "norm_bound": 2 * sup * math.sqrt(tr * tr_kin),
        "norm_bound_sqrt": 2 * (sup + 1) * math.sqrt(tr * tr_kin),
        "cauchy_schwarz_hardy": 2 * math.sqrt(tr2 * tr2_kin),
        "cauchy_schwarz_hardy_sqrt": 2 * math.sqrt(trs * trs_kin),
    }


def hardy_direction_check(L: float = 1.0, seed: int = 0, modes=(1, 2)) -> dict:
    """Exact int int |gamma(x,y)|^2 / |x-y| on a tiny sine basis versus the Hardy chain.

    gamma = sum G_ab psi_a psi_b with psi_k(x) = prod sqrt(2/L) sin(k_i pi x_i / L),
    k_i in ``modes``; G is a random real PSD matrix.
    """
    import itertools

    rng = np.random.default_rng(seed)
    ks = list(itertools.product(modes, repeat=3))
    d = len(ks)
    A = rng.normal(size=(d, d))
    G = A @ A.T / d
    m = len(modes)
    sine = {k: (lambda t, k=k: np.where((t >= 0) & (t <= L), math.sqrt(2 / L) * np.sin(k * math.pi * t / L), 0.0))
            for k in modes}
    prods = {(a, b): (lambda t, a=a, b=b: sine[a](t) * sine[b](t)) for a in modes for b in modes}
    names = list(prods)
    funcs = {f"{a}{b}": prods[(a, b)] for a, b in names}
    pairs = {f"{a}{b}|{c}{e}": (f"{a}{b}", f"{c}{e}") for a, b in names for c, e in names}
    table = _kernel_table(funcs, (0.0, L), pairs, 1e-5 * L)
    idx = {k: i for i, k in enumerate(modes)}

    # index arrays for the 3D product kernel K3[(a,c),(b,d)] = prod_i k[(a_i c_i),(b_i d_i)]
    def integrand(s):
        k1 = table(s)
        k = np.empty((m, m, m, m))
        for a, b in names:
            for c, e in names:
                k[idx[a], idx[b], idx[c], idx[e]] = k1[f"{a}{b}|{c}{e}"]
        total = 0.0
        # sum_{a,b,c,d} G_ab G_cd prod_i k[a_i, c_i, b_i, d_i]
        ka = np.array([[idx[x] for x in kk] for kk in ks])
        for ia in range(d):
            for ic in range(d):
                w = np.ones((d, d))
                for ax in range(3):
                    w *= k[ka[ia, ax], ka[ic, ax]][ka[:, ax][:, None], ka[:, ax][None, :]]
                total += float(np.sum(G[ia][:, None] * G[ic][None, :] * w))
        return total

    exact = _s_integral(integrand, 1e-4 / L, 1e5 / L)
    lap = np.array([(math.pi / L) ** 2 * sum(x * x for x in k) for k in ks])
    G2 = G @ G
    chain = 2 * math.sqrt(np.trace(G2) * np.sum(lap * np.diag(G2)))
    return {"exact": exact, "hardy_chain": float(chain), "ok": bool(chain >= exact)}


# --- assembly ------------------------------------------------------------------------


def foldy_schedule_exponent() -> Fraction:
    """Exponent of rho^{5/4} eps at eps = rho^{-1/12}."""
    return F(5, 4) + F(-1, 12)


def assemble_bound(profile: EdgeProfile, params: JelliumParams, I0: float | None = None) -> BoundReport:
    """Energy per unit volume of the one-component trial state, itemized."""
    if I0 is None:
        I0 = compute_I0().quadrature
    eps = params.cutoff
    rho, L, r = profile.rho, profile.L, profile.r
    vol = L**3
    C = params.constants["C"]
    mom = radial_moments(eps, need_V=False)
    sym = build_gamma_symbol(profile, eps, mom)
    pref = 2**-0.25 * math.pi**-1.75
    main = rho**1.25 * pref * (mom.M2 - mom.X)
    kin0 = profile.kinetic()
    mismatch = mismatch_gaussian(profile)
    exch = exchange_bound(profile, eps, mom) if eps > 0 else None
    sched = params.scheduled
    e_exch = F(1) + 2 * F(1, 12) if sched else None
    terms = [
        BoundTerm("main", main, Tag.PAIRING_ENERGY, F(5, 4)),
        BoundTerm("condensate_kinetic", 0.5 * sym.z0_sq * kin0 / vol, Tag.CONDENSATE_KINETIC),
        BoundTerm("kinetic_packet", 0.5 * sym.trace * kin0 / vol, Tag.KINETIC),
        BoundTerm("mismatch", 0.5 * mismatch / vol, Tag.MISMATCH, F(4, 3)),
        BoundTerm("depletion_offset", (rho * vol - sym.z0_sq) * pref * rho**0.25 * mom.X / vol,
                  Tag.NEUTRALITY),
        BoundTerm(
            "coulomb_packet",
            C * sym.z0_sq * (L**-0.5 / max(eps, 1e-300) + rho**0.25 * r / L + rho**0.25 * L**-0.5) / vol,
            Tag.COULOMB_PACKET, None, "C",
        ),
    ]
    if exch is not None:
        terms.insert(3, BoundTerm("exchange", 0.5 * exch["norm_bound"] / vol, Tag.EXCHANGE, e_exch))
        terms.insert(4, BoundTerm("exchange_sqrt", 0.5 * exch["norm_bound_sqrt"] / vol, Tag.EXCHANGE, e_exch))
    foldy = -I0 * rho**1.25
    deviation = main - foldy
    extras = {
        "rho": rho,
        "L": L,
        "r": r,
        "eps": eps,
        "n": profile.n,
        "z0_sq": sym.z0_sq,
        "neutrality_residual": sym.neutrality_residual,
        "foldy_limit": {
            "ratio": main / foldy,
            "deviation": deviation,
            "relative_deviation": deviation / abs(foldy),
            "exponent": str(foldy_schedule_exponent()) if sched else "",
        },
    }
    return BoundReport("one-component", "rho", tuple(terms), extras)
