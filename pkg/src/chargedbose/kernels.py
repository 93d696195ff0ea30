"""The pairing function g, the constant I0 and the radial momentum moments.

Momenta are dimensionless.  With u(p) = (p^4 + 1) / (p^2 sqrt(p^4 + 2)),

    g(p) = (u - 1) / 2 = 1 / (2 p^4 (p^4 + 2) (u + 1)),

and g_eps is g with the ball |p| <= eps removed.  All moment integrals are
three-dimensional and radially reduced with weight 4 pi p^2.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

__all__ = [
    "MomentumKernel",
    "RadialMoments",
    "I0Result",
    "OptimalityReport",
    "BracketReport",
    "eval_g",
    "g_naive",
    "g_stable",
    "sqrt_g_g1",
    "compute_I0",
    "radial_moments",
    "check_g_optimality",
    "check_bracket_identity",
    "I0_integrand",
    "SEAM",
    "TAIL_START",
]

#: Below this momentum g is evaluated from its defining formula.
SEAM = 10.0
#: Radial integrals are done numerically up to here and by power laws beyond.
TAIL_START = 1e3


def g_naive(p):
    p = np.asarray(p, dtype=float)
    p4 = p**4
    return 0.5 * ((p4 + 1) / (p**2 * np.sqrt(p4 + 2)) - 1)


def g_stable(p):
    p = np.asarray(p, dtype=float)
    p4 = p**4
    u = (p4 + 1) / (p**2 * np.sqrt(p4 + 2))
    return 1.0 / (2 * p4 * (p4 + 2) * (u + 1))


def eval_g(p, eps: float = 0.0):
    """g_eps(p); zero on |p| <= eps."""
    p = np.abs(np.asarray(p, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(p < SEAM, g_naive(p), g_stable(p))
    out = np.where(p <= eps, 0.0, out)
    return out if out.ndim else float(out)


def sqrt_g_g1(p, eps: float = 0.0):
    """sqrt(g(g+1)) = 1 / (2 p^2 sqrt(p^4 + 2)), cut off like g_eps."""
    p = np.abs(np.asarray(p, dtype=float))
    with np.errstate(divide="ignore"):
        out = 1.0 / (2 * p**2 * np.sqrt(p**4 + 2))
    out = np.where(p <= eps, 0.0, out)
    return out if out.ndim else float(out)


def _x_integrand_cf(p):
    # sqrt(g(g+1)) - g = g / (sqrt(g(g+1)) + g), since g(g+1) - g^2 = g
    g = eval_g(p)
    return g / (sqrt_g_g1(p) + g)


@dataclass(frozen=True)
class MomentumKernel:
    eps: float = 0.0

    def __post_init__(self):
        if self.eps < 0:
            raise ValueError(f"cutoff must be >= 0, got {self.eps}")

    def __call__(self, p):
        return eval_g(p, self.eps)

    @property
    def sup(self) -> float:
        """sup g_eps = g(eps); infinite at eps = 0."""
        return math.inf if self.eps == 0 else float(eval_g(self.eps))


# --- I0 --------------------------------------------------------------------------


def I0_integrand(x):
    """1 + x^4 - x^2 sqrt(x^4 + 2), written as a cancellation-free quotient."""
    x = np.asarray(x, dtype=float)
    return 1.0 / (1 + x**4 + x**2 * np.sqrt(x**4 + 2))


@dataclass(frozen=True)
class I0Result:
    quadrature: float
    abserr: float
    closed_form: float
    gamma_form: float

    @property
    def relative_gap(self) -> float:
        return abs(self.quadrature - self.closed_form) / abs(self.closed_form)


def compute_I0(cut: float = TAIL_START) -> I0Result:
    """I0 by quadrature, and two Gamma-function expressions.

    ``closed_form`` is 4^{5/4} Gamma(3/4) / (5 pi^{1/4} Gamma(5/4)).
    ``gamma_form`` is 2^{3/2} Gamma(3/4) / (5 pi^{1/4} Gamma(5/4)), the value the
    integral actually takes (half of ``closed_form``).
    """
    val, err = integrate.quad(
        I0_integrand, 0, cut, limit=500, epsabs=1e-14, epsrel=1e-14, points=[1, 10, 100]
    )
    # integrand = x^-4/2 - x^-8/2 + O(x^-12) at large x
    tail = 1 / (6 * cut**3) - 1 / (14 * cut**7)
    err += 1 / (10 * cut**11)
    pref = (2 / math.pi) ** 0.75
    ratio = special.gamma(0.75) / (5 * math.pi**0.25 * special.gamma(1.25))
    return I0Result(
        quadrature=pref * (val + tail),
        abserr=pref * err,
        closed_form=4**1.25 * ratio,
        gamma_form=2**1.5 * ratio,
    )


# --- radial moments ---------------------------------------------------------------


@dataclass(frozen=True)
class RadialMoments:
    eps: float
    M0: float
    M2: float
    X: float
    V: float | None
    errors: dict


def _radial(f, eps: float, cut: float) -> tuple[float, float]:
    """4 pi int_eps^cut f(p) p^2 dp with p = tan(theta), panels at decades."""
    lo = max(eps, 0.0)
    if lo >= cut:
        return 0.0, 0.0
    edges = [lo]
    k = math.floor(math.log10(lo)) + 1 if lo > 0 else -6
    while 10.0**k < cut:
        if 10.0**k > lo:
            edges.append(10.0**k)
        k += 1
    edges.append(cut)

    def h(t):
        p = math.tan(t)
        return f(p) * p * p / math.cos(t) ** 2

    total = 0.0
    err = 0.0
    # quad's own error estimate is returned to the caller, so its roundoff warning is redundant
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in zip(edges[:-1], edges[1:]):
            v, e = integrate.quad(h, math.atan(a), math.atan(b), limit=400, epsabs=1e-15, epsrel=1e-13)
            total += v
            err += e
    return 4 * math.pi * total, 4 * math.pi * err


def radial_moments(eps: float = 0.0, cut: float = TAIL_START, need_V: bool | None = None) -> RadialMoments:
    """M0 = int g_eps, M2 = int p^2 g_eps, X = int (sqrt(g_eps(g_eps+1)) - g_eps) p^-2,
    V = int g_eps (g_eps + 1), all over R^3.

    Beyond ``cut`` the integrands follow g ~ p^-8 / 4 and the tails are added in
    closed form.  V diverges like pi / (2 eps) and is only available for eps > 0.
    """
    if eps < 0:
        raise ValueError(f"cutoff must be >= 0, got {eps}")
    if need_V is None:
        need_V = eps > 0
    if need_V and eps == 0:
        raise ValueError("V = int g(g+1) d^3p diverges at zero cutoff; use eps > 0")
    P = max(cut, eps)

    def g(p):
        return float(eval_g(p))

    m0, e0 = _radial(g, eps, P)
    m2, e2 = _radial(lambda p: p * p * g(p), eps, P)
    x, ex = _radial(lambda p: float(_x_integrand_cf(p)) / (p * p), eps, P)
    # power-law tails beyond P; the neglected relative correction is O(P^-4)
    t0, t2, tx = math.pi / (5 * P**5), math.pi / (3 * P**3), 2 * math.pi / (3 * P**3)
    errors = {
        "M0": e0 + t0 * P**-4,
        "M2": e2 + t2 * P**-4,
        "X": ex + tx * P**-4,
    }
    V = None
    if need_V:
        v, ev = _radial(lambda p: g(p) * (g(p) + 1), eps, P)
        tv = math.pi / (5 * P**5)
        V = v + tv
        errors["V"] = ev + tv * P**-4
    return RadialMoments(eps, m0 + t0, m2 + t2, x + tx, V, errors)


def V_closed_form(eps: float) -> float:
    """int_{|p|>eps} g(g+1) d^3p using g(g+1) = 1 / (4 p^4 (p^4 + 2))."""
    if eps <= 0:
        raise ValueError("V diverges at zero cutoff")
    small, _ = integrate.quad(lambda p: p * p / (p**4 + 2), 0, eps, epsabs=1e-15, epsrel=1e-13)
    return 0.5 * math.pi * (1 / eps - math.pi * 2**-1.75 + small)


__all__.append("V_closed_form")


# --- identities ----------------------------------------------------------------------


def _objective(h, p):
    # p^2 h + p^-2 (h - sqrt(h(h+1))) with h + 1/2 - sqrt(h(h+1)) = 1 / (4 (h + 1/2 + sqrt(h(h+1))))
    return p * p * h - 0.5 / (p * p) + 0.25 / (p * p * (h + 0.5 + np.sqrt(h * (h + 1))))


@dataclass(frozen=True)
class OptimalityReport:
    p: float
    g: float
    argmin: float
    grid_step: float
    stationarity_residual: float
    ok: bool


def check_g_optimality(p: float, h_grid=None, tol: float = 1e-8) -> OptimalityReport:
    """Scan p^2 h + p^-2 (h - sqrt(h(h+1))) over h and compare the minimizer to g(p)."""
    if p <= 0:
        raise ValueError("p must be positive")
    gp = float(eval_g(p))
    if h_grid is None:
        h_grid = np.linspace(0.0, 4 * gp + 1, 400001)
    h_grid = np.asarray(h_grid, dtype=float)
    if h_grid.min() > 0 or h_grid.max() < 4 * gp + 1:
        raise ValueError("h_grid must cover [0, 4 g(p) + 1]")
    vals = _objective(h_grid, p)
    k = int(np.argmin(vals))
    step = float(np.max(np.diff(h_grid)))
    # first-order condition (2h+1) / (2 sqrt(h(h+1))) = 1 + p^4
    lhs = (2 * gp + 1) / (2 * float(sqrt_g_g1(p)))
    resid = abs(lhs - (1 + p**4)) / (1 + p**4)
    argmin = float(h_grid[k])
    return OptimalityReport(p, gp, argmin, step, resid, abs(argmin - gp) <= step and resid <= tol)


@dataclass(frozen=True)
class BracketReport:
    max_pointwise_residual: float
    worst_p: float
    integrated: float
    target: float
    integrated_rel_error: float
    ok: bool


def bracket_lhs(p):
    """2 [p^4 g - (sqrt(g(g+1)) - g)]."""
    p = np.asarray(p, dtype=float)
    return 2 * (p**4 * eval_g(p) - _x_integrand_cf(p))


def bracket_rhs(p):
    """-(1 + p^4 - p^2 sqrt(p^4 + 2)), cancellation-free."""
    return -I0_integrand(p)


__all__ += ["bracket_lhs", "bracket_rhs"]


def check_bracket_identity(n_points: int = 100, pointwise_tol: float = 1e-10, rel_tol: float = 1e-6) -> BracketReport:
    p = np.logspace(-3, 3, n_points)
    lhs, rhs = bracket_lhs(p), bracket_rhs(p)
    scaled = np.abs(lhs - rhs) / (1 + np.abs(rhs))
    k = int(np.argmax(scaled))
    mom = radial_moments(0.0)
    integrated = 2**-0.25 * math.pi**-1.75 * (mom.M2 - mom.X)
    target = -compute_I0().quadrature
    rel = abs(integrated - target) / abs(target)
    return BracketReport(
        float(scaled[k]), float(p[k]), integrated, target, rel,
        bool(scaled[k] <= pointwise_tol and rel <= rel_tol),
    )
