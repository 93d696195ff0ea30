"""Gaussian coherent packets and the smeared Coulomb kernel.

chi(x) = (2/pi)^{3/4} exp(-x^2) has unit L2 norm in R^3, and
chi_l(x) = l^{-3/2} chi(x / l).  With f^(k) = int exp(ikx) f(x) dx,

    j_l(q) = (2 pi)^{-3} |chi_l^(q)|^2 = (l^2 / (2 pi))^{3/2} exp(-l^2 q^2 / 2),

a probability density.  Its convolution with |p|^{-2} has the closed form
(sqrt(2) l / p) F(p l / sqrt(2)) with F the Dawson function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

__all__ = [
    "GaussianPacket",
    "chi",
    "chi_gradient_constant",
    "j_ell",
    "j_ell_mass",
    "convolve_inverse_square",
    "convolve_inverse_square_exact",
    "convolution_estimate",
]


def chi(x):
    """Unit-norm Gaussian profile evaluated at points x of shape (..., 3)."""
    x = np.asarray(x, dtype=float)
    return (2 / math.pi) ** 0.75 * np.exp(-np.sum(x * x, axis=-1))


def chi_gradient_constant() -> float:
    """int |grad chi|^2 over R^3, by one-dimensional quadrature.

    chi factorizes into three unit-norm 1D Gaussians c(t) = (2/pi)^{1/4} e^{-t^2},
    so the 3D value is three times int c'(t)^2 dt.
    """
    val, _ = integrate.quad(
        lambda t: (2 / math.pi) ** 0.5 * 4 * t * t * math.exp(-2 * t * t), -np.inf, np.inf,
        epsabs=1e-14, epsrel=1e-12,
    )
    return 3 * val


@dataclass(frozen=True)
class GaussianPacket:
    """theta_{u,p}(x) = exp(i p.x) chi_l(x - u)."""

    u: np.ndarray
    p: np.ndarray
    ell: float

    def __post_init__(self):
        if self.ell <= 0:
            raise ValueError("packet width must be positive")
        object.__setattr__(self, "u", np.asarray(self.u, dtype=float).reshape(3))
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float).reshape(3))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(1j * (x @ self.p)) * self.ell**-1.5 * chi((x - self.u) / self.ell)

    def norm2(self) -> float:
        """Squared L2 norm; a product of three 1D Gaussian integrals."""
        one, _ = integrate.quad(
            lambda t: (2 / math.pi) ** 0.5 / self.ell * math.exp(-2 * t * t / self.ell**2),
            -np.inf, np.inf, epsabs=1e-14, epsrel=1e-12,
        )
        return one**3

    def kinetic(self) -> float:
        """<theta| -Delta |theta> = |p|^2 + l^-2 int |grad chi|^2."""
        return float(self.p @ self.p) + chi_gradient_constant() / self.ell**2


def j_ell(q, ell: float):
    q = np.asarray(q, dtype=float)
    return (ell * ell / (2 * math.pi)) ** 1.5 * np.exp(-0.5 * ell * ell * q * q)


def j_ell_mass(ell: float) -> tuple[float, float]:
    """int j_l(q) d^3q by radial quadrature (value, abs error)."""
    val, err = integrate.quad(
        lambda q: 4 * math.pi * q * q * j_ell(q, ell), 0, np.inf, epsabs=1e-14, epsrel=1e-12
    )
    return val, err


def convolve_inverse_square(p: float, ell: float) -> float:
    """(j_l * |.|^-2)(p) by radial quadrature.

    The angular integral is done exactly:
    int_{-1}^{1} dmu / (p^2 + q^2 - 2 p q mu) = log|(p+q)/(p-q)| / (p q).
    """
    if p <= 0:
        raise ValueError("p must be positive")

    def h(q):
        if q == 0.0:
            return 0.0
        return 2 * math.pi * q * q * j_ell(q, ell) * math.log(abs((p + q) / (p - q))) / (p * q)

    top = p + 40 / ell
    pieces = [0.0, p, top] if p < top else [0.0, top]
    total = 0.0
    for a, b in zip(pieces[:-1], pieces[1:]):
        v, _ = integrate.quad(h, a, b, limit=400, epsabs=1e-14, epsrel=1e-12, points=None)
        total += v
    return total


def convolve_inverse_square_exact(p, ell: float):
    p = np.asarray(p, dtype=float)
    return math.sqrt(2) * ell / p * special.dawsn(p * ell / math.sqrt(2))


@dataclass(frozen=True)
class EstimateCheck:
    ell: float
    p: float
    gap: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.gap <= self.bound


def convolution_estimate(ell: float, p: float) -> EstimateCheck:
    """Compare |p^-2 - j_l * p^-2| against l^{-1/2} p^{-5/2}."""
    gap = abs(p**-2 - convolve_inverse_square(p, ell))
    return EstimateCheck(ell, p, gap, ell**-0.5 * p**-2.5)


__all__.append("EstimateCheck")
