import math

import numpy as np
import pytest

from chargedbose import packets


def test_chi_is_unit_norm():
    pk = packets.GaussianPacket(np.zeros(3), np.zeros(3), 1.0)
    assert pk.norm2() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("ell", [0.2, 1.0, 7.5])
def test_packet_norm_any_width(ell):
    pk = packets.GaussianPacket([1.0, -2.0, 0.5], [3.0, 0.0, -1.0], ell)
    assert pk.norm2() == pytest.approx(1.0, abs=1e-12)


def test_packet_phase_and_envelope():
    pk = packets.GaussianPacket([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], 1.0)
    x = np.array([[0.5, 0.0, 0.0]])
    val = pk(x)[0]
    assert abs(val) == pytest.approx(packets.chi(x)[0])
    assert np.angle(val) == pytest.approx(0.5)


def test_packet_rejects_zero_width():
    with pytest.raises(ValueError):
        packets.GaussianPacket(np.zeros(3), np.zeros(3), 0.0)


def test_gradient_constant():
    assert packets.chi_gradient_constant() == pytest.approx(3.0, abs=1e-10)


def test_packet_kinetic():
    pk = packets.GaussianPacket(np.zeros(3), [1.0, 2.0, 2.0], 0.5)
    assert pk.kinetic() == pytest.approx(9.0 + 3.0 / 0.25, rel=1e-10)


@pytest.mark.parametrize("ell", [0.1, 0.3, 1.0, 3.0, 10.0])
def test_j_mass(ell):
    val, err = packets.j_ell_mass(ell)
    assert val == pytest.approx(1.0, abs=1e-10)


def test_j_is_fourier_square_of_chi():
    from scipy import integrate

    ell, q = 0.7, 1.3
    # chi_l factorizes, so its transform along q e_1 is a product of 1D transforms
    c = lambda t: (2 / math.pi) ** 0.25 * ell**-0.5 * math.exp(-((t / ell) ** 2))
    along, _ = integrate.quad(lambda t: c(t) * math.cos(q * t), -np.inf, np.inf, epsabs=1e-14)
    across, _ = integrate.quad(c, -np.inf, np.inf, epsabs=1e-14)
    hat = along * across**2
    assert packets.j_ell(q, ell) == pytest.approx(hat**2 / (2 * math.pi) ** 3, rel=1e-10)


@pytest.mark.parametrize("ell", [0.3, 1.0, 3.0])
@pytest.mark.parametrize("p", [0.3, 1.0, 3.0])
def test_convolution_quadrature_vs_dawson(ell, p):
    num = packets.convolve_inverse_square(p, ell)
    exact = float(packets.convolve_inverse_square_exact(p, ell))
    assert num == pytest.approx(exact, rel=1e-8)


@pytest.mark.parametrize("ell", [0.3, 1.0, 3.0])
@pytest.mark.parametrize("p", [0.3, 1.0, 3.0])
def test_convolution_estimate(ell, p):
    chk = packets.convolution_estimate(ell, p)
    assert chk.ok, (chk.gap, chk.bound)


def test_convolution_estimate_unit():
    chk = packets.convolution_estimate(1.0, 1.0)
    assert chk.gap <= chk.bound == 1.0


def test_delta_limit():
    p = 1.0
    val = packets.convolve_inverse_square(p, 1e3)
    assert abs(val - 1.0) <= 1e-3


def test_convolution_rejects_nonpositive_p():
    with pytest.raises(ValueError):
        packets.convolve_inverse_square(0.0, 1.0)
