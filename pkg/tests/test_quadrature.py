"""Oracle values frozen from the trapezoid oracle; each one was cross-checked
against scipy's algebraic-weight Gauss quadrature to ~1e-15 when frozen."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from lvmelnikov import quadrature as qd
from lvmelnikov.coeffs import PerturbationCoeffs, monomials
from lvmelnikov.errors import OutsideAnnulus
from lvmelnikov.geometry import SystemParams, annuli, delta_roots

X29 = SystemParams.x29(0.5, 1.5)
X210 = SystemParams.x210(1.0)

FROZEN = [
    # params, h, kind, index, value
    (X29, -1.828, "J", 0, 0.7938802338219385),
    (X29, -1.828, "J", 3, 7.321233196915304),
    (X29, -1.828, "S", 2, 0.8349643204307975),
    (X29, -1.828, "R", 0, -0.5998442148526515),
    (X29, 1.453, "J", 1, -1.5560471008847778),
    (X29, 1.453, "S", 0, 2.3928162611002897),
    (X29, 1.453, "R", 2, -2.9434509827863025),
    (X210, 1.5, "J", 3, -4.749641646894903),
    (X210, 1.5, "S", 2, 2.1923613337867214),
    (X210, 1.5, "R", 0, -4.232198516546507),
]

ORACLES = {"J": qd.oracle_J, "S": qd.oracle_S, "R": qd.oracle_R}


@pytest.mark.parametrize("params,h,kind,k,value", FROZEN)
def test_frozen_values(params, h, kind, k, value):
    assert ORACLES[kind](params, h, k) == pytest.approx(value, rel=1e-12)


@pytest.mark.parametrize("params,h,co,value", [
    (X29, -1.828, PerturbationCoeffs.one_hot(3, "a", 1, 1), -0.8175612989778769),
    (X29, 1.453, PerturbationCoeffs.one_hot(3, "b", 3, 0), -3.2465733121938976),
    (X210, 1.5, PerturbationCoeffs.one_hot(3, "a", 1, 1), 1.8137993642342174),
])
def test_frozen_melnikov(params, h, co, value):
    assert qd.oracle_melnikov(params, co, h) == pytest.approx(value, rel=1e-12)


def _independent(params, h, g):
    r = delta_roots(params, h)
    val, _ = quad(lambda x: g(x) * math.sqrt(-r.q2), r.x1, r.x2,
                  weight="alg", wvar=(0.5, 0.5), epsabs=0.0, epsrel=1e-13, limit=200)
    return val


@pytest.mark.parametrize("params", [X29, X210, SystemParams.x29(1.5, 1.9)])
def test_weighted_integral_matches_gauss(params):
    for ann in annuli(params):
        for h in ann.grid(5, 0.01):
            g = lambda x: x ** 3 / (1.0 + x * x)
            ref = _independent(params, h, g)
            assert qd.weighted_integral(params, h, g) == pytest.approx(ref, rel=1e-11, abs=1e-13)


def test_orientation_flips_sign(x29):
    h = -1.8
    assert qd.oracle_I(x29, h, 1, 3, orientation=-1) == pytest.approx(-qd.oracle_I(x29, h, 1, 3))


def test_j2_annihilation(x29):
    for i in range(5):
        assert abs(qd.oracle_I(x29, 1.5, i, 2)) <= 1e-10


def test_design_matrix_matches_oracle(rng):
    p = SystemParams.x29(0.0, 1.0)
    hs = np.concatenate([a.grid(4) for a in annuli(p)])
    co = PerturbationCoeffs.random(4, rng)
    vec = np.array([co.get_a(i, j) for i, j in monomials(4)] + [co.get_b(i, j) for i, j in monomials(4)])
    direct = [qd.oracle_melnikov(p, co, h) for h in hs]
    np.testing.assert_allclose(qd.design_matrix(p, hs, 4) @ vec, direct, rtol=1e-12, atol=1e-12)


def test_outside_annulus(x29):
    with pytest.raises(OutsideAnnulus):
        qd.oracle_J(x29, 0.0, 1)
    with pytest.raises(ValueError):
        qd.oracle_S(x29, 1.5, 4)
