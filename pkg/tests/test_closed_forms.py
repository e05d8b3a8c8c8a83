import math

import numpy as np
import pytest

from lvmelnikov import closed_forms as cf
from lvmelnikov import quadrature as qd
from lvmelnikov.coeffs import PerturbationCoeffs, monomials
from lvmelnikov.errors import DegreeMismatch
from lvmelnikov.geometry import SystemParams, annuli

PARAMS = [SystemParams.x29(0.0, 1.0), SystemParams.x29(1.5, 1.9),
          SystemParams.x210(0.5), SystemParams.x210(1.8)]


@pytest.mark.parametrize("p", PARAMS)
def test_integrals_against_oracle(p):
    for ann in annuli(p):
        for h in ann.grid(4, 0.05):
            j0, j1 = cf.cf_J01(p, h, ann)
            assert j0 == pytest.approx(qd.oracle_J(p, h, 0), rel=1e-9)
            assert j1 == pytest.approx(qd.oracle_J(p, h, 1), rel=1e-9, abs=1e-12)
            for k in range(2, 7):
                assert cf.cf_Jk(p, h, k) == pytest.approx(qd.oracle_J(p, h, k), rel=1e-9, abs=1e-12)
            for i in range(4):
                assert cf.cf_S(p, h, i, ann) == pytest.approx(qd.oracle_S(p, h, i), rel=1e-9, abs=1e-12)
                assert cf.cf_R(p, h, i, ann) == pytest.approx(qd.oracle_R(p, h, i), rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("p", PARAMS)
def test_reduced_form_one_hot(p):
    for which in ("a", "b"):
        for i, j in monomials(3):
            co = PerturbationCoeffs.one_hot(3, which, i, j)
            for ann in annuli(p):
                q = cf.melnikov_n3_coeffs(p, co, ann)
                for h in ann.grid(3, 0.1):
                    m = qd.oracle_melnikov(p, co, h)
                    assert float(cf.melnikov_n3_eval(q, h)) == pytest.approx(m, abs=1e-9 * (1 + abs(m)))


def test_reduced_form_vanishes_at_center():
    p = SystemParams.x29(0.5, 1.5)
    co = PerturbationCoeffs.random(3, np.random.default_rng(3))
    for ann in annuli(p):
        q = cf.melnikov_n3_coeffs(p, co, ann)
        assert abs(float(cf.melnikov_n3_eval(q, ann.center_level))) < 1e-12 * (1 + q.scale())


def test_tail_antisymmetry():
    # the shared radical part enters U- with the opposite sign
    p = SystemParams.x29(0.0, 1.0)
    co = PerturbationCoeffs.random(3, np.random.default_rng(8))
    plus = cf.melnikov_n3_coeffs(p, co, "U+")
    minus = cf.melnikov_n3_coeffs(p, co, "U-")
    assert minus.a4 == pytest.approx(-plus.a4)
    assert minus.a5 == pytest.approx(-plus.a5)


def test_anchor_constants_x210():
    b = 1.3
    hc = 2 - b * b
    m, n, pp, q = cf.anchor_constants(hc)
    r = b * math.sqrt(4 - b * b)
    assert (m, n) == pytest.approx((-2 + b * b, -(-2 + b * b) ** 2))
    assert (pp, q) == pytest.approx((-r, r * (-2 + b * b)))


def test_degree_mismatch():
    p = SystemParams.x29(0.0, 1.0)
    with pytest.raises(DegreeMismatch):
        cf.melnikov_n3_coeffs(p, PerturbationCoeffs.zeros(4), "U+")
