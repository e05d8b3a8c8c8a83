
import numpy as np
import pytest

from lvmelnikov.closed_forms import MelnikovN3, melnikov_n3_coeffs, melnikov_n3_eval
from lvmelnikov.designer import (
    AtInfinity,
    Configuration,
    all_configurations,
    certified_counts,
    impossibility_certificate,
    invert_reduced,
    realize_configuration,
    realize_zero_count,
    s_expansion,
    shared_inflection,
    third_derivative,
)
from lvmelnikov.errors import TargetImpossible, Unachievable
from lvmelnikov.geometry import SystemParams, annulus
from lvmelnikov.zeros import count_zeros_n3

B0C1 = SystemParams.x29(0.0, 1.0)


@pytest.mark.parametrize("params,tag", [(B0C1, "U-"), (B0C1, "U+"),
                                        (SystemParams.x210(1.0), "U"),
                                        (SystemParams.x29(1.2, 1.8), "U+")])
@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_zero_count_realized(params, tag, k):
    q = realize_zero_count(params, tag, k)
    rep = count_zeros_n3(q)
    assert rep.count == rep.simple == k


def test_four_zeros_unachievable():
    with pytest.raises(Unachievable):
        realize_zero_count(B0C1, "U+", 4)


def test_s_expansion_is_taylor():
    ann = annulus(B0C1, "U+")
    q = MelnikovN3(ann, 0.3, -1.1, 0.7, 0.4)
    s = s_expansion(q)
    u = 1e-3
    exact = float(melnikov_n3_eval(q, ann.center_level + u))
    assert float(s.truncated(ann.center_level + u)) == pytest.approx(exact, rel=1e-8)


def test_third_derivative_vanishes_at_shared_inflection():
    ann = annulus(B0C1, "U+")
    q = MelnikovN3(ann, 0.0, 0.0, -1.0, 0.45)
    h0 = shared_inflection(q.a4, q.a5)
    assert h0 == pytest.approx(1.8)
    assert abs(float(third_derivative(q, h0))) < 1e-12
    assert shared_inflection(0.0, 1.0) is AtInfinity


def test_invert_reduced_roundtrip():
    target = np.array([0.4, -0.2, 1.3, 0.8, -0.5, 0.9])
    co = invert_reduced(B0C1, target)
    qp = melnikov_n3_coeffs(B0C1, co, "U+")
    qm = melnikov_n3_coeffs(B0C1, co, "U-")
    got = [qp.a2, qp.a3, qp.a4, qp.a5, qm.a2, qm.a3]
    np.testing.assert_allclose(got, target, atol=1e-12)


@pytest.mark.parametrize("cfg", all_configurations(), ids=lambda c: f"{c.u}-{c.v}")
def test_every_configuration_certified(cfg):
    r = realize_configuration(B0C1, cfg)
    assert r.counts == (cfg.u, cfg.v)
    assert certified_counts(B0C1, r.coeffs) == {"U+": cfg.u, "U-": cfg.v}


def test_three_three_impossible():
    with pytest.raises(TargetImpossible) as info:
        realize_configuration(B0C1, Configuration(3, 3))
    cert = info.value.certificate
    assert cert["disjoint"] and cert["sweep"]["both"] == 0


def test_certificate_for_other_params():
    cert = impossibility_certificate(SystemParams.x29(1.5, 1.9))
    assert cert["disjoint"] and cert["sweep"]["both"] == 0
    assert sum(cert["sweep"].values()) == 3600
