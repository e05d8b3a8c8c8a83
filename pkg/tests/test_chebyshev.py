import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lvmelnikov import chebyshev as ch
from lvmelnikov.errors import StepTooSmall
from lvmelnikov.geometry import SystemParams, annuli


@settings(max_examples=200, deadline=None)
@given(hc=st.floats(-1.9, 1.9), t=st.floats(0.05, 0.95))
def test_factored_forms_equal_expanded(hc, t):
    h = hc + t * (1.95 - hc)
    for i in (3, 4):
        a, b = ch.omega_at(hc, i, h), ch.omega_expanded(hc, i, h)
        assert a == pytest.approx(b, rel=1e-6, abs=1e-9)


@pytest.mark.parametrize("params,expected", [
    (SystemParams.x29(0.0, 1.0), "FullECT"),
    (SystemParams.x29(0.5, 1.5), "FullECT"),
    (SystemParams.x29(1.2, 1.8), "PartialECT"),
    (SystemParams.x29(1.5, 1.9), "PartialECT"),
    (SystemParams.x210(1.0), "FullECT"),
    (SystemParams.x210(1.5), "PartialECT"),
])
def test_case_split(params, expected):
    table = ch.ect_table(params)
    plus = table.get("U+", table.get("U"))
    assert plus.verdict == expected
    if "U-" in table:
        assert table["U-"].verdict == "FullECT"


def test_splitting_level_bracketed():
    p = SystemParams.x29(1.2, 1.8)
    v = ch.ect_verdict(p, "U+")
    lo, hi = v.d_bracket
    assert hi - lo <= 1e-12
    assert lo <= ch.splitting_level(v.annulus.center_level) <= hi
    assert lo == pytest.approx(0.12822818560615612, abs=1e-11)
    assert v.ect_interval == (v.annulus.lo, lo)


def test_splitting_level_absent_for_positive_hc():
    assert ch.splitting_level(0.3) is None
    assert ch.splitting_level(-0.3) is not None


@pytest.mark.parametrize("i", [2, 3, 4])
def test_wronskian_vs_finite_differences(i):
    p = SystemParams.x29(0.5, 1.5)
    for ann in annuli(p):
        for h in ann.grid(5, 0.15):
            assert ch.omega_vs_wronskian(p, ann, i, h) <= 1e-4


def test_omega2_is_omega1_squared():
    p = SystemParams.x210(1.8)
    (ann,) = annuli(p)
    for h in ann.grid(50, 1e-3):
        w1 = ch.omega(p, ann, 1, h)
        assert ch.omega(p, ann, 2, h) == w1 * w1


def test_omega4_sign_constant():
    for hc in np.linspace(-1.9, 1.9, 9):
        hs = np.linspace(hc + 1e-3, 1.99, 40)
        assert all(ch.omega_at(hc, 4, h) < 0 for h in hs)


def test_step_too_small():
    p = SystemParams.x29(0.0, 1.0)
    with pytest.raises(StepTooSmall):
        ch.omega_vs_wronskian(p, "U+", 3, 1.9, step=1e-9)
    with pytest.raises(StepTooSmall):
        ch.omega_vs_wronskian(p, "U+", 3, 1.999, step=1e-3)


def test_derivative_of_omega3_sign():
    p = SystemParams.x29(1.5, 1.9)
    (ann,) = [a for a in annuli(p) if a.tag.value == "U+"]
    hs = ann.grid(30)
    d = [ch.omega3_derivative(p, ann, h) for h in hs]
    # W3' = -12 h (h-hc)^2 / (4-h^2)^(5/2) changes sign only at h = 0
    assert all(math.copysign(1, v) == -math.copysign(1, h) for v, h in zip(d, hs) if abs(h) > 1e-9)
