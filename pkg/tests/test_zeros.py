import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lvmelnikov.closed_forms import MelnikovN3, basis, melnikov_n3_eval
from lvmelnikov.geometry import SystemParams, annuli, annulus
from lvmelnikov.zeros import (
    ZeroKind,
    count_sign_changes,
    count_zeros_n3,
    quartic,
    sign_changes_from_values,
)

ANNULI = [a for p in (SystemParams.x29(0.0, 1.0), SystemParams.x29(1.5, 1.9),
                      SystemParams.x210(1.8)) for a in annuli(p)]
coef = st.floats(-10, 10, allow_nan=False).filter(lambda v: abs(v) > 1e-3)


@settings(max_examples=300, deadline=None)
@given(ann=st.sampled_from(ANNULI), a=st.tuples(coef, coef, coef, coef))
def test_count_matches_fine_scan(ann, a):
    q = MelnikovN3(ann, *a)
    rep = count_zeros_n3(q)
    assert rep.count <= 3
    hs = np.linspace(ann.lo + 1e-9, ann.hi - 1e-9, 20001)
    scan = sign_changes_from_values(hs, melnikov_n3_eval(q, hs)).count
    if all(z.kind is ZeroKind.SIMPLE for z in rep.zeros):
        # simple zeros closer than the grid spacing could hide from the scan
        gaps = np.diff([ann.lo] + rep.locations() + [ann.hi])
        if gaps.min() > 1e-3:
            assert scan == rep.count


def test_quartic_vanishes_at_zeros():
    ann = annulus(SystemParams.x29(0.0, 1.0), "U+")
    q = MelnikovN3(ann, 1.0, -2.0, 0.5, 3.0)
    for h in count_zeros_n3(q).locations():
        assert abs(np.polyval(quartic(q), h)) < 1e-8


def test_polynomial_only_form():
    ann = annulus(SystemParams.x29(0.0, 1.0), "U+")
    hc = ann.center_level
    z = 0.5 * (ann.lo + ann.hi)
    # a3 (h - hc)(h - z): one zero inside, the center itself excluded
    q = MelnikovN3(ann, -(hc + z), 1.0, 0.0, 0.0)
    rep = count_zeros_n3(q)
    assert rep.count == 1
    assert rep.locations()[0] == pytest.approx(z, abs=1e-12)


def test_even_touch():
    ann = annulus(SystemParams.x29(0.0, 1.0), "U+")
    hc, z = ann.center_level, 1.85
    r = math.sqrt(4 - z * z)
    # M(z) = M'(z) = 0 with M(hc) = 0 built in: a double zero at z
    rows = np.array([basis(hc, z), (1.0, 2 * z, -z / r, r - z * z / r)])
    direction = np.linalg.svd(rows)[2][-1]
    rep = count_zeros_n3(MelnikovN3(ann, *direction))
    assert [zz.kind for zz in rep.zeros] == [ZeroKind.EVEN_TOUCH]
    assert rep.zeros[0].h == pytest.approx(z, abs=1e-7)
    assert rep.simple == 0


def test_sign_change_refinement():
    sc = count_sign_changes(math.cos, (0.0, 6.0), grid_size=50)
    assert sc.count == 2
    roots = [0.5 * (lo + hi) for lo, hi in sc.brackets]
    assert roots == pytest.approx([math.pi / 2, 3 * math.pi / 2], abs=1e-10)


def test_sign_changes_skip_exact_zeros():
    hs = np.array([0.0, 1.0, 2.0, 3.0])
    assert sign_changes_from_values(hs, np.array([1.0, 0.0, -1.0, -2.0])).count == 1
