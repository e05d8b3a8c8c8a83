import warnings

import numpy as np
import pytest

from lvmelnikov.closed_forms import melnikov_n3_coeffs, melnikov_n3_eval
from lvmelnikov.coeffs import PerturbationCoeffs
from lvmelnikov.designer import Configuration, realize_configuration
from lvmelnikov.errors import LeftAnnulus
from lvmelnikov.geometry import SystemParams, annuli, annulus
from lvmelnikov.ode import (
    PerturbedField,
    detect_cycles,
    displacement_grid,
    orientation_factor,
    poincare_return,
    richardson,
)

P = SystemParams.x29(0.0, 1.9)


@pytest.fixture(scope="module")
def one_zero():
    return realize_configuration(P, Configuration(1, 0)).coeffs


def test_eps_bounds():
    with pytest.raises(ValueError):
        PerturbedField(P, PerturbationCoeffs.zeros(3), 0.05)


@pytest.mark.parametrize("params", [P, SystemParams.x29(1.2, 1.8), SystemParams.x210(1.0)])
def test_orientation_factor(params):
    for ann in annuli(params):
        assert orientation_factor(params, ann) == 1.0


def test_unperturbed_orbits_close(one_zero):
    pf = PerturbedField(P, one_zero, 0.0)
    for ann in annuli(P):
        d = displacement_grid(pf, ann, ann.grid(5, 0.05))
        assert np.all(np.abs(d) <= 1e-9)


def test_richardson_matches_melnikov(one_zero):
    pf = PerturbedField(P, one_zero, 1e-4)
    for ann in annuli(P):
        q = melnikov_n3_coeffs(P, one_zero, ann)
        for h in ann.grid(3, 0.1):
            m = float(melnikov_n3_eval(q, h))
            if abs(m) > 1e-3:
                assert richardson(pf, h, ann) == pytest.approx(m, rel=5e-3)


def test_one_cycle_detected(one_zero):
    pf = PerturbedField(P, one_zero, 1e-4)
    assert detect_cycles(pf, "U+", 41).count == 1
    assert detect_cycles(pf, "U-", 41).count == 0


# pushes H upward near the outer boundary level h = 2
OUTWARD = PerturbationCoeffs(3, a={(1, 0): -1.0}, b={(0, 1): -1.0})


def test_leaving_annulus_is_reported():
    pf = PerturbedField(P, OUTWARD, 1e-2)
    ann = annulus(P, "U+")
    with pytest.raises(LeftAnnulus):
        poincare_return(pf, ann.hi - 1e-4, ann)


def test_failures_become_nan():
    pf = PerturbedField(P, OUTWARD, 1e-2)
    ann = annulus(P, "U+")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        d = displacement_grid(pf, ann, [0.5 * (ann.lo + ann.hi), ann.hi - 1e-4])
    assert np.isfinite(d[0]) and np.isnan(d[1])
    assert any("left" in str(w.message) for w in caught)
