import numpy as np
import pytest

from lvmelnikov import _kernels_py, kernels
from lvmelnikov.coeffs import PerturbationCoeffs
from lvmelnikov.geometry import Ellipse, SystemParams, center_point

try:
    from lvmelnikov import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

needs_ext = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def test_selection_reports_implementation():
    assert kernels.IMPLEMENTATION in ("cython", "python")


def test_max_workers_env(monkeypatch):
    monkeypatch.setenv("MEL_THREADS", "3")
    assert kernels.max_workers() == 3
    monkeypatch.setenv("MEL_THREADS", "junk")
    assert kernels.max_workers() >= 1


@needs_ext
def test_ring_sums_parity():
    p = SystemParams.x29(0.5, 1.5)
    e = Ellipse.of(p, 1.5)
    args = (e.xm, e.r, e.s, e.h, e.c, 64, 0.5, 5, 1)
    fast, slow = compiled.ring_sums(*args), _kernels_py.ring_sums(*args)
    # signed sums can cancel to roundoff, so compare against the absolute sums
    for k, scale in ((0, slow[2]), (1, slow[3]), (2, slow[2]), (3, slow[3])):
        assert np.all(np.abs(fast[k] - slow[k]) <= 1e-13 * scale)


@needs_ext
def test_return_map_parity():
    p = SystemParams.x29(0.0, 1.9)
    co = PerturbationCoeffs.random(3, np.random.default_rng(0))
    fa, fb = co.dense()
    from lvmelnikov.ode import start_point
    from lvmelnikov.geometry import annulus

    ann = annulus(p, "U+")
    h = 0.5 * (ann.lo + ann.hi)
    x0, y0 = start_point(p, h)
    cx, cy = center_point(p, "U+")
    args = (x0, y0, cx, cy, p.b, p.c, 1e-3, fa, fb, 3, 1e-10, 1e-12, 1e-3, 100000, ann.lo, ann.hi)
    rc, rp = compiled.return_map(*args), _kernels_py.return_map(*args)
    assert rc[0] == rp[0] == 0
    assert rc[4] == rp[4]
    np.testing.assert_allclose(rc[1:4], rp[1:4], rtol=1e-11)
