"""Direct numerical evaluation of the Abelian integrals (the oracle).

Every oval Gamma_h is an ellipse, parametrised in ``geometry.Ellipse`` by an
angle t so that x = x1 + (x2 - x1) sin^2(t/2).  This removes the square-root
endpoint singularities of the branch integrals: all integrands become smooth
and 2 pi-periodic in t, and the trapezoidal rule converges geometrically.
The node count is doubled until successive estimates agree.

Orientation: ``orientation=+1`` is counter-clockwise (lower branch from x1 to
x2, upper branch back).  With it, I_i1 equals S_i on every
annulus.  ``-1`` traverses the oval clockwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .coeffs import PerturbationCoeffs, monomials
from .errors import NonConvergence
from .geometry import Ellipse, SystemParams, delta_roots, locate, orientation_sign

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 14  # node doublings after the initial grid
    initial_nodes: int = 16

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")


DEFAULT = QuadratureConfig()


def _converged(new, old, abs_sum, cfg: QuadratureConfig) -> bool:
    diff = np.abs(new - old)
    bound = cfg.abs_tol + cfg.rel_tol * np.abs(new)
    floor = 64.0 * _EPS * abs_sum
    return bool(np.all((diff <= bound) | (diff <= floor)))


def periodic_trapezoid(node_sums, cfg: QuadratureConfig = DEFAULT):
    """Integrate over [0, 2 pi) from node sums.

    ``node_sums(n, offset)`` returns (sums, abs_sums) of the integrand over
    the nodes 2 pi (k + offset) / n, k < n.  Each doubling reuses the
    previous nodes and only evaluates the midpoints.
    """
    n = cfg.initial_nodes
    s, a = node_sums(n, 0.0)
    s = np.asarray(s, dtype=float)
    a = np.asarray(a, dtype=float)
    est = 2.0 * math.pi / n * s
    for _ in range(cfg.max_subdivisions):
        s_mid, a_mid = node_sums(n, 0.5)
        s = s + s_mid
        a = a + a_mid
        n *= 2
        new = 2.0 * math.pi / n * s
        if n >= 64 and _converged(new, est, 2.0 * math.pi / n * a, cfg):
            return new
        est = new
    raise NonConvergence(f"trapezoid not converged with {n} nodes")


@lru_cache(maxsize=4096)
def _tables(params: SystemParams, h: float, pmax: int, orientation: int,
            cfg: QuadratureConfig):
    ell = Ellipse.of(params, h)
    size = (pmax + 3) ** 2

    def sums(n, offset):
        dx, dy, ax, ay = kernels.ring_sums(ell.xm, ell.r, ell.s, ell.h, ell.c,
                                           n, offset, pmax, orientation)
        return (np.concatenate([np.ravel(dx), np.ravel(dy)]),
                np.concatenate([np.ravel(ax), np.ravel(ay)]))

    flat = periodic_trapezoid(sums, cfg)
    shape = (pmax + 3, pmax + 3)
    dx_tab = flat[:size].reshape(shape)
    dy_tab = flat[size:].reshape(shape)
    dx_tab.setflags(write=False)
    dy_tab.setflags(write=False)
    return dx_tab, dy_tab


def moment_tables(params: SystemParams, h: float, n: int, orientation: int = 1,
                  cfg: QuadratureConfig = DEFAULT):
    """Arrays I[i, j] = oint x^(i-2) y^(j-2) dx and D[i, j] (same with dy)
    for 0 <= i, j <= n."""
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    return _tables(params, float(h), max(n - 2, 0), orientation, cfg)


def _check_index(i, j):
    if i < 0 or j < 0:
        raise ValueError("moment indices must be non-negative")


def oracle_I(params, h, i, j, orientation=1, cfg=DEFAULT) -> float:
    """oint_{Gamma_h} x^(i-2) y^(j-2) dx."""
    _check_index(i, j)
    locate(params, h)
    dx_tab, _ = moment_tables(params, h, max(i, j, 2), orientation, cfg)
    return float(dx_tab[i, j])


def oracle_dy_moment(params, h, i, j, orientation=1, cfg=DEFAULT) -> float:
    """oint_{Gamma_h} x^(i-2) y^(j-2) dy."""
    _check_index(i, j)
    locate(params, h)
    _, dy_tab = moment_tables(params, h, max(i, j, 2), orientation, cfg)
    return float(dy_tab[i, j])


def curve_moment(params, h, i, j, orientation=1, cfg=DEFAULT) -> float:
    """oint x^(i-2) y^(j-2) dx on the oval H(x, y; b, c) = h, for any real
    (b, c) whose level set is an oval (used for the mirrored curve of the
    swap identity, where b > c)."""
    _check_index(i, j)
    delta_roots(params, h, check=False)
    dx_tab, _ = moment_tables(params, h, max(i, j, 2), orientation, cfg)
    return float(dx_tab[i, j])


def weighted_integral(params, h, g, cfg=DEFAULT) -> float:
    """int_{x1}^{x2} g(x) sqrt(Delta(x)) dx for a vectorised g."""
    locate(params, h)
    ell = Ellipse.of(params, h)
    # half of the full-period integral of g(x(t)) r s sin^2 t
    def sums(n, offset):
        t = 2.0 * np.pi / n * (np.arange(n) + offset)
        x = ell.xm - ell.r * np.cos(t)
        vals = 0.5 * ell.r * ell.s * np.sin(t) ** 2 * g(x)
        return vals.sum(), np.abs(vals).sum()

    return float(periodic_trapezoid(sums, cfg))


def _pole_guard(params, h):
    # x^2 + b x + 1 has complex roots for 0 <= b < 2; assert it stays positive
    roots = delta_roots(params, h)
    b = params.b
    lo = min(x * x + b * x + 1.0 for x in (roots.x1, roots.x2, -b / 2.0))
    if lo <= 0.0:
        raise AssertionError("x^2 + b x + 1 vanishes on the integration range")


def oracle_J(params, h, k, cfg=DEFAULT) -> float:
    if k < 0:
        raise ValueError("k must be non-negative")
    return weighted_integral(params, h, lambda x: x ** (k - 2.0), cfg)


def oracle_S(params, h, i, cfg=DEFAULT) -> float:
    if i not in (0, 1, 2, 3):
        raise ValueError("S_i defined for i = 0..3")
    _pole_guard(params, h)
    b = params.b
    return weighted_integral(params, h, lambda x: 2.0 * x ** (i - 2.0) / (x * x + b * x + 1.0), cfg)


def oracle_R(params, h, i, cfg=DEFAULT) -> float:
    if i not in (0, 1, 2, 3):
        raise ValueError("R_i defined for i = 0..3")
    _pole_guard(params, h)
    b, c = params.b, params.c
    return weighted_integral(
        params, h,
        lambda x: 2.0 * x ** (i - 2.0) * (h * x - c) / (x * x + b * x + 1.0) ** 2,
        cfg,
    )


def oracle_melnikov(params: SystemParams, coeffs: PerturbationCoeffs, h: float,
                    annulus=None, cfg: QuadratureConfig = DEFAULT) -> float:
    """M(h) = oint x^-2 y^-2 (f dy - g dx).

    The oval carries the orientation of ``geometry.orientation_sign``:
    clockwise on U-, counter-clockwise elsewhere.
    """
    if coeffs.n > 6:
        raise ValueError("oracle supports perturbation degree n <= 6")
    ann = locate(params, h)
    if annulus is not None and ann.tag != annulus.tag:
        raise ValueError(f"h={h} lies in {ann.tag.value}, not {annulus.tag.value}")
    dx_tab, dy_tab = moment_tables(params, h, max(coeffs.n, 2), 1, cfg)
    total = 0.0
    for (i, j), v in coeffs.a.items():
        total += v * dy_tab[i, j]
    for (i, j), v in coeffs.b.items():
        total -= v * dx_tab[i, j]
    return float(orientation_sign(ann) * total)


def melnikov_scale(params, coeffs, h, cfg=DEFAULT) -> float:
    """sum |coefficient * moment|: the cancellation scale of oracle_melnikov."""
    dx_tab, dy_tab = moment_tables(params, h, max(coeffs.n, 2), 1, cfg)
    s = sum(abs(v * dy_tab[i, j]) for (i, j), v in coeffs.a.items())
    s += sum(abs(v * dx_tab[i, j]) for (i, j), v in coeffs.b.items())
    return float(s)


def design_matrix(params: SystemParams, hs, n: int, cfg: QuadratureConfig = DEFAULT):
    """Rows M(h) per unit coefficient: columns a_ij then b_ij over monomials(n).

    For coefficient vectors C (one per column), ``design_matrix(..) @ C`` is
    oracle_melnikov on the whole grid at the cost of one moment table per h.
    """
    if n > 6:
        raise ValueError("oracle supports perturbation degree n <= 6")
    mons = monomials(n)
    rows = []
    for h in hs:
        ann = locate(params, h)
        dx_tab, dy_tab = moment_tables(params, h, max(n, 2), 1, cfg)
        sgn = orientation_sign(ann)
        rows.append([sgn * dy_tab[i, j] for i, j in mons]
                    + [-sgn * dx_tab[i, j] for i, j in mons])
    return np.array(rows)
