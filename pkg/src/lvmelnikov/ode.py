"""Direct integration of the perturbed system and return-map displacements.

The transverse coordinate is H itself: along a perturbed orbit
dH/dt = eps (H_x f + H_y g), so one revolution changes H by eps times the
line integral of x^-2 y^-2 (f dy - g dx) taken in the direction of time,
up to O(eps^2).  How that direction relates to the orientation used for
M(h) is measured per annulus (``orientation_factor``), not assumed.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .coeffs import PerturbationCoeffs
from .errors import IntegrationFailure, LeftAnnulus
from .geometry import (
    AnnulusSpec,
    SystemParams,
    annulus,
    center_point,
    delta_roots,
    first_integral,
    orientation_sign,
)
from .zeros import sign_changes_from_values

EPS_MAX = 1e-2
RTOL = 1e-12
ATOL = 1e-14
MAX_STEPS = 2_000_000


@dataclass(frozen=True)
class PerturbedField:
    params: SystemParams
    coeffs: PerturbationCoeffs
    eps: float

    def __post_init__(self):
        if not 0.0 <= self.eps <= EPS_MAX:
            raise ValueError(f"eps must lie in [0, {EPS_MAX}], got {self.eps}")

    def with_eps(self, eps: float) -> "PerturbedField":
        return PerturbedField(self.params, self.coeffs, eps)


def field_eval(pf: PerturbedField, x, y):
    b, c = pf.params.b, pf.params.c
    dx = x * (1.0 + b * x + x * x - y * y)
    dy = y * (-1.0 - c * y + x * x - y * y)
    if pf.eps:
        f, g = pf.coeffs.eval_fg(x, y)
        dx = dx + pf.eps * f
        dy = dy + pf.eps * g
    return dx, dy


def grad_H(params: SystemParams, x, y):
    b, c = params.b, params.c
    num = 1.0 + b * x + c * y + x * x + y * y
    hx = (b + 2.0 * x) / (x * y) - num / (x * x * y)
    hy = (c + 2.0 * y) / (x * y) - num / (x * y * y)
    return hx, hy


def start_point(params: SystemParams, h: float) -> tuple[float, float]:
    """Point of Gamma_h with maximal x."""
    x2 = delta_roots(params, h).x2
    return x2, 0.5 * (h * x2 - params.c)


def orientation_factor(params: SystemParams, ann) -> float:
    """Sign s with (H_return - H_start) / eps -> s * M(h).

    Measured on the unperturbed flow at the rightmost point of an interior
    oval: the field is compared with (-H_y, H_x) / R there (giving the sign
    of the Hamiltonian form), and its vertical component gives the time
    direction relative to counter-clockwise.
    """
    if not isinstance(ann, AnnulusSpec):
        ann = annulus(params, ann)
    h = 0.5 * (ann.lo + ann.hi)
    x, y = start_point(params, h)
    fx, fy = field_eval(PerturbedField(params, PerturbationCoeffs.zeros(0), 0.0), x, y)
    hx, hy = grad_H(params, x, y)
    r = 1.0 / (x * x * y * y)
    hamiltonian = math.copysign(1.0, fx * (-hy / r) + fy * (hx / r))
    time_ccw = math.copysign(1.0, fy)  # moving up at the rightmost point
    return hamiltonian * time_ccw * orientation_sign(ann)


@dataclass(frozen=True)
class ReturnSample:
    h_start: float
    h_return: float
    flight_time: float
    steps: int
    revolutions: int = 1

    @property
    def displacement(self) -> float:
        return self.h_return - self.h_start


def poincare_return(pf: PerturbedField, h_start: float, ann,
                    rtol: float = RTOL, atol: float = ATOL) -> ReturnSample:
    """One revolution from the rightmost point of Gamma_{h_start} back to the
    ray from the center through it."""
    params = pf.params
    if not isinstance(ann, AnnulusSpec):
        ann = annulus(params, ann)
    if not ann.contains(h_start):
        raise LeftAnnulus(f"h_start={h_start} is not inside {ann.tag.value}")
    x0, y0 = start_point(params, h_start)
    cx, cy = center_point(params, ann.tag)
    fa, fb = pf.coeffs.dense()
    status, x, y, t, steps = kernels.return_map(
        x0, y0, cx, cy, params.b, params.c, pf.eps, fa, fb, pf.coeffs.n,
        rtol, atol, 1e-3, MAX_STEPS, ann.lo, ann.hi)
    if status == 3:
        raise LeftAnnulus(f"orbit from h={h_start} left {ann.tag.value}")
    if status != 0:
        reason = "step budget exhausted" if status == 1 else "step size underflow"
        raise IntegrationFailure(f"{reason} from h={h_start}")
    return ReturnSample(h_start, float(first_integral(params, x, y)), float(t), int(steps))


def scaled_displacement(pf: PerturbedField, h: float, ann) -> float:
    """(H_return - H_start) / eps, oriented to compare with M(h)."""
    if pf.eps == 0.0:
        raise ValueError("scaled displacement needs eps > 0")
    if not isinstance(ann, AnnulusSpec):
        ann = annulus(pf.params, ann)
    s = poincare_return(pf, h, ann)
    return orientation_factor(pf.params, ann) * s.displacement / pf.eps


def richardson(pf: PerturbedField, h: float, ann) -> float:
    """First-order extrapolation 2 D(eps/2) - D(eps) of the scaled displacement."""
    d1 = scaled_displacement(pf, h, ann)
    d2 = scaled_displacement(pf.with_eps(0.5 * pf.eps), h, ann)
    return 2.0 * d2 - d1


def _map(fn, items):
    workers = min(kernels.max_workers(), len(items)) or 1
    if workers == 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def displacement_grid(pf: PerturbedField, ann, hs) -> np.ndarray:
    """Scaled displacements on a grid; failed returns become NaN with a warning."""
    if not isinstance(ann, AnnulusSpec):
        ann = annulus(pf.params, ann)
    factor = orientation_factor(pf.params, ann)

    def one(h):
        try:
            s = poincare_return(pf, float(h), ann)
        except (IntegrationFailure, LeftAnnulus) as exc:
            warnings.warn(str(exc), RuntimeWarning, stacklevel=2)
            return math.nan
        d = s.displacement
        return factor * d / pf.eps if pf.eps else d

    return np.array(_map(one, list(hs)))


@dataclass(frozen=True)
class CycleReport:
    annulus: AnnulusSpec
    count: int
    brackets: tuple
    hs: np.ndarray
    displacements: np.ndarray


def detect_cycles(pf: PerturbedField, ann, grid_size: int = 41,
                  margin: float = 0.02, refine: bool = True) -> CycleReport:
    """Sign changes of the return displacement across the annulus.

    Each change brackets a limit cycle of the perturbed system at this eps.
    With ``refine`` every bracket is narrowed by Brent's method on the
    displacement itself.
    """
    if not isinstance(ann, AnnulusSpec):
        ann = annulus(pf.params, ann)
    if pf.eps == 0.0:
        raise ValueError("cycle detection needs eps > 0")
    hs = ann.grid(grid_size, margin)
    disp = displacement_grid(pf, ann, hs)
    ok = np.isfinite(disp)
    evaluator = (lambda h: scaled_displacement(pf, h, ann)) if refine else None
    changes = sign_changes_from_values(hs[ok], disp[ok], evaluator)
    return CycleReport(ann, changes.count, changes.brackets, hs, disp)
