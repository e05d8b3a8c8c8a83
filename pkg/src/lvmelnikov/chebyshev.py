"""Wronskians of (f0, f1, f2, f3) and ECT verdicts.

With the center level hc of an annulus, the ordered tuple is

    f0 = h - hc, f1 = h^2 - hc^2, f2 = sqrt(4-h^2) - sqrt(4-hc^2),
    f3 = h sqrt(4-h^2) - hc sqrt(4-hc^2),

the same for both families (X210 has hc = 2 - b^2).  Writing h = 2 cos(al)
and hc = 2 cos(be), the two nontrivial Wronskians factor as

    W3 = 8 sin^3((al-be)/2) sin((3 al + be)/2) / sin^3(al)
    W4 = -768 sin^4((al-be)/2) / (4 - h^2)^3

which is how ``omega`` evaluates them: the expanded polynomial forms lose
their sign to cancellation next to hc, where W3 and W4 vanish to third and
fourth order.  ``omega_expanded`` keeps those expressions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .closed_forms import basis
from .errors import StepTooSmall
from .geometry import AnnulusSpec, AnnulusTag, SystemParams, annuli, annulus

H_CLAMP = 2.0 - 1e-9


def _clamp(h: float) -> float:
    return max(-H_CLAMP, min(H_CLAMP, h))


def _anchor(params: SystemParams, ann) -> float:
    if not isinstance(ann, AnnulusSpec):
        ann = annulus(params, ann)
    return ann.center_level


def omega(params: SystemParams, ann, i: int, h: float) -> float:
    """Wronskian of order i (1..4) of the tuple anchored on ``ann``."""
    return omega_at(_anchor(params, ann), i, h)


def omega_at(hc: float, i: int, h: float) -> float:
    """Wronskian of order i (1..4) at h, for center level hc."""
    h = _clamp(h)
    if i == 1:
        return h - hc
    if i == 2:
        return (h - hc) * (h - hc)
    al = math.acos(h / 2.0)
    be = math.acos(hc / 2.0)
    half = math.sin(0.5 * (al - be))
    if i == 3:
        return 8.0 * half ** 3 * math.sin(0.5 * (3.0 * al + be)) / math.sin(al) ** 3
    if i == 4:
        return -768.0 * half ** 4 / (4.0 - h * h) ** 3
    raise ValueError("Wronskian order must be 1..4")


def omega_expanded(hc: float, i: int, h: float) -> float:
    """The expanded closed forms, term by term."""
    h = _clamp(h)
    rc = math.sqrt(4.0 - hc * hc)
    rh = math.sqrt(4.0 - h * h)
    if i == 1:
        return h - hc
    if i == 2:
        return (h - hc) ** 2
    if i == 3:
        return 2.0 / rh ** 3 * (hc * h ** 3 - 6 * h * h + 16 - 2 * hc * hc) - 2 * rc
    if i == 4:
        return -24.0 / rh ** 6 * ((hc * hc - 2) * h * h - 4 * hc * h + 16 - 2 * hc * hc
                                  + rc * rh * (-4 + hc * h))
    raise ValueError("Wronskian order must be 1..4")


def omega3_derivative(params: SystemParams, ann, h: float) -> float:
    hc = _anchor(params, ann)
    h = _clamp(h)
    return -12.0 * h * (h - hc) ** 2 / (4.0 - h * h) ** 2.5


def splitting_level(hc: float) -> float | None:
    """Interior zero of W3 above hc, or None when W3 keeps its sign.

    From the factorised W3: sin((3 al + be)/2) = 0 at al = (2 pi - be)/3,
    which lies on the h > hc side only when hc < 0.
    """
    be = math.acos(hc / 2.0)
    al = (2.0 * math.pi - be) / 3.0
    if al < be:
        return 2.0 * math.cos(al)
    return None


# central-difference stencils, 8th order, for derivatives 1..3
_STENCILS = {
    1: (np.arange(-4, 5), np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])),
    2: (np.arange(-4, 5), np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])),
    3: (np.arange(-4, 5), np.array([-7 / 240, 3 / 10, -169 / 120, 61 / 30, 0, -61 / 30, 169 / 120, -3 / 10, 7 / 240])),
}


def _fd_derivative(fun, h: float, order: int, step: float) -> float:
    if order == 0:
        return fun(h)
    offs, w = _STENCILS[order]
    vals = np.array([fun(h + o * step) for o in offs])
    return float(w @ vals) / step ** order


def omega_vs_wronskian(params: SystemParams, ann, i: int, h: float,
                       step: float = 1e-3) -> float:
    """|det(finite-difference Wronskian) - omega| / max(|omega|, tiny).

    The determinant is assembled from 8th-order central differences of the
    basis functions, independently of the closed forms.
    """
    if step < 1e-7:
        raise StepTooSmall("finite-difference step below 1e-7 is noise-dominated")
    if not (-2.0 < h - 4 * step and h + 4 * step < 2.0):
        raise StepTooSmall("stencil leaves (-2, 2)")
    hc = _anchor(params, ann)
    funcs = [lambda x, k=k: basis(hc, x)[k] for k in range(i)]
    mat = np.array([[_fd_derivative(funcs[col], h, row, step) for col in range(i)]
                    for row in range(i)])
    det = float(np.linalg.det(mat)) if i > 1 else float(mat[0, 0])
    ref = omega_at(hc, i, h)
    return abs(det - ref) / max(abs(ref), 1e-300)


@dataclass(frozen=True)
class EctVerdict:
    annulus: AnnulusSpec
    verdict: str  # "FullECT" or "PartialECT"
    d_bracket: tuple[float, float] | None = None
    witness: tuple = field(default=(), repr=False)  # ((h, sign W3), ...)

    @property
    def d(self) -> float | None:
        return None if self.d_bracket is None else self.d_bracket[0]

    @property
    def ect_interval(self) -> tuple[float, float]:
        """Open interval on which the tuple is certified ECT."""
        ann = self.annulus
        if self.d_bracket is None:
            return (ann.lo, ann.hi)
        return (ann.lo, self.d_bracket[0])

    def to_json(self):
        if self.verdict == "FullECT":
            return "FullECT"
        return {"verdict": "PartialECT", "d": list(self.d_bracket)}


def _bisect(fun, lo: float, hi: float, tol: float = 1e-12) -> tuple[float, float]:
    flo = fun(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = fun(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def ect_verdict(params: SystemParams, ann: AnnulusSpec | AnnulusTag | str,
                grid: int = 1000) -> EctVerdict:
    """Scan W1..W4 on the open annulus; bisect any sign change of W3.

    W1, W2 and W4 vanish only at the center level, so a sign change of any
    of them inside the annulus is a bug and raises.  W3 has at most one
    interior sign change because W3' vanishes only at 0 and hc.
    """
    if not isinstance(ann, AnnulusSpec):
        ann = annulus(params, ann)
    hc = ann.center_level
    lo, hi = ann.lo, min(ann.hi, H_CLAMP)
    lo = max(lo, -H_CLAMP)
    hs = np.linspace(lo, hi, grid + 2)[1:-1]
    for i in (1, 2, 4):
        signs = {math.copysign(1.0, omega_at(hc, i, h)) for h in hs}
        if len(signs) != 1:
            raise RuntimeError(f"W{i} changed sign inside {ann.tag.value}")
    w3 = np.array([omega_at(hc, 3, h) for h in hs])
    s3 = np.sign(w3)
    witness = tuple(zip(hs.tolist(), s3.tolist()))
    flips = np.nonzero(s3[:-1] * s3[1:] < 0)[0]
    if len(flips) == 0:
        return EctVerdict(ann, "FullECT", None, witness)
    if len(flips) > 1:
        raise RuntimeError("W3 changed sign more than once; inconsistent with W3'")
    k = int(flips[0])
    bracket = _bisect(lambda h: omega_at(hc, 3, h), float(hs[k]), float(hs[k + 1]))
    return EctVerdict(ann, "PartialECT", bracket, witness)


def ect_table(params: SystemParams, grid: int = 1000) -> dict[str, EctVerdict]:
    return {ann.tag.value: ect_verdict(params, ann, grid) for ann in annuli(params)}
