"""Closed forms of the basic integrals and the reduced cubic Melnikov form.

All values follow the counter-clockwise orientation of ``quadrature``, under
which I_i1 = S_i.  J_k, S_i and R_i are the single integrals

    J_k = int x^(k-2) sqrt(D) dx,
    S_i = int 2 x^(i-2) sqrt(D) / (x^2 + b x + 1) dx,
    R_i = int 2 x^(i-2) (h x - c) sqrt(D) / (x^2 + b x + 1)^2 dx

over [x1, x2], where D is the Delta quadratic of ``geometry``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import beta as _beta

from .coeffs import PerturbationCoeffs
from .errors import DegreeMismatch, UnsupportedK
from .geometry import (AnnulusSpec, AnnulusTag, Family, SystemParams,
                       annulus as _annulus, delta_roots, locate,
                       orientation_sign)

PI = math.pi


def _branch(params: SystemParams, h: float, ann: AnnulusSpec | None) -> float:
    """+1 on U+ and on the X210 annulus, -1 on U-; checks h against ann."""
    found = locate(params, h)
    if ann is not None and ann.tag != found.tag:
        raise ValueError(f"h={h} lies in {found.tag.value}, not {ann.tag.value}")
    return -1.0 if found.tag is AnnulusTag.MINUS else 1.0


def cf_J01(params: SystemParams, h: float, ann: AnnulusSpec | None = None):
    """(J0, J1)."""
    s = _branch(params, h, ann)
    b, c = params.b, params.c
    rh = math.sqrt(4.0 - h * h)
    if params.family is Family.X29:
        rc = params.delta
        j1 = -(2 * b + c * h) / (2 * rh) * PI + s * rc / 2 * PI
        j0 = s * (2 * b + c * h) / (2 * rc) * PI - rh / 2 * PI
    else:
        rb = params.gamma
        j1 = -b * (2 + h) / (2 * rh) * PI + rb / 2 * PI
        j0 = b * (2 + h) / (2 * rb) * PI - rh / 2 * PI
    return j0, j1


def _half_beta(m: int, k: int) -> float:
    # int_0^inf t^(2m+2) / (1+t^2)^(k+1) dt
    return 0.5 * _beta(m + 1.5, k - m - 0.5)


def cf_Jk(params: SystemParams, h: float, k: int) -> float:
    """J_k for 2 <= k <= 8 through the symmetric t-substitution.

    With sqrt((x2-x)(x-x1)) = t (x-x1) and = t (x2-x), averaging the two
    forms gives sqrt(4-h^2) (x2-x1)^2 times
    int_0^inf t^2 [(x2+t^2 x1)^(k-2) + (x1+t^2 x2)^(k-2)] / (2 (1+t^2)^(k+1)) dt,
    expanded binomially into Beta moments.
    """
    if not 2 <= k <= 8:
        raise UnsupportedK(f"cf_Jk supports 2 <= k <= 8, got {k}")
    roots = delta_roots(params, h)
    x1, x2 = roots.x1, roots.x2
    m = k - 2
    acc = 0.0
    for l in range(m + 1):
        binom = math.comb(m, l)
        mom = _half_beta(l, k)
        acc += binom * mom * (x2 ** (m - l) * x1 ** l + x1 ** (m - l) * x2 ** l)
    return math.sqrt(4.0 - h * h) * (x2 - x1) ** 2 * acc / 2.0


def cf_J(params: SystemParams, h: float, k: int, ann: AnnulusSpec | None = None) -> float:
    if k in (0, 1):
        return cf_J01(params, h, ann)[k]
    return cf_Jk(params, h, k)


def cf_S(params: SystemParams, h: float, i: int, ann: AnnulusSpec | None = None) -> float:
    s = _branch(params, h, ann)
    b, c = params.b, params.c
    rh = math.sqrt(4.0 - h * h)
    rb = params.gamma
    if params.family is Family.X29:
        rc = params.delta
        if i == 0:
            return ((b * b - 2) * c + b * h) / rb * PI + s * ((c * c - 2) * b + c * h) / rc * PI
        if i == 1:
            return -(b * c + 2 * h) / rb * PI + s * rc * PI
        if i == 2:
            return (2 * c + b * h) / rb * PI - rh * PI
        if i == 3:
            return (-(b * c + (b * b - 2) * h) / rb * PI
                    - (-2 * b + c * h + b * h * h) / rh * PI)
    else:
        if i == 0:
            return 2 * b * (h - (2 - b * b)) / rb * PI
        if i == 1:
            return -2 * (h - (2 - b * b)) / rb * PI
        if i == 2:
            return b * (2 + h) / rb * PI - rh * PI
        if i == 3:
            return (-(b * b + (b * b - 2) * h) / rb * PI
                    - b * (-2 + h + h * h) / rh * PI)
    raise ValueError("S_i defined for i = 0..3")


def cf_R(params: SystemParams, h: float, i: int, ann: AnnulusSpec | None = None) -> float:
    s = _branch(params, h, ann)
    b, c = params.b, params.c
    rh = math.sqrt(4.0 - h * h)
    rb = params.gamma
    rb3 = rb ** 3
    if params.family is Family.X29:
        rc = params.delta
        if i == 0:
            return (2 * (-8 + 6 * c * c - 6 * b * b * (-1 + c * c) + b ** 4 * (-1 + c * c)) * PI / rb3
                    - s * 2 * b * c * (-3 + c * c) * PI / rc
                    + h * (2 * b * (-6 + b * b) * c * PI / rb3 - s * 2 * (-2 + c * c) * PI / rc)
                    - 4 * h * h * PI / rb3)
        if i == 1:
            return (2 * b * c * c * PI / rb3 + b * (c * c - 2) * PI / rb
                    - s * c * rc * PI + 8 * c * h * PI / rb3 + 2 * b * h * h * PI / rb3)
        if i == 2:
            return -4 * (-4 + b * b + c * c + b * c * h + h * h) * PI / rb3
        if i == 3:
            return (2 * b * (-4 + b * b + c * c) * PI / rb3 + 8 * c * h * PI / rb3
                    - b * (-6 + b * b) * h * h * PI / rb3 - h * rh * PI)
    else:
        hc = 2 - b * b
        if i == 0:
            return -4 * (h - hc) * (h - b ** 4 + 5 * b * b - 2) * PI / rb3
        if i == 1:
            return 2 * b * (h - hc) * (h - b * b + 6) * PI / rb3
        if i == 2:
            return -4 * (h - hc) * (h + 2) * PI / rb3
        if i == 3:
            return (-b * (h + 2) * (b * b * h - 6 * h - 2 * b * b + 4) * PI / rb3
                    - h * rh * PI)
    raise ValueError("R_i defined for i = 0..3")


def _reduced_x29(params: SystemParams, co: PerturbationCoeffs, s: float):
    """(a2, a3, a4, a5) for X29, with s = +1 on U+, -1 on U-."""
    b, c = params.b, params.c
    A, B = co.get_a, co.get_b
    rb, rc = params.gamma, params.delta
    rb3, rc3 = rb ** 3, rc ** 3
    a2 = (B(0, 0) * (s * 2 * b * c * (6 - b * b) * PI / rb3 + 2 * (-2 + c * c) * PI / rc)
          + A(0, 0) * (-2 * b * c * (-6 + c * c) * PI / rc3 + s * 2 * (-2 + b * b) * PI / rb)
          - (B(0, 1) + A(1, 0)) * (s * b * PI / rb + c * PI / rc)
          + s * 2 * B(1, 1) * PI / rb + 2 * A(1, 1) * PI / rc
          + s * b * (-B(2, 1) + A(3, 0)) * PI / rb
          + s * 4 * c * (-2 * B(1, 0) + B(2, 0) * b - 2 * B(3, 0)) * PI / rb3
          - 4 * b * (2 * A(0, 1) - A(0, 2) * c + 2 * A(0, 3)) * PI / rc3
          - c * (A(1, 2) - B(0, 3)) * PI / rc)
    a3 = (s * 4 * (B(0, 0) + B(2, 0)) * PI / rb3 + 4 * (A(0, 0) + A(0, 2)) * PI / rc3
          - s * 2 * B(1, 0) * b * PI / rb3 - 2 * A(0, 1) * c * PI / rc3
          + s * B(3, 0) * b * (-6 + b * b) * PI / rb3 + A(0, 3) * c * (-6 + c * c) * PI / rc3)
    a4 = s * (B(2, 1) - B(0, 3) + A(1, 2) - A(3, 0)) * PI
    a5 = s * (B(3, 0) + A(0, 3)) * PI
    return a2, a3, a4, a5


def _reduced_x210(params: SystemParams, co: PerturbationCoeffs):
    b = params.b
    A, B = co.get_a, co.get_b
    rb = params.gamma
    rb3 = rb ** 3
    a2 = (-4 * (B(0, 0) + A(0, 0)) * (4 - 6 * b * b + b ** 4) * PI / rb3
          - 8 * (B(1, 0) + A(0, 1) + B(3, 0) + A(0, 3)) * b * PI / rb3
          - 2 * (B(0, 1) + A(1, 0)) * b * PI / rb
          + 4 * (B(2, 0) + A(0, 2)) * b * b * PI / rb3
          + 2 * (B(1, 1) + A(1, 1)) * PI / rb
          - (B(2, 1) + A(1, 2) - B(0, 3) - A(3, 0)) * b * PI / rb)
    a3 = (4 * (B(0, 0) + B(2, 0) + A(0, 0) + A(0, 2)) * PI / rb3
          - 2 * (B(1, 0) + A(0, 1)) * b * PI / rb3
          + (B(3, 0) + A(0, 3)) * b * (-6 + b * b) * PI / rb3)
    a4 = (B(2, 1) - B(0, 3) + A(1, 2) - A(3, 0)) * PI
    a5 = (B(3, 0) + A(0, 3)) * PI
    return a2, a3, a4, a5


@dataclass(frozen=True)
class MelnikovN3:
    """M(h) = a1 + a2 h + a3 h^2 + (a4 + a5 h) sqrt(4 - h^2) on one annulus.

    a1 is tied to the rest through the center level hc, where the oval
    shrinks to a point: a1 = m a2 + n a3 + p a4 + q a5.
    """

    annulus: AnnulusSpec
    a2: float
    a3: float
    a4: float
    a5: float

    @property
    def center_level(self) -> float:
        return self.annulus.center_level

    @property
    def anchors(self) -> tuple[float, float, float, float]:
        """(m, n, p, q)."""
        return anchor_constants(self.center_level)

    @property
    def a1(self) -> float:
        m, n, p, q = self.anchors
        return m * self.a2 + n * self.a3 + p * self.a4 + q * self.a5

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.a1, self.a2, self.a3, self.a4, self.a5)

    def scale(self) -> float:
        return max(abs(v) for v in self.as_tuple())


def anchor_constants(hc: float) -> tuple[float, float, float, float]:
    """(m, n, p, q) = (-hc, -hc^2, -sqrt(4-hc^2), -hc sqrt(4-hc^2)).

    For X210, hc = 2 - b^2 gives sqrt(4-hc^2) = b sqrt(4-b^2), so that
    m = -2+b^2, n = -(-2+b^2)^2, p = -b sqrt(4-b^2),
    q = b sqrt(4-b^2)(-2+b^2).
    """
    r = math.sqrt(4.0 - hc * hc)
    return (-hc, -hc * hc, -r, -hc * r)


def melnikov_n3_coeffs(params: SystemParams, coeffs: PerturbationCoeffs,
                       ann: AnnulusSpec | AnnulusTag | str) -> MelnikovN3:
    if coeffs.n != 3:
        raise DegreeMismatch(f"reduced form needs n = 3, got n = {coeffs.n}")
    if not isinstance(ann, AnnulusSpec):
        ann = _annulus(params, ann)
    if params.family is Family.X29:
        vals = _reduced_x29(params, coeffs, orientation_sign(ann))
    else:
        vals = _reduced_x210(params, coeffs)
    return MelnikovN3(ann, *vals)


def melnikov_n3_eval(q: MelnikovN3, h):
    """Evaluate M at h in [-2, 2] (scalar or array)."""
    h_arr = h
    hc = q.center_level
    r = (4.0 - h_arr * h_arr) ** 0.5
    rc = math.sqrt(4.0 - hc * hc)
    # written relative to the center level so M(hc) = 0 holds exactly
    return (q.a2 * (h_arr - hc) + q.a3 * (h_arr * h_arr - hc * hc)
            + q.a4 * (r - rc) + q.a5 * (h_arr * r - hc * rc))


def basis(hc: float, h):
    """The ordered tuple (f0, f1, f2, f3) at h for center level hc."""
    m, n, p, q = anchor_constants(hc)
    r = (4.0 - h * h) ** 0.5
    return (h + m, h * h + n, r + p, h * r + q)
