"""Parameters, centers, period annuli and level-curve data.

The unperturbed system is

    x' = x (1 + b x + x^2 - y^2)
    y' = y (-1 - c y + x^2 - y^2)

with first integral H = (1 + b x + c y + x^2 + y^2) / (x y) and integrating
factor x^-2 y^-2.  Family ``X29`` has ``0 <= b < c < 2`` and two period
annuli; family ``X210`` has ``0 < b = c < 2`` and a single annulus.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import IncompatibleTag, InvalidParams, OutsideAnnulus

# h closer than this to an annulus endpoint is treated as outside
ENDPOINT_GAP = 1e-9


class Family(str, enum.Enum):
    X29 = "X29"
    X210 = "X210"


class AnnulusTag(str, enum.Enum):
    MINUS = "U-"
    PLUS = "U+"
    SINGLE = "U"

    @classmethod
    def parse(cls, text: str) -> "AnnulusTag":
        key = text.strip().lower()
        aliases = {
            "u-": cls.MINUS, "minus": cls.MINUS, "-": cls.MINUS,
            "u+": cls.PLUS, "plus": cls.PLUS, "+": cls.PLUS,
            "u": cls.SINGLE, "single": cls.SINGLE,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown annulus tag {text!r}") from None


@dataclass(frozen=True)
class SystemParams:
    family: Family
    b: float
    c: float

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        b, c = float(self.b), float(self.c)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        if fam is Family.X29:
            if not (0.0 <= b < c < 2.0):
                raise InvalidParams(f"X29 needs 0 <= b < c < 2, got b={b}, c={c}")
        else:
            if not (0.0 < b < 2.0) or b != c:
                raise InvalidParams(f"X210 needs 0 < b = c < 2, got b={b}, c={c}")

    @classmethod
    def x29(cls, b: float, c: float) -> "SystemParams":
        return cls(Family.X29, b, c)

    @classmethod
    def x210(cls, b: float) -> "SystemParams":
        return cls(Family.X210, b, b)

    @property
    def gamma(self) -> float:
        return math.sqrt(4.0 - self.b * self.b)

    @property
    def delta(self) -> float:
        return math.sqrt(4.0 - self.c * self.c)

    def swapped(self) -> "SystemParams":
        """Parameters of the mirrored curve H(x, y, c, b) = h.

        The mirrored pair may have b > c, which is not a valid X29 member;
        the result is only meant for curve geometry, so validation is skipped.
        """
        obj = object.__new__(SystemParams)
        object.__setattr__(obj, "family", self.family)
        object.__setattr__(obj, "b", self.c)
        object.__setattr__(obj, "c", self.b)
        return obj

    def annulus_tags(self) -> tuple[AnnulusTag, ...]:
        if self.family is Family.X29:
            return (AnnulusTag.MINUS, AnnulusTag.PLUS)
        return (AnnulusTag.SINGLE,)


@dataclass(frozen=True)
class AnnulusSpec:
    tag: AnnulusTag
    lo: float
    hi: float
    center_level: float

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, h: float, gap: float = ENDPOINT_GAP) -> bool:
        return self.lo + gap < h < self.hi - gap

    def grid(self, n: int, margin: float = 0.02) -> np.ndarray:
        """``n`` equispaced levels with a relative margin at both ends."""
        pad = margin * self.length
        return np.linspace(self.lo + pad, self.hi - pad, n)


@dataclass(frozen=True)
class DeltaRoots:
    """Roots of Delta(x) = q2 x^2 + q1 x + q0 at level h, with x1 < x2."""

    h: float
    x1: float
    x2: float
    q2: float
    q1: float
    q0: float

    def delta(self, x):
        return (self.q2 * x + self.q1) * x + self.q0


def center_levels(params: SystemParams):
    """(h-, h+) for X29, the single center level 2 - b^2 for X210."""
    if params.family is Family.X29:
        g, d = params.gamma, params.delta
        bc = params.b * params.c
        return ((-bc - g * d) / 2.0, (-bc + g * d) / 2.0)
    return 2.0 - params.b ** 2


def annulus(params: SystemParams, tag) -> AnnulusSpec:
    tag = AnnulusTag(tag)
    if params.family is Family.X29:
        hm, hp = center_levels(params)
        if tag is AnnulusTag.MINUS:
            return AnnulusSpec(tag, -2.0, hm, hm)
        if tag is AnnulusTag.PLUS:
            return AnnulusSpec(tag, hp, 2.0, hp)
        raise IncompatibleTag("X29 has annuli U- and U+ only")
    if tag is not AnnulusTag.SINGLE:
        raise IncompatibleTag("X210 has a single annulus")
    hc = center_levels(params)
    return AnnulusSpec(tag, hc, 2.0, hc)


def annuli(params: SystemParams) -> list[AnnulusSpec]:
    return [annulus(params, t) for t in params.annulus_tags()]


def locate(params: SystemParams, h: float) -> AnnulusSpec:
    """The annulus whose open interval holds ``h`` (with the endpoint gap)."""
    for ann in annuli(params):
        if ann.contains(h):
            return ann
    raise OutsideAnnulus(f"h={h} is not inside a period annulus of {params}")


def orientation_sign(ann: AnnulusSpec) -> float:
    """Orientation of Gamma_h inside M(h): clockwise (-1) on U-, else +1.

    The oval is positively oriented around C+ and the X210 center and
    negatively around C-.
    """
    return -1.0 if ann.tag is AnnulusTag.MINUS else 1.0


def _quadratic(params: SystemParams, h: float):
    q2 = h * h / 4.0 - 1.0
    q1 = -(params.c * h / 2.0 + params.b)
    q0 = params.c ** 2 / 4.0 - 1.0
    return q2, q1, q0


def delta_roots(params: SystemParams, h: float, *, check: bool = True) -> DeltaRoots:
    if check:
        locate(params, h)
    q2, q1, q0 = _quadratic(params, h)
    disc = q1 * q1 - 4.0 * q2 * q0
    if disc <= 0.0:
        raise OutsideAnnulus(f"Delta has no real interval at h={h}")
    # larger-magnitude root first, the other one by Viete
    q = -0.5 * (q1 + math.copysign(math.sqrt(disc), q1))
    r1, r2 = q / q2, q0 / q
    x1, x2 = (r1, r2) if r1 < r2 else (r2, r1)
    return DeltaRoots(h, x1, x2, q2, q1, q0)


def viete(params: SystemParams, h: float) -> tuple[float, float]:
    """Closed-form sum and product of the Delta roots."""
    b, c = params.b, params.c
    if params.family is Family.X29:
        return -2.0 * (2.0 * b + c * h) / (4.0 - h * h), (4.0 - c * c) / (4.0 - h * h)
    return -2.0 * b / (2.0 - h), (4.0 - b * b) / (4.0 - h * h)


def first_integral(params: SystemParams, x, y):
    return (1.0 + params.b * x + params.c * y + x * x + y * y) / (x * y)


def center_point(params: SystemParams, tag) -> tuple[float, float]:
    """Coordinates of the center enclosed by the given annulus."""
    ann = annulus(params, tag)
    h = ann.center_level
    q2, q1, _ = _quadratic(params, h)
    x = -q1 / (2.0 * q2)
    return x, (h * x - params.c) / 2.0


@dataclass(frozen=True)
class Ellipse:
    """Trigonometric parametrisation of the oval Gamma_h.

    x(t) = xm - r cos t,  y(t) = (h x(t) - c)/2 - s sin t.  For t in [0, pi]
    the point runs along the lower branch from x1 to x2, then back along the
    upper branch: counter-clockwise, with sqrt(Delta(x)) = s |sin t|.
    """

    h: float
    c: float
    xm: float
    r: float
    s: float

    @classmethod
    def of(cls, params: SystemParams, h: float) -> "Ellipse":
        roots = delta_roots(params, h)
        r = 0.5 * (roots.x2 - roots.x1)
        return cls(h, params.c, 0.5 * (roots.x1 + roots.x2), r,
                   math.sqrt(1.0 - h * h / 4.0) * r)

    def points(self, t):
        x = self.xm - self.r * np.cos(t)
        y = 0.5 * (self.h * x - self.c) - self.s * np.sin(t)
        return x, y


def level_curve_sample(params: SystemParams, h: float, m: int) -> np.ndarray:
    """Closed polyline of ``2 m`` points on Gamma_h, counter-clockwise."""
    if m < 8:
        raise ValueError("need m >= 8 samples per branch")
    ell = Ellipse.of(params, h)
    t = np.linspace(0.0, 2.0 * np.pi, 2 * m, endpoint=False)
    x, y = ell.points(t)
    return np.column_stack([x, y])
