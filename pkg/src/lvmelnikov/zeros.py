"""Zero isolation for the cubic reduced form and sign-change counting."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .closed_forms import MelnikovN3, melnikov_n3_eval
from .errors import DegenerateAllZero
from .geometry import ENDPOINT_GAP, AnnulusSpec

RESIDUAL_TOL = 1e-10
# quartic roots with a larger imaginary part are discarded outright
_IMAG_NEAR = 1e-6
_IMAG_REAL = 1e-9
_MERGE = 1e-6


class ZeroKind(str, Enum):
    SIMPLE = "Simple"
    EVEN_TOUCH = "EvenTouch"
    UNCERTAIN = "Uncertain"


@dataclass(frozen=True)
class Zero:
    h: float
    kind: ZeroKind


@dataclass
class ZeroReport:
    annulus: AnnulusSpec
    zeros: list = field(default_factory=list)
    degenerate: bool = False

    @property
    def count(self) -> int:
        return sum(1 for z in self.zeros if z.kind is not ZeroKind.UNCERTAIN)

    @property
    def simple(self) -> int:
        return sum(1 for z in self.zeros if z.kind is ZeroKind.SIMPLE)

    def locations(self) -> list[float]:
        return [z.h for z in self.zeros if z.kind is not ZeroKind.UNCERTAIN]


def _terms(q: MelnikovN3, h: float):
    a1, a2, a3, a4, a5 = q.as_tuple()
    r = math.sqrt(max(4.0 - h * h, 0.0))
    poly = a1 + a2 * h + a3 * h * h
    rad = (a4 + a5 * h) * r
    scale = abs(a1) + abs(a2 * h) + abs(a3 * h * h) + abs(a4 * r) + abs(a5 * h * r)
    return poly, rad, scale


def _derivative(q: MelnikovN3, h: float) -> float:
    _, a2, a3, a4, a5 = q.as_tuple()
    r = math.sqrt(4.0 - h * h)
    return a2 + 2.0 * a3 * h + a5 * r - (a4 + a5 * h) * h / r


def _polish(q: MelnikovN3, h: float, lo: float, hi: float) -> float:
    """A few guarded Newton steps on M itself."""
    best, best_res = h, abs(float(melnikov_n3_eval(q, h)))
    x = h
    for _ in range(6):
        d = _derivative(q, x)
        if d == 0.0:
            break
        x = x - float(melnikov_n3_eval(q, x)) / d
        if not lo < x < hi:
            break
        res = abs(float(melnikov_n3_eval(q, x)))
        if res < best_res:
            best, best_res = x, res
        else:
            break
    return best


def quartic(q: MelnikovN3) -> np.ndarray:
    """Coefficients (highest first) of (a1+a2h+a3h^2)^2 - (a4+a5h)^2 (4-h^2)."""
    a1, a2, a3, a4, a5 = q.as_tuple()
    return np.array([
        a3 * a3 + a5 * a5,
        2.0 * (a2 * a3 + a4 * a5),
        a2 * a2 + 2.0 * a1 * a3 + a4 * a4 - 4.0 * a5 * a5,
        2.0 * a1 * a2 - 8.0 * a4 * a5,
        a1 * a1 - 4.0 * a4 * a4,
    ])


def _candidate_roots(q: MelnikovN3) -> np.ndarray:
    """Roots of the squared equation, with the center level divided out.

    Without a radical part the quartic is the square of a1+a2h+a3h^2 and
    that quadratic is solved instead, so its roots are not split in two.
    """
    a1, a2, a3, a4, a5 = q.as_tuple()
    if a4 == 0.0 and a5 == 0.0:
        coef = [a3, a2, a1]
    else:
        # synthetic division by (h - hc); the remainder is M(hc)-sized noise
        hc = q.center_level
        coef = []
        acc = 0.0
        for c in quartic(q)[:4]:
            acc = acc * hc + c
            coef.append(acc)
    while coef and coef[0] == 0.0:
        coef = coef[1:]
    if len(coef) < 2:
        return np.array([])
    return np.roots(coef)


def count_zeros_n3(q: MelnikovN3, tol: float = RESIDUAL_TOL) -> ZeroReport:
    """Interior zeros of M on the open annulus of ``q``.

    Squaring removes the radical; the quartic's extra roots sit on the other
    branch, a1+a2h+a3h^2 = +(a4+a5h) sqrt(4-h^2), and are dropped.  The
    center level is always a root and is excluded with the endpoints.
    """
    ann = q.annulus
    if all(v == 0.0 for v in q.as_tuple()):
        raise DegenerateAllZero("all Melnikov coefficients vanish; M is identically zero")
    lo, hi = ann.lo + ENDPOINT_GAP, ann.hi - ENDPOINT_GAP
    roots = _candidate_roots(q)

    found: list[tuple[float, bool]] = []  # (h, came from a clean real root)
    for z in roots:
        re, im = float(z.real), abs(float(z.imag))
        if im > _IMAG_NEAR * (1.0 + abs(re)) or not lo < re < hi:
            continue
        found.append((re, im <= _IMAG_REAL * (1.0 + abs(re))))
    found.sort()

    # merge clusters: a double root of M shows up twice (or as a close pair)
    clusters: list[list[tuple[float, bool]]] = []
    for item in found:
        if clusters and item[0] - clusters[-1][-1][0] <= _MERGE * (1.0 + abs(item[0])):
            clusters[-1].append(item)
        else:
            clusters.append([item])

    zeros: list[Zero] = []
    for cl in clusters:
        h = sum(x for x, _ in cl) / len(cl)
        clean = all(flag for _, flag in cl)
        # classify on the raw root: Newton on M would drag a wrong-branch
        # root onto a genuine zero nearby
        poly, rad, scale = _terms(q, h)
        resid = abs(poly + rad)
        if resid > tol * scale:
            # wrong sign branch, unless the two branches are indistinguishable
            if abs(poly - rad) <= tol * scale or resid > 1e3 * tol * scale:
                continue
            zeros.append(Zero(h, ZeroKind.UNCERTAIN))
            continue
        if len(cl) == 1 and clean:
            zeros.append(Zero(_polish(q, h, lo, hi), ZeroKind.SIMPLE))
        elif len(cl) == 1:
            zeros.append(Zero(h, ZeroKind.UNCERTAIN))
        else:
            zeros.append(Zero(h, _touch_kind(q, h, lo, hi)))
    return ZeroReport(ann, zeros)


def _touch_kind(q: MelnikovN3, h: float, lo: float, hi: float) -> ZeroKind:
    step = 1e-4 * (hi - lo)
    left = float(melnikov_n3_eval(q, max(lo, h - step)))
    right = float(melnikov_n3_eval(q, min(hi, h + step)))
    if left * right < 0.0:
        # odd multiplicity (three merged roots); sign still flips
        return ZeroKind.SIMPLE
    return ZeroKind.EVEN_TOUCH


@dataclass(frozen=True)
class SignChanges:
    count: int
    brackets: tuple = ()


def _refine(evaluator, lo, hi):
    try:
        root = brentq(evaluator, lo, hi, xtol=1e-13, rtol=4 * np.finfo(float).eps)
    except ValueError:
        return (lo, hi)
    width = max(1e-12, 1e-12 * abs(root))
    return (max(lo, root - width), min(hi, root + width))


def sign_changes_from_values(hs, values, evaluator=None) -> SignChanges:
    """Count strict sign alternations of sampled values (exact zeros skipped).

    With an evaluator each alternation is narrowed by Brent's method.
    """
    hs = np.asarray(hs, dtype=float)
    vals = np.asarray(values, dtype=float)
    keep = np.flatnonzero(vals != 0.0)
    pos = vals[keep] > 0.0
    flips = np.flatnonzero(pos[:-1] != pos[1:])
    brackets = []
    for f in flips:
        lo, hi = float(hs[keep[f]]), float(hs[keep[f + 1]])
        brackets.append(_refine(evaluator, lo, hi) if evaluator is not None else (lo, hi))
    return SignChanges(len(brackets), tuple(brackets))


def count_sign_changes(evaluator, interval, grid_size: int = 1000,
                       refine: bool = True) -> SignChanges:
    """Lower bound on the number of zeros of ``evaluator`` on ``interval``."""
    lo, hi = interval
    hs = np.linspace(lo, hi, grid_size)
    vals = [float(evaluator(h)) for h in hs]
    return sign_changes_from_values(hs, vals, evaluator if refine else None)
