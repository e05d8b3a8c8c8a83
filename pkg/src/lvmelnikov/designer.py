"""Constructive zero counts and simultaneous configurations for cubic perturbations.

All constructions work on the reduced coefficients (a2, a3, a4, a5) of each
annulus and are certified afterwards by ``count_zeros_n3``; nothing here is
trusted without that final count.

For X29 the two annuli share their radical part up to sign: every cubic
perturbation gives a4- = -a4+ and a5- = -a5+, so M+''' and M-''' vanish at
the same h0 = -4 a5 / a4.  Three interior zeros on one annulus (four with the
center level) force h0 into that annulus, which is why (3, 3) cannot occur.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chebyshev import ect_verdict
from .closed_forms import MelnikovN3, melnikov_n3_coeffs, basis
from .coeffs import PerturbationCoeffs
from .errors import InvalidParams, TargetImpossible, Unachievable
from .geometry import AnnulusSpec, AnnulusTag, Family, SystemParams, annuli, annulus
from .zeros import count_zeros_n3

TARGET_QUANTILES = {1: (0.5,), 2: (1 / 3, 2 / 3), 3: (0.25, 0.5, 0.75)}

# the six perturbation coefficients used to reach (a2+, a3+, a4+, a5+, a2-, a3-)
FREE_COEFFS = (("a", 1, 1), ("b", 1, 1), ("b", 0, 0), ("a", 0, 1), ("b", 2, 1), ("b", 3, 0))


@dataclass(frozen=True)
class SExpansion:
    annulus: AnnulusSpec
    s1: float
    s2: float
    s3: float
    s4: float

    def as_tuple(self):
        return (self.s1, self.s2, self.s3, self.s4)

    def truncated(self, h):
        u = np.asarray(h) - self.annulus.center_level
        return ((self.s4 * u + self.s3) * u + self.s2) * u * u + self.s1 * u


def s_expansion(q: MelnikovN3) -> SExpansion:
    """Taylor coefficients of M at the center level, from q's own (a2..a5)."""
    hc = q.center_level
    a2, a3, a4, a5 = q.a2, q.a3, q.a4, q.a5
    w = 4.0 - hc * hc
    rw = math.sqrt(w)
    s1 = a2 + 2.0 * a3 * hc - (a4 * hc + 2.0 * a5 * (hc * hc - 2.0)) / rw
    s2 = a3 - (2.0 * a4 - a5 * hc * (hc * hc - 6.0)) / w ** 1.5
    s3 = -2.0 * (a4 * hc + 4.0 * a5) / w ** 2.5
    s4 = -2.0 * (a4 + 5.0 * a5 * hc + a4 * hc * hc) / w ** 3.5
    return SExpansion(q.annulus, s1, s2, s3, s4)


class _AtInfinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "AtInfinity"


AtInfinity = _AtInfinity()


def shared_inflection(a4: float, a5: float):
    """Zero of M''' common to both annuli, or ``AtInfinity`` when a4 = 0."""
    if a4 == 0.0:
        return AtInfinity
    return -4.0 * a5 / a4


def third_derivative(q: MelnikovN3, h):
    h = np.asarray(h, dtype=float)
    return -12.0 * (q.a4 * h + 4.0 * q.a5) / (4.0 - h * h) ** 2.5


# ---------------------------------------------------------------- one annulus


def _interval(params: SystemParams, ann: AnnulusSpec) -> tuple[float, float]:
    """Interval on which the tuple is certified ECT."""
    lo, hi = ect_verdict(params, ann).ect_interval
    return lo, hi


def _targets(lo: float, hi: float, k: int) -> list[float]:
    return [lo + t * (hi - lo) for t in TARGET_QUANTILES[k]]


def _null_combination(hc: float, targets, funcs: int) -> np.ndarray:
    """Coefficients on (f0..f_{funcs-1}) vanishing at the targets."""
    mat = np.array([[basis(hc, t)[i] for i in range(funcs)] for t in targets])
    _, _, vt = np.linalg.svd(mat)
    vec = vt[-1]
    return vec / np.max(np.abs(vec))


def _null_space(hc: float, targets) -> np.ndarray:
    """Orthonormal rows spanning the (a2..a5) vanishing at every target."""
    mat = np.array([basis(hc, t) for t in targets])
    _, _, vt = np.linalg.svd(mat)
    return vt[len(targets):]


def realize_zero_count(params: SystemParams, ann, k: int, tries: int = 64) -> MelnikovN3:
    """Reduced coefficients with exactly k simple interior zeros.

    k distinct targets are placed inside the interval where the tuple is
    ECT.  The unique combination of f0..fk vanishing there is tried first;
    ECT rules out further zeros on that interval, but past a splitting
    level a stray zero can appear, in which case other directions of the
    null space through the same targets are tried.  Every candidate is
    certified on the whole annulus.
    """
    if not isinstance(ann, AnnulusSpec):
        ann = annulus(params, ann)
    if k not in (0, 1, 2, 3):
        raise Unachievable(f"at most 3 interior zeros are possible, asked for {k}")
    if k == 0:
        return MelnikovN3(ann, 1.0, 0.0, 0.0, 0.0)
    hc = ann.center_level
    lo, hi = _interval(params, ann)
    rng = np.random.default_rng(k)
    for shrink in (1.0, 0.5, 0.25):
        targets = _targets(lo, lo + shrink * (hi - lo), k)
        prefix = np.zeros(4)
        prefix[: k + 1] = _null_combination(hc, targets, k + 1)
        candidates = [prefix]
        if k < 3:
            null = _null_space(hc, targets)
            candidates += [rng.standard_normal(len(null)) @ null for _ in range(tries)]
        for vec in candidates:
            cand = MelnikovN3(ann, *(vec / np.max(np.abs(vec))))
            rep = count_zeros_n3(cand)
            if rep.count == k and rep.simple == k:
                return cand
    raise Unachievable(f"no certified {k}-zero combination on {ann.tag.value}")


# ---------------------------------------------------------- configurations


@dataclass(frozen=True)
class Configuration:
    u: int  # zeros on U+
    v: int  # zeros on U-

    def __post_init__(self):
        if self.u < 0 or self.v < 0:
            raise ValueError("zero counts are non-negative")


@dataclass
class Realization:
    params: SystemParams
    target: Configuration
    coeffs: PerturbationCoeffs
    reduced: dict  # tag -> MelnikovN3 recomputed from coeffs
    zeros: dict  # tag -> ZeroReport
    recipe: str

    @property
    def counts(self) -> tuple[int, int]:
        return (self.zeros["U+"].count, self.zeros["U-"].count)

    def report(self) -> dict:
        return {
            "target": [self.target.u, self.target.v],
            "certified": list(self.counts),
            "recipe": self.recipe,
            "zeros": {tag: [[z.h, z.kind.value] for z in rep.zeros]
                      for tag, rep in self.zeros.items()},
            "reduced": {tag: list(q.as_tuple()) for tag, q in self.reduced.items()},
        }


def impossibility_certificate(params: SystemParams, samples: int = 3600) -> dict:
    """Evidence that no shared tail puts h0 in both annuli.

    Three interior zeros on an annulus make four zeros of M on its closure,
    so M''' (a multiple of a4 h + 4 a5) must vanish inside it.  The annuli
    are disjoint, hence h0 lies in at most one of them.  The sweep over tail
    directions records where h0 lands.
    """
    um, up = annulus(params, AnnulusTag.MINUS), annulus(params, AnnulusTag.PLUS)
    disjoint = um.hi <= up.lo
    hits = {"U-": 0, "U+": 0, "neither": 0, "both": 0}
    for th in np.linspace(0.0, math.pi, samples, endpoint=False):
        h0 = shared_inflection(math.cos(th), math.sin(th))
        in_m = h0 is not AtInfinity and um.lo < h0 < um.hi
        in_p = h0 is not AtInfinity and up.lo < h0 < up.hi
        key = "both" if in_m and in_p else "U-" if in_m else "U+" if in_p else "neither"
        hits[key] += 1
    return {
        "U-": [um.lo, um.hi],
        "U+": [up.lo, up.hi],
        "disjoint": bool(disjoint),
        "h0": "-4*a5/a4 (shared by both annuli)",
        "sweep": hits,
        "conclusion": "h0 lies in at most one annulus; 3 zeros need h0 inside, so (3,3) is impossible",
    }


def _jacobian(params: SystemParams) -> np.ndarray:
    """Columns: reduced (a2+, a3+, a4+, a5+, a2-, a3-) of each free coefficient."""
    cols = []
    for which, i, j in FREE_COEFFS:
        co = PerturbationCoeffs.one_hot(3, which, i, j)
        qp = melnikov_n3_coeffs(params, co, AnnulusTag.PLUS)
        qm = melnikov_n3_coeffs(params, co, AnnulusTag.MINUS)
        cols.append([qp.a2, qp.a3, qp.a4, qp.a5, qm.a2, qm.a3])
    return np.array(cols).T


def invert_reduced(params: SystemParams, target) -> PerturbationCoeffs:
    """Perturbation with the six free coefficients solving for the target
    (a2+, a3+, a4+, a5+, a2-, a3-); every other coefficient is zero."""
    sol = np.linalg.solve(_jacobian(params), np.asarray(target, dtype=float))
    a, b = {}, {}
    for (which, i, j), v in zip(FREE_COEFFS, sol):
        (a if which == "a" else b)[(i, j)] = float(v)
    return PerturbationCoeffs(3, a=a, b=b)


def _fit_side(ann: AnnulusSpec, tail: tuple[float, float], count: int,
              lo: float, hi: float, boost: float):
    """(a2, a3) on one annulus with the radical part fixed by ``tail``."""
    a4, a5 = tail
    hc = ann.center_level
    if count == 2:
        ts = _targets(lo, hi, 2)
        mat = np.array([[basis(hc, t)[0], basis(hc, t)[1]] for t in ts])
        rhs = -np.array([a4 * basis(hc, t)[2] + a5 * basis(hc, t)[3] for t in ts])
        return tuple(np.linalg.solve(mat, rhs))
    # size of the radical part relative to f0, which the polynomial part must dominate
    hs = ann.grid(400, margin=1e-3)
    tail_vals = a4 * np.array([basis(hc, h)[2] for h in hs]) + a5 * np.array([basis(hc, h)[3] for h in hs])
    ratio = np.max(np.abs(tail_vals / (hs - hc))) if (a4 or a5) else 0.0
    lam = boost * (1.0 + ratio) / max(ann.length, 1e-3)
    if count == 0:
        return (lam, 0.0)
    t = _targets(lo, hi, 1)[0]
    lam /= max(ann.length, 1e-3)
    # (h - hc)(h - t) up to the factor lam
    return (-lam * (t + hc), lam)


def _tails_for_pairs(params):
    """Tails tried for the two-zero sides: a4-only first (the (f0, f1, f2) prefix)."""
    return [(1.0, 0.0), (1.0, 0.25), (1.0, -0.25), (0.0, 1.0)]


def realize_configuration(params: SystemParams, target: Configuration,
                          max_boost: int = 6) -> Realization:
    """Full cubic perturbation with u zeros of M+ and v zeros of M-.

    Recipes, all certified on the recomputed reduced forms:
      * u, v <= 1: no radical part; the polynomial part (h - hc)(a2 + a3(h + hc))
        has at most one interior zero, placed or avoided directly.
      * max(u, v) = 2: radical part a4 only; each two-zero side is the unique
        (f0, f1, f2) combination through two targets, the others are dominated
        by a large polynomial part.
      * one side with 3: the unique (f0..f3) combination through three targets
        fixes the shared radical part; the other side is fitted with it.
    """
    if params.family is not Family.X29:
        raise InvalidParams("configurations need the two-annulus family X29")
    u, v = target.u, target.v
    if u > 3 or v > 3 or u + v > 5:
        if (u, v) == (3, 3):
            raise TargetImpossible("configuration (3,3) is impossible",
                                   impossibility_certificate(params))
        raise TargetImpossible(f"configuration ({u},{v}) exceeds the bounds",
                               impossibility_certificate(params))
    ann_p, ann_m = annulus(params, AnnulusTag.PLUS), annulus(params, AnnulusTag.MINUS)
    ivals = {"U+": _interval(params, ann_p), "U-": _interval(params, ann_m)}
    anns = {"U+": ann_p, "U-": ann_m}
    need = {"U+": u, "U-": v}

    if max(u, v) == 3:
        lead = "U+" if u == 3 else "U-"
        recipe = f"three-target combination on {lead}, other side fitted to the shared radical part"
        tail_options = []
        for shrink in (1.0, 0.5, 0.25):
            lo, hi = ivals[lead]
            ts = _targets(lo, lo + shrink * (hi - lo), 3)
            vec = _null_combination(anns[lead].center_level, ts, 4)
            tail_options.append((vec, shrink))
    elif max(u, v) == 2:
        recipe = "radical part from two-target (f0, f1, f2) combinations"
        tail_options = [(None, t) for t in _tails_for_pairs(params)]
    else:
        recipe = "polynomial part only"
        tail_options = [(None, (0.0, 0.0))]

    last_error = None
    for option, extra in tail_options:
        for boost_exp in range(1, max_boost + 1):
            boost = 10.0 ** boost_exp
            red = {}
            if option is not None:
                lead_vec = option
                sign = 1.0 if lead == "U+" else -1.0
                tail_plus = (sign * lead_vec[2], sign * lead_vec[3])
                red[lead] = tuple(lead_vec)
            else:
                tail_plus = extra
            for tag in ("U+", "U-"):
                if tag in red:
                    continue
                sign = 1.0 if tag == "U+" else -1.0
                tail = (sign * tail_plus[0], sign * tail_plus[1])
                lo, hi = ivals[tag]
                a2, a3 = _fit_side(anns[tag], tail, need[tag], lo, hi, boost)
                red[tag] = (a2, a3, tail[0], tail[1])
            vec = [*red["U+"], red["U-"][0], red["U-"][1]]
            coeffs = invert_reduced(params, vec)
            reduced = {tag: melnikov_n3_coeffs(params, coeffs, anns[tag]) for tag in anns}
            reports = {tag: count_zeros_n3(q) for tag, q in reduced.items()}
            ok = all(reports[t].count == need[t] and reports[t].simple == need[t] for t in anns)
            if ok:
                return Realization(params, target, coeffs, reduced, reports, recipe)
            last_error = {t: reports[t].count for t in anns}
            needs_boost = any(need[t] <= 1 and reports[t].count != need[t] for t in anns)
            if not needs_boost:
                break
    raise Unachievable(f"could not certify ({u},{v}); last counts {last_error}")


def all_configurations() -> list[Configuration]:
    return [Configuration(u, v) for u in range(4) for v in range(4) if u + v <= 5]


def certified_counts(params: SystemParams, coeffs: PerturbationCoeffs) -> dict:
    return {ann.tag.value: count_zeros_n3(melnikov_n3_coeffs(params, coeffs, ann)).count
            for ann in annuli(params)}
