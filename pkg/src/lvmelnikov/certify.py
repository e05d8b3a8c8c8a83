"""Certification suites: closed forms against the oracle, ECT verdicts, zero
bounds, configuration realizability and first-order ODE agreement.

Each check returns a ``Check`` carrying the measured numbers, so a failed
run says by how much it failed.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import chebyshev, closed_forms as cf, quadrature as quad
from .closed_forms import melnikov_n3_coeffs, melnikov_n3_eval
from .coeffs import PerturbationCoeffs, monomials
from .designer import (
    Configuration,
    all_configurations,
    realize_configuration,
    realize_zero_count,
)
from .errors import TargetImpossible
from .geometry import AnnulusTag, Family, SystemParams, annuli, annulus
from .zeros import RESIDUAL_TOL, count_zeros_n3, sign_changes_from_values

X29_SETS = ((0.0, 1.0), (0.5, 1.5), (1.2, 1.8), (1.5, 1.9))
X210_SETS = (0.5, 1.0, 1.5, 1.8)


def default_params() -> list[SystemParams]:
    return ([SystemParams.x29(b, c) for b, c in X29_SETS]
            + [SystemParams.x210(b) for b in X210_SETS])


@dataclass
class Check:
    name: str
    passed: bool
    measured: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}"


def _interior(ann, n: int, margin: float = 0.02) -> np.ndarray:
    return ann.grid(n, margin)


# ------------------------------------------------------------ closed forms


def _scale_of(params, h, kind: str, k: int) -> float:
    """L1 size of the integrand, the denominator of the relative error."""
    b, c = params.b, params.c
    if kind == "J":
        g = lambda x: np.abs(x) ** (k - 2.0)
    elif kind == "S":
        g = lambda x: 2.0 * np.abs(x) ** (k - 2.0) / (x * x + b * x + 1.0)
    else:
        g = lambda x: 2.0 * np.abs(x ** (k - 2.0) * (h * x - c)) / (x * x + b * x + 1.0) ** 2
    return quad.weighted_integral(params, h, g)


def closed_form_errors(params: SystemParams, points: int = 20) -> dict:
    """Largest relative error per integral family over the annuli."""
    worst = {"J01": 0.0, "Jk": 0.0, "S": 0.0, "R": 0.0}
    for ann in annuli(params):
        for h in _interior(ann, points):
            pairs = []
            j0, j1 = cf.cf_J01(params, h, ann)
            pairs += [("J01", "J", 0, j0), ("J01", "J", 1, j1)]
            pairs += [("Jk", "J", k, cf.cf_Jk(params, h, k)) for k in range(2, 7)]
            pairs += [("S", "S", i, cf.cf_S(params, h, i, ann)) for i in range(4)]
            pairs += [("R", "R", i, cf.cf_R(params, h, i, ann)) for i in range(4)]
            for label, kind, k, value in pairs:
                oracle = {"J": quad.oracle_J, "S": quad.oracle_S, "R": quad.oracle_R}[kind](params, h, k)
                denom = max(abs(oracle), _scale_of(params, h, kind, k))
                worst[label] = max(worst[label], abs(value - oracle) / denom)
    return worst


def check_closed_forms(params_list=None, points: int = 20, tol: float = 1e-8) -> Check:
    params_list = params_list or default_params()
    measured = {}
    ok = True
    for p in params_list:
        errs = closed_form_errors(p, points)
        measured[_label(p)] = errs
        ok &= all(v <= tol for v in errs.values())
    return Check("closed forms J0/J1, J2..J6, S0..S3, R0..R3 vs oracle (rel 1e-8)", ok, measured)


def _label(p: SystemParams) -> str:
    return f"{p.family.value}(b={p.b},c={p.c})"


def reduction_errors(params: SystemParams, draws: int, points: int,
                     rng: np.random.Generator) -> float:
    hs_by_ann = {ann.tag: _interior(ann, points, 0.05) for ann in annuli(params)}
    worst = 0.0
    mons = monomials(3)
    for ann in annuli(params):
        hs = hs_by_ann[ann.tag]
        mat = quad.design_matrix(params, hs, 3)
        for _ in range(draws):
            co = PerturbationCoeffs.random(3, rng)
            vec = np.array([co.get_a(*m) for m in mons] + [co.get_b(*m) for m in mons])
            oracle = mat @ vec
            closed = melnikov_n3_eval(melnikov_n3_coeffs(params, co, ann), hs)
            worst = max(worst, float(np.max(np.abs(closed - oracle) / np.maximum(1.0, np.abs(oracle)))))
    return worst


def one_hot_errors(params: SystemParams, points: int = 10) -> float:
    worst = 0.0
    for ann in annuli(params):
        hs = _interior(ann, points, 0.05)
        for which in "ab":
            for i, j in monomials(3):
                co = PerturbationCoeffs.one_hot(3, which, i, j)
                q = melnikov_n3_coeffs(params, co, ann)
                closed = melnikov_n3_eval(q, hs)
                oracle = np.array([quad.oracle_melnikov(params, co, h) for h in hs])
                worst = max(worst, float(np.max(np.abs(closed - oracle) / np.maximum(1.0, np.abs(oracle)))))
    return worst


def check_reduction(params_list=None, draws: int = 50, points: int = 10,
                    tol: float = 1e-8, seed: int = 0) -> Check:
    params_list = params_list or default_params()
    rng = np.random.default_rng(seed)
    measured = {}
    ok = True
    for p in params_list:
        r = reduction_errors(p, draws, points, rng)
        o = one_hot_errors(p, points)
        measured[_label(p)] = {"random": r, "one_hot": o}
        ok &= r <= tol and o <= tol
    return Check("cubic reduced form vs oracle M: 50 random sets + 20 one-hot (rel 1e-8)", ok, measured)


def check_symmetry(params_list=None, points: int = 10) -> Check:
    params_list = params_list or default_params()
    swap = 0.0
    annih = 0.0
    for p in params_list:
        for ann in annuli(p):
            for h in _interior(ann, points, 0.05):
                for i in range(5):
                    annih = max(annih, abs(quad.oracle_I(p, h, i, 2)))
                if p.family is Family.X29:
                    mirrored = p.swapped()
                    for i, j in monomials(3):
                        lhs = quad.oracle_dy_moment(p, h, i, j)
                        rhs = quad.curve_moment(mirrored, h, j, i)
                        swap = max(swap, abs(lhs + rhs))
    ok = swap <= 1e-9 and annih <= 1e-10
    return Check("swap identity (<=1e-9) and j=2 annihilation (<=1e-10)", ok,
                 {"swap_residual": swap, "annihilation": annih})


# --------------------------------------------------------------------- ECT


def expected_verdict(params: SystemParams, tag: AnnulusTag) -> str:
    if tag is AnnulusTag.MINUS:
        return "FullECT"
    if params.family is Family.X29:
        return "PartialECT" if params.b ** 2 + params.c ** 2 > 4.0 else "FullECT"
    return "PartialECT" if params.b > math.sqrt(2.0) else "FullECT"


def check_ect(params_list=None, points: int = 200) -> Check:
    params_list = params_list or default_params()
    table = {}
    ok = True
    fd_worst = 0.0
    omega2 = 0.0
    for p in params_list:
        for ann in annuli(p):
            v = chebyshev.ect_verdict(p, ann)
            want = expected_verdict(p, ann.tag)
            table[f"{_label(p)} {ann.tag.value}"] = v.to_json()
            ok &= v.verdict == want
            if v.d_bracket is not None:
                lo, hi = v.d_bracket
                exact = chebyshev.splitting_level(ann.center_level)
                ok &= ann.lo < lo < hi < ann.hi and hi - lo <= 1e-12
                ok &= exact is not None and lo - 1e-12 <= exact <= hi + 1e-12
            # finite-difference Wronskians away from the center level, where
            # the closed forms vanish and relative error has no meaning
            span = ann.hi - ann.lo
            for h in np.linspace(ann.lo + 0.1 * span, ann.hi - 0.1 * span, 12):
                for i in (2, 3, 4):
                    if i == 3 and v.d_bracket is not None and abs(h - v.d_bracket[0]) < 0.05 * span:
                        continue
                    fd_worst = max(fd_worst, chebyshev.omega_vs_wronskian(p, ann, i, h))
            for h in _interior(ann, points, 1e-3):
                w1 = chebyshev.omega(p, ann, 1, h)
                w2 = chebyshev.omega(p, ann, 2, h)
                omega2 = max(omega2, abs(w2 - w1 * w1) / max(w2, np.finfo(float).tiny))
    ok &= fd_worst <= 1e-4 and omega2 <= 4 * np.finfo(float).eps
    return Check("ECT verdicts match the case split; Wronskians vs finite differences (1e-4)",
                 ok, {"verdicts": table, "fd_relative": fd_worst, "omega2_minus_omega1_sq": omega2})


# ------------------------------------------------------------ zero bounds


def _max_residual(q) -> float:
    rep = count_zeros_n3(q)
    res = 0.0
    a = q.as_tuple()
    for h in rep.locations():
        r = math.sqrt(4.0 - h * h)
        scale = abs(a[0]) + abs(a[1] * h) + abs(a[2] * h * h) + abs(a[3] * r) + abs(a[4] * h * r)
        res = max(res, abs(float(melnikov_n3_eval(q, h))) / scale)
    return res


def check_sharpness() -> Check:
    cases = [(SystemParams.x29(0.0, 1.0), AnnulusTag.MINUS),
             (SystemParams.x29(0.0, 1.0), AnnulusTag.PLUS),
             (SystemParams.x210(1.0), AnnulusTag.SINGLE)]
    measured = {}
    ok = True
    for p, tag in cases:
        q = realize_zero_count(p, tag, 3)
        rep = count_zeros_n3(q)
        res = _max_residual(q)
        hs = annulus(p, tag).grid(10_000, 1e-6)
        grid_count = sign_changes_from_values(hs, melnikov_n3_eval(q, hs)).count
        measured[f"{_label(p)} {tag.value}"] = {"simple": rep.simple, "residual": res,
                                                "grid_sign_changes": grid_count,
                                                "zeros": rep.locations()}
        ok &= rep.simple == 3 and rep.count == 3 and res <= RESIDUAL_TOL and grid_count == 3
    return Check("three simple zeros realized on U-, U+ (b=0,c=1) and X210 b=1", ok, measured)


def random_quintuple_counts(params_list, draws: int, rng) -> dict:
    from .closed_forms import MelnikovN3

    worst = {}
    for p in params_list:
        for ann in annuli(p):
            top = 0
            for _ in range(draws):
                top = max(top, count_zeros_n3(MelnikovN3(ann, *rng.standard_normal(4))).count)
            worst[f"{_label(p)} {ann.tag.value}"] = top
    return worst


def shared_tail_counts(params: SystemParams, draws: int, rng) -> dict:
    from .closed_forms import MelnikovN3

    up, um = annulus(params, AnnulusTag.PLUS), annulus(params, AnnulusTag.MINUS)
    seen = set()
    max_total = 0
    for _ in range(draws):
        a2p, a3p, a2m, a3m, a4, a5 = rng.standard_normal(6)
        u = count_zeros_n3(MelnikovN3(up, a2p, a3p, a4, a5)).count
        v = count_zeros_n3(MelnikovN3(um, a2m, a3m, -a4, -a5)).count
        seen.add((u, v))
        max_total = max(max_total, u + v)
    return {"max_total": max_total, "saw_3_3": (3, 3) in seen,
            "configurations_seen": sorted(list(c) for c in seen)}


def check_bounds(draws: int = 10_000, seed: int = 0) -> Check:
    rng = np.random.default_rng(seed)
    per = random_quintuple_counts(default_params(), draws, rng)
    shared = {_label(p): shared_tail_counts(p, draws, rng)
              for p in default_params() if p.family is Family.X29}
    ok = max(per.values()) <= 3
    ok &= all(s["max_total"] <= 5 and not s["saw_3_3"] for s in shared.values())
    return Check("random reduced forms: <= 3 zeros per annulus, shared tails total <= 5",
                 ok, {"per_annulus_max": per, "shared": shared})


def general_bound(params: SystemParams, n: int) -> int:
    if params.family is Family.X29:
        return 2 * n - 3
    return (3 * n - 3) // 2


def check_general_n(degrees=(4, 5), draws: int = 1000, grid: int = 200, seed: int = 0) -> Check:
    rng = np.random.default_rng(seed)
    measured = {}
    ok = True
    for n in degrees:
        width = 2 * len(monomials(n))
        for p in default_params():
            for ann in annuli(p):
                hs = _interior(ann, grid)
                mat = quad.design_matrix(p, hs, n)
                vals = mat @ rng.standard_normal((width, draws))
                top = max(sign_changes_from_values(hs, vals[:, k]).count for k in range(draws))
                bound = general_bound(p, n)
                measured[f"n={n} {_label(p)} {ann.tag.value}"] = {"max": top, "bound": bound}
                ok &= top <= bound
    return Check("general n=4,5 sampled sign changes within 2n-3 / [(3n-3)/2]", ok, measured)


# --------------------------------------------------------- configurations


def check_configurations(params: SystemParams | None = None) -> Check:
    params = params or SystemParams.x29(0.0, 1.0)
    measured = {}
    ok = True
    for cfg in all_configurations():
        r = realize_configuration(params, cfg)
        measured[f"({cfg.u},{cfg.v})"] = list(r.counts)
        ok &= r.counts == (cfg.u, cfg.v)
    try:
        realize_configuration(params, Configuration(3, 3))
        ok = False
        measured["(3,3)"] = "realized"
    except TargetImpossible as exc:
        cert = exc.certificate
        measured["(3,3)"] = cert
        ok &= cert["disjoint"] and cert["sweep"]["both"] == 0
    return Check(f"all (u,v) with u,v<=3, u+v<=5 certified for {_label(params)}; (3,3) excluded",
                 ok, measured)


# --------------------------------------------------------------------- ODE


ODE_PARAMS = SystemParams.x29(0.0, 1.9)


def ode_agreement(params: SystemParams, cfg: Configuration, eps_values=(1e-4, 1e-5),
                  points: int = 5) -> dict:
    from .ode import PerturbedField, detect_cycles, richardson

    r = realize_configuration(params, cfg)
    out = {"worst_rel": 0.0, "brackets": {}, "predicted": {}, "min_separation": 1.0}
    for ann in annuli(params):
        q = melnikov_n3_coeffs(params, r.coeffs, ann)
        zeros = r.zeros[ann.tag.value].locations()
        if zeros:
            gaps = np.diff([ann.lo, *zeros, ann.hi]) / ann.length
            out["min_separation"] = min(out["min_separation"], float(gaps.min()))
        scan = ann.grid(401, 0.02)
        big = 0.1 * float(np.max(np.abs(melnikov_n3_eval(q, scan))))
        # interior points where M is not near a zero, so relative error is meaningful
        cand = [h for h in ann.grid(41, 0.05) if abs(float(melnikov_n3_eval(q, h))) >= big]
        picks = [cand[int(k)] for k in np.linspace(0, len(cand) - 1, points)]
        for eps in eps_values:
            pf = PerturbedField(params, r.coeffs, eps)
            for h in picks:
                m = float(melnikov_n3_eval(q, h))
                out["worst_rel"] = max(out["worst_rel"], abs(richardson(pf, h, ann) - m) / abs(m))
            out["brackets"][f"{ann.tag.value} eps={eps}"] = detect_cycles(pf, ann, 81).count
        out["predicted"][ann.tag.value] = len(zeros)
    return out


def check_ode(params: SystemParams = ODE_PARAMS) -> Check:
    measured = {}
    ok = True
    for cfg in (Configuration(1, 0), Configuration(3, 2)):
        res = ode_agreement(params, cfg)
        measured[f"({cfg.u},{cfg.v})"] = res
        ok &= res["worst_rel"] <= 5e-3 and res["min_separation"] >= 0.05
        for key, count in res["brackets"].items():
            ok &= count == res["predicted"][key.split()[0]]
    return Check(f"Richardson displacement/eps vs M (0.5%) and bracket counts, {_label(params)}",
                 ok, measured)


SUITES = {
    "closed-forms": lambda seed: [check_closed_forms(), check_reduction(seed=seed), check_symmetry()],
    "ect": lambda seed: [check_ect()],
    "bounds": lambda seed: [check_bounds(seed=seed), check_general_n(seed=seed)],
    "configs": lambda seed: [check_sharpness(), check_configurations()],
    "ode": lambda seed: [check_ode()],
}


def run_suite(name: str, seed: int = 0) -> list[Check]:
    return SUITES[name](seed)


def as_json(checks) -> list[dict]:
    return [asdict(c) for c in checks]
