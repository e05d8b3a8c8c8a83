"""The eight acceptance criteria, each at its stated tolerance.

Every test prints one PASS/FAIL line (visible even under output capture)
together with the measured numbers behind the verdict.
"""

import json
import time

import numpy as np
import pytest

from lvmelnikov import certify
from lvmelnikov.geometry import SystemParams

B0C1 = SystemParams.x29(0.0, 1.0)


@pytest.fixture
def report(capsys):
    def emit(number, check, seconds, limit=None):
        timing = f"{seconds:.1f}s" + (f" (target < {limit:.0f}s)" if limit else "")
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if check.passed else 'FAIL'}  "
                  f"{check.name}  [{timing}]")
        return check
    return emit


def _timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


def _summary(check):
    return json.dumps(check.measured, default=str)[:2000]


def test_criterion_1_closed_forms(report):
    check, dt = _timed(certify.check_closed_forms, points=20, tol=1e-8)
    report(1, check, dt, 60)
    assert check.passed, _summary(check)
    assert dt < 60


def test_criterion_2_reduction(report):
    check, dt = _timed(certify.check_reduction, draws=50, points=10, tol=1e-8)
    report(2, check, dt)
    assert check.passed, _summary(check)


def test_criterion_3_symmetry(report):
    check, dt = _timed(certify.check_symmetry, points=10)
    report(3, check, dt)
    assert check.passed, _summary(check)


def test_criterion_4_ect(report):
    check, dt = _timed(certify.check_ect)
    report(4, check, dt)
    assert check.passed, _summary(check)


def test_criterion_5_sharpness(report):
    t0 = time.perf_counter()
    sharp = certify.check_sharpness()
    per = certify.random_quintuple_counts(certify.default_params(), 10_000,
                                          np.random.default_rng(5))
    passed = sharp.passed and max(per.values()) <= 3
    check = certify.Check("three simple zeros realized (U-, U+ at b=0,c=1; X210 b=1); "
                          "1e4 random quintuples never exceed 3 per annulus",
                          passed, {"sharpness": sharp.measured, "random_max": per})
    report(5, check, time.perf_counter() - t0)
    assert check.passed, _summary(check)


def test_criterion_6_simultaneity(report):
    t0 = time.perf_counter()
    configs = certify.check_configurations(B0C1)
    shared = certify.shared_tail_counts(B0C1, 10_000, np.random.default_rng(6))
    passed = configs.passed and shared["max_total"] <= 5 and not shared["saw_3_3"]
    check = certify.Check("every (u,v), u,v<=3, u+v<=5 certified at b=0,c=1; (3,3) certificate; "
                          "1e4 shared-tail draws total <= 5",
                          passed, {"configurations": configs.measured, "shared": shared})
    report(6, check, time.perf_counter() - t0)
    assert check.passed, _summary(check)


def test_criterion_7_general_n(report):
    check, dt = _timed(certify.check_general_n, degrees=(4, 5), draws=1000)
    report(7, check, dt)
    assert check.passed, _summary(check)


def test_criterion_8_ode(report):
    check, dt = _timed(certify.check_ode)
    report(8, check, dt, 300)
    assert check.passed, _summary(check)
    assert dt < 300
