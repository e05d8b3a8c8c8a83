"""Compiled vs pure-Python kernels: oval ring sums and the return map.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from lvmelnikov import _kernels_py
from lvmelnikov.coeffs import PerturbationCoeffs
from lvmelnikov.geometry import Ellipse, SystemParams, annulus, center_point
from lvmelnikov.ode import start_point

try:
    from lvmelnikov import _kernels
except ImportError:
    _kernels = None


def cases():
    p = SystemParams.x29(0.0, 1.9)
    ann = annulus(p, "U+")
    h = 0.5 * (ann.lo + ann.hi)
    e = Ellipse.of(p, h)
    ring = (e.xm, e.r, e.s, e.h, e.c, 256, 0.5, 5, 1)
    co = PerturbationCoeffs.random(3, np.random.default_rng(0))
    fa, fb = co.dense()
    x0, y0 = start_point(p, h)
    cx, cy = center_point(p, "U+")
    ret = (x0, y0, cx, cy, p.b, p.c, 1e-4, fa, fb, 3, 1e-12, 1e-14, 1e-3, 2_000_000, ann.lo, ann.hi)
    return {"ring_sums (256 nodes, p<=5)": ("ring_sums", ring),
            "return_map (one revolution, rtol 1e-12)": ("return_map", ret)}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    impls = {"python": _kernels_py}
    if _kernels is not None:
        impls["cython"] = _kernels
    else:
        print("compiled extension not built; timing the Python kernels only")
    print(f"{'kernel':42s} {'impl':8s} {'best (ms)':>10s}")
    for label, (name, call_args) in cases().items():
        best = {}
        for impl_name, mod in impls.items():
            fn = getattr(mod, name)
            number = 1 if impl_name == "python" and name == "return_map" else 20
            t = min(timeit.repeat(lambda: fn(*call_args), number=number, repeat=args.repeat)) / number
            best[impl_name] = t
            print(f"{label:42s} {impl_name:8s} {1e3 * t:10.3f}")
        if len(best) == 2:
            print(f"{'':42s} {'speedup':8s} {best['python'] / best['cython']:9.1f}x")


if __name__ == "__main__":
    main()
