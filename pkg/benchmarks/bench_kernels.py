"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each row is the best-of-repeat wall time per call for both backends and
the speedup of the compiled one. Rows call the raw backend modules, so
the pnorm_dist_to p=4/3 row shows why the dispatcher in
``lpcompact.kernels`` sends that case to numpy.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from lpcompact import kernels


def cases(rng):
    cplx = lambda *s: np.ascontiguousarray(rng.standard_normal(s) + 1j * rng.standard_normal(s))
    mod = np.abs(rng.standard_normal((1000, 100)))
    X, x = cplx(2000, 50), cplx(50)
    T8, v8, w8 = cplx(6, 8, 8), cplx(8), cplx(8)
    T2 = cplx(3, 2, 2)
    lo, hi = np.zeros(4), np.array([np.pi / 2, 2 * np.pi, np.pi / 2, 2 * np.pi])
    n = np.full(4, 24, dtype=np.intp)
    return [
        ("tail_powers 1000x100 p=3", "tail_powers", (mod, 3.0)),
        ("tail_powers 1000x100 p=4/3", "tail_powers", (mod, 4 / 3)),
        ("pnorm_dist_to 2000x50 p=3", "pnorm_dist_to", (X, x, 3.0, False)),
        ("pnorm_dist_to 2000x50 p=4/3", "pnorm_dist_to", (X, x, 4 / 3, False)),
        ("joint_obj_grad N=6 d=8 p=3", "joint_obj_grad", (T8, v8, 3.0)),
        ("pair_obj_grad N=6 d=8 p=3", "pair_obj_grad", (T8, v8, w8, 3.0)),
        ("grid_radius_d2 1000x1000 p=3", "grid_radius_d2", (T2, 3.0, 0.0, np.pi / 2, 1000, 0.0, 2 * np.pi, 1000)),
        ("grid_radius_d2 1000x1000 p=4/3", "grid_radius_d2", (T2, 4 / 3, 0.0, np.pi / 2, 1000, 0.0, 2 * np.pi, 1000)),
        ("grid_pairnorm_d2 24^4 p=3", "grid_pairnorm_d2", (T2, 3.0, lo, hi, n)),
        ("grid_pairnorm_d2 24^4 p=4/3", "grid_pairnorm_d2", (T2, 4 / 3, lo, hi, n)),
    ]


def best_time(fn, args, repeat):
    number = 1
    while timeit.timeit(lambda: fn(*args), number=number) < 0.05:
        number *= 4
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    py = kernels.implementation("python")
    print(f"dispatcher backend: {kernels.BACKEND}")
    try:
        cy = kernels.implementation("cython")
    except ImportError:
        print("compiled kernels are not built; nothing to compare")
        return 1
    print(f"{'kernel':32s} {'python':>12s} {'cython':>12s} {'speedup':>8s}")
    for label, name, call in cases(np.random.default_rng(0)):
        tp = best_time(getattr(py, name), call, args.repeat)
        tc = best_time(getattr(cy, name), call, args.repeat)
        print(f"{label:32s} {tp * 1e3:10.3f}ms {tc * 1e3:10.3f}ms {tp / tc:7.1f}x")
        if name in ("tail_powers", "pnorm_dist_to", "grid_pairnorm_d2"):
            td = best_time(getattr(kernels, name), call, args.repeat)
            print(f"{'  via dispatcher':32s} {'':12s} {td * 1e3:10.3f}ms {tp / td:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
