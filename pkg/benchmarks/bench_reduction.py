"""Benchmark the two reduction backends (numba @njit vs pure numpy).

The hot loop of every Groebner computation is full normal-form reduction
of term arrays over GF(p).  This script times that kernel directly on
synthetic workloads and then times a full Buchberger run end to end under
each backend (selected by LIAISON_NUMBA, so the end-to-end comparison
re-executes itself in a subprocess).

Usage:  python benchmarks/bench_reduction.py [--trials N]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np


def bench_kernel(trials):
    from liaisonlab import _kernels
    from liaisonlab.groebner import _concat, buchberger
    from liaisonlab.ring import Ring

    R = Ring(5, 32003)
    rng = np.random.default_rng(1)
    gens = [R.random_poly(2, rng) for _ in range(4)]
    G = buchberger(gens)
    bk, be, bc, boff = _concat(R.as_module, list(G))
    polys = [R.random_poly(5, rng) for _ in range(trials)]

    impls = {"numpy": _kernels._py_normal_form}
    if _kernels.USE_NUMBA:
        impls["numba"] = _kernels._nb_normal_form
        # trigger compilation outside the timed region
        f = polys[0]
        _kernels._nb_normal_form(f.keys, f.exps, f.coeffs, bk, be, bc, boff, R.p)

    results = {}
    for name, fn in impls.items():
        t0 = time.perf_counter()
        for f in polys:
            fn(f.keys, f.exps, f.coeffs, bk, be, bc, boff, R.p)
        results[name] = time.perf_counter() - t0
    print(f"normal-form kernel on {trials} dense quintics in GF(32003)[x0..x4]:")
    for name, dt in results.items():
        print(f"  {name:6s} {dt:8.3f}s   ({trials / dt:8.1f} reductions/s)")
    if len(results) == 2:
        print(f"  speedup numba/numpy: {results['numpy'] / results['numba']:.1f}x")


def bench_end_to_end():
    code = (
        "import time,numpy as np\n"
        "from liaisonlab.ring import Ring\n"
        "from liaisonlab.ideals import Ideal, PolyMatrix\n"
        "from liaisonlab.resolution import ci_invariant_hf\n"
        "R=Ring(5,32003); z=R.gens()\n"
        "B=PolyMatrix(R,[[z[0],z[1],z[2],z[3]],[z[1],z[2],z[3],z[4]]])\n"
        "I=B.maximal_minors()\n"
        "t0=time.perf_counter()\n"
        "ci_invariant_hf(I, window=range(-1,5))\n"
        "print(f'{time.perf_counter()-t0:.2f}')\n"
    )
    print("end-to-end: CI-liaison invariant of the rational normal quartic in P^4:")
    for flag, label in (("1", "numba"), ("0", "numpy")):
        env = dict(os.environ, LIAISON_NUMBA=flag)
        out = subprocess.run(
            [sys.executable, "-c", code], capture_output=True, text=True, env=env
        )
        print(f"  {label:6s} {out.stdout.strip()}s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=400)
    args = ap.parse_args()
    from liaisonlab import _kernels

    print(f"active backend: {_kernels.backend_name()}")
    bench_kernel(args.trials)
    bench_end_to_end()
