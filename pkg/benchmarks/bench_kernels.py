"""Timing comparison of the compiled and pure-numpy kernel backends.

The backend is frozen at import time by PROXCATALYST_KERNELS, so the
script reruns itself in a subprocess per backend and prints both result
tables plus the speedup column.  Run from the repo root:

    python3 benchmarks/bench_kernels.py

Pass --backend to time a single backend in the current process instead.
"""

import argparse
import os
import subprocess
import sys
import time

HERE = os.path.dirname(os.path.abspath(__file__))


def timeit(fn, min_seconds=0.3):
    """Average seconds per call, warmed up, repeated until min_seconds."""
    fn()
    reps = 1
    while True:
        t0 = time.perf_counter()
        for _ in range(reps):
            fn()
        elapsed = time.perf_counter() - t0
        if elapsed >= min_seconds:
            return elapsed / reps
        reps = max(reps * 2, int(reps * min_seconds / max(elapsed, 1e-9)) + 1)


def measure():
    import numpy as np

    import proxcatalyst as pc
    from proxcatalyst import kernels
    from proxcatalyst.problems.logistic import synthetic_logistic

    rng = np.random.Generator(np.random.Philox(42))
    rows = []

    v = rng.standard_normal(100_000)
    rows.append(("enet_prox 1e5", timeit(lambda: kernels.enet_prox(v, 0.1, 0.5))))

    d = rng.standard_normal((64, 32))
    gram = d.T @ d
    corr = d.T @ rng.standard_normal(64)
    a0 = np.zeros(32)
    rows.append(("enet_cd 32 coords",
                 timeit(lambda: kernels.enet_cd(gram, corr, 0.2, 1e-3, a0,
                                                1e-10, 200))))

    obj = synthetic_logistic(400, 30, 100.0, seed=1)
    feats, labels = obj.smooth.feats, obj.smooth.labels
    x = rng.standard_normal(30)

    def grad_pass():
        for i in range(400):
            kernels.logit_sample_grad(feats, labels, i, x)

    rows.append(("logit grad x400", timeit(grad_pass)))

    target = pc.ProxSubproblem(obj, kappa=obj.lipschitz, center=x)
    z0 = np.zeros(30)

    def svrg_epochs():
        pc.run_inner(pc.SVRG, target, z0, iters=4 * 400, seed=3)

    rows.append(("svrg 4 epochs n=400", timeit(svrg_epochs)))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--backend", choices=["numba", "numpy"])
    args = ap.parse_args()

    if args.backend:
        os.environ["PROXCATALYST_KERNELS"] = args.backend
        from proxcatalyst import kernels

        assert kernels.BACKEND == args.backend
        for name, secs in measure():
            print("%s|%.6e" % (name, secs))
        return

    results = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, PROXCATALYST_KERNELS=backend)
        out = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--backend", backend],
            env=env, capture_output=True, text=True, check=True)
        results[backend] = dict(
            line.split("|") for line in out.stdout.splitlines() if "|" in line)

    print("%-22s %12s %12s %9s" % ("kernel", "numba s", "numpy s", "speedup"))
    for name in results["numba"]:
        nb = float(results["numba"][name])
        np_ = float(results["numpy"][name])
        print("%-22s %12.3e %12.3e %8.1fx" % (name, nb, np_, np_ / nb))


if __name__ == "__main__":
    main()
