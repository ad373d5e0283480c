"""Compare the compiled and NumPy reconstruction kernels.

    python benchmarks/bench_kernels.py [--repeat 20]

Prints per-kernel timings, the speed-up and the largest difference between
the two backends, then times one full solver step with each.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from relaxrd import kernels
from relaxrd.models import fisher_problem, pme_absorption_problem
from relaxrd.reconstruction import ENO_BIAS, eno_coefficient_table
from relaxrd.solver import RelaxedOperator, SchemeConfig, choose_phi, initial_state, make_grid, select_dt, step


def _cases(rng):
    x = np.linspace(0, 4 * np.pi, 1018)
    smooth = np.sin(x)[None, :]
    rough = np.where(x > 2 * np.pi, 1.0, 0.0)[None, :] + 1e-3 * rng.standard_normal((1, x.size))
    block = rng.standard_normal((100, 118))
    return {"smooth 1x1018": smooth, "step 1x1018": rough, "random 100x118": block}


def bench_kernels(repeat: int) -> None:
    rng = np.random.default_rng(0)
    py = kernels.get_backend("numpy")
    cy = kernels.get_backend("cython")
    print(f"{'kernel':<10} {'data':<16} {'numpy ms':>10} {'cython ms':>10} {'speed-up':>9} {'max diff':>10}")
    for name, q in _cases(rng).items():
        q = np.ascontiguousarray(q)
        G = 9
        j0, j1 = G - 1, q.shape[1] - G
        atol = 1e-12 * float(np.abs(q).max())
        eps = 1e-6 * float(np.abs(q).max()) ** 2
        jobs = [(f"eno{r}", lambda b, r=r: b.eno_left(q, r, j0, j1, atol, eno_coefficient_table(r), ENO_BIAS))
                for r in (3, 6)]
        jobs.append(("weno5", lambda b: b.weno5_left(q, j0, j1, eps)))
        for kname, fn in jobs:
            tp = min(timeit.repeat(lambda: fn(py), number=1, repeat=repeat))
            tc = min(timeit.repeat(lambda: fn(cy), number=1, repeat=repeat))
            diff = float(np.max(np.abs(fn(py) - fn(cy))))
            print(f"{kname:<10} {name:<16} {1e3 * tp:10.3f} {1e3 * tc:10.3f} {tp / tc:9.1f} {diff:10.1e}")


def bench_step(repeat: int) -> None:
    print()
    print(f"{'full step':<34} {'numpy ms':>10} {'cython ms':>10} {'speed-up':>9}")
    setups = [
        ("fisher 1D m=1000 ENO6+ARS443", fisher_problem(c=10), 1000, "eno6", "ARS443"),
        ("pme 2D 100^2 WENO5+ARS222", pme_absorption_problem(), 100, "weno5", "ARS222"),
    ]
    for label, prob, m, rec, tab in setups:
        sch = SchemeConfig.build(rec, tab)
        grid = make_grid(prob, m, sch)
        st = initial_state(prob, grid)
        phi = choose_phi(prob, st.u.interior, grid)
        dt = select_dt(grid, prob, sch, st.u.interior, phi)
        times = []
        for name in ("numpy", "cython"):
            op = RelaxedOperator(prob, grid, sch, phi, backend=kernels.get_backend(name))
            times.append(min(timeit.repeat(lambda: step(st, op, dt), number=1, repeat=max(3, repeat // 4))))
        print(f"{label:<34} {1e3 * times[0]:10.2f} {1e3 * times[1]:10.2f} {times[0] / times[1]:9.1f}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    if not kernels.compiled_available():
        raise SystemExit("compiled kernels are not built; run `pip install --no-build-isolation -e .` first")
    bench_kernels(args.repeat)
    bench_step(args.repeat)


if __name__ == "__main__":
    main()
