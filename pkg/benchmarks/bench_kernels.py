"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each case is run once untimed per backend (numba compiles on that call),
then timed ``--repeat`` times; the best time is reported together with the
largest difference between the two backends' outputs.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from lattice_ctqw import kernels
from lattice_ctqw.abelian import GroupSpec
from lattice_ctqw.scheme import HONEY_B, build_scheme
from lattice_ctqw.spectral import class_symbols, lattice_hamiltonian_offsets, spectral_grid


def best_of(fn, repeat: int) -> tuple[float, np.ndarray]:
    out = fn()
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def phase_case(m: int, steps: int, nclass: int | None = None):
    s = build_scheme(GroupSpec(m, 2))
    grid = spectral_grid(s)
    classes = range(len(s) if nclass is None else min(nclass, len(s)))
    coeffs = class_symbols(s, grid, classes) * float(grid.weight)
    times = np.linspace(0.0, 50.0, steps)
    return f"phase_sums  hexagonal m={m}, {len(classes)} classes", lambda: kernels.phase_sums(
        grid.hamiltonian_values, coeffs, times
    )


def torus_case(kind: str, N: int, steps: int):
    times = np.linspace(0.0, 100.0, steps)
    if kind == "hexagonal":
        mode, hvec = kernels.MODE_HEXAGONAL, lattice_hamiltonian_offsets(2)
    else:
        mode, hvec = kernels.MODE_HONEYCOMB, np.asarray(HONEY_B)
    members = [[(0, (0, 0))]]
    return f"torus_sum   {kind} N={N}, {steps} times", lambda: kernels.torus_sum(
        N, 2, times, mode, hvec, members
    )


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller problem sizes")
    args = ap.parse_args()

    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    scale = 4 if args.quick else 1
    cases = [
        phase_case(60 // scale, 400),
        phase_case(200 // scale, 100, nclass=1),
        torus_case("hexagonal", 1024 // scale, 8),
        torus_case("honeycomb", 1024 // scale, 8),
    ]
    before = kernels.get_backend()
    print(f"{'case':<44} {'numpy s':>10} {'numba s':>10} {'speedup':>8} {'max diff':>10}")
    try:
        for name, fn in cases:
            kernels.set_backend("numpy")
            t_np, out_np = best_of(fn, args.repeat)
            kernels.set_backend("numba")
            t_nb, out_nb = best_of(fn, args.repeat)
            diff = float(np.abs(out_np - out_nb).max())
            print(f"{name:<44} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f} {diff:10.1e}", flush=True)
    finally:
        kernels.set_backend(before)


if __name__ == "__main__":
    main()
