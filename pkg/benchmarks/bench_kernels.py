"""Compare the compiled and numpy grid kernels.

    python3 benchmarks/bench_kernels.py [--sizes 64 128 256] [--steps 200]

Reports time per lattice update (million site updates per second) for
each backend, plus the whole-step cost on the full-resolution K-criterion plate.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from lbmcrack import kernels
from lbmcrack.experiments import k_criterion_config
from lbmcrack.lattice import LatticeSpec, LatticeState, MaterialParams
from lbmcrack.simulation import Simulation


def bench_grid(n, steps, backend):
    spec = LatticeSpec.from_material(n, n, 1.0 / n, MaterialParams(1.0, 1.0))
    state = LatticeState(spec, periodic=True)
    X, Y = spec.positions()
    state.set_fields(np.exp(-50 * ((X - 0.5) ** 2 + (Y - 0.5) ** 2)), np.zeros_like(X))
    state.step_periodic(backend)             # warm-up
    t = time.perf_counter()
    for _ in range(steps):
        state.compute_equilibrium(backend)
        state.stream_collide(backend)
        state.commit()
    return time.perf_counter() - t


def bench_simulation(backend, steps=100):
    # full-resolution plate, before the load reaches the crack (no growth yet)
    sim = Simulation.from_config(k_criterion_config(dh=2.0**-6), backend=backend)
    t = time.perf_counter()
    for _ in range(steps):
        sim.step()
    return time.perf_counter() - t, sim.spec.n_sites


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256, 512])
    p.add_argument("--steps", type=int, default=200)
    args = p.parse_args(argv)
    names = sorted(kernels.BACKENDS)
    print(f"backends: {', '.join(names)} (default {kernels.BACKEND})")
    print(f"{'grid':>8} " + " ".join(f"{n + ' [Msite/s]':>20}" for n in names) + f"{'speedup':>10}")
    for n in args.sizes:
        rates = {b: n * n * args.steps / bench_grid(n, args.steps, b) / 1e6 for b in names}
        speed = rates.get("cython", np.nan) / rates["python"]
        print(f"{n:>5}^2 " + " ".join(f"{rates[b]:>20.1f}" for b in names) + f"{speed:>10.2f}")
    for b in names:
        elapsed, sites = bench_simulation(b)
        print(f"full step (plate, {sites} sites, {b}): {elapsed / 100 * 1e3:.2f} ms/step")


if __name__ == "__main__":
    main()
