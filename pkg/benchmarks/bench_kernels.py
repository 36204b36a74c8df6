"""Compare the flint and pure-Python polynomial kernels.

Runs a micro benchmark on the kernel API directly, then times one pipeline
run per kernel in a subprocess (the kernel is fixed at import time through
VERTEXFORGE_KERNEL). Usage: python3 benchmarks/bench_kernels.py [--total N]
"""
from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import time

from vertexforge._kernels import FlintKernel, PyKernel

PIPELINE = (
    "import time;"
    "from vertexforge.amplitude import free_energy, gv_table;"
    "from vertexforge.toric import preset;"
    "t0 = time.perf_counter();"
    "g = preset('localP2');"
    "gv_table(g, free_energy(g, total={total}));"
    "print(f'{{time.perf_counter() - t0:.3f}}')"
)


def micro(kernel, rounds=200, degree=60, seed=1):
    rng = random.Random(seed)
    polys = [kernel.make([rng.randint(-99, 99) for _ in range(degree)]) for _ in range(8)]
    t0 = time.perf_counter()
    for i in range(rounds):
        a, b, c = polys[i % 8], polys[(i + 3) % 8], polys[(i + 5) % 8]
        ab, ac = kernel.mul(a, b), kernel.mul(a, c)
        kernel.divexact(ab, b)
        kernel.gcd(ab, ac)
    return time.perf_counter() - t0


def pipeline(kernel, total):
    env = dict(os.environ, VERTEXFORGE_KERNEL=kernel)
    out = subprocess.run(
        [sys.executable, "-c", PIPELINE.format(total=total)],
        env=env, capture_output=True, text=True, check=True,
    )
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--total", type=int, default=4, help="local P2 window |d| <= total")
    args = ap.parse_args()
    kernels = {"python": PyKernel}
    try:
        kernels["flint"] = FlintKernel
        FlintKernel()
    except ImportError:
        del kernels["flint"]
        print("python-flint not installed; timing the python kernel only")
    print(f"{'kernel':8s} {'mul/div/gcd':>12s} {'localP2 |d|<=' + str(args.total):>16s}")
    for name, cls in kernels.items():
        print(f"{name:8s} {micro(cls()):11.3f}s {pipeline(name, args.total):15.3f}s")


if __name__ == "__main__":
    main()
