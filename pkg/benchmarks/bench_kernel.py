"""Time one prime of the chi3 grid sum with the compiled and the numpy kernel.

    python benchmarks/bench_kernel.py [N ...]

Both kernels must return the same residues; the script exits nonzero if not.
"""
from __future__ import annotations

import argparse
import sys
import time

from holonomy.lattice.backend import compiled
from holonomy.lattice.chi3 import primes_for_order, residues_mod_prime


def run(N: int, backend: str, repeat: int) -> tuple[float, list[int]]:
    p = primes_for_order(N)[0]
    best = float("inf")
    res: list[int] = []
    for _ in range(repeat):
        t = time.perf_counter()
        res = residues_mod_prime(N, p, backend)
        best = min(best, time.perf_counter() - t)
    return best, res


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("orders", nargs="*", type=int, default=[40, 80, 160])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if compiled is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`")
        return 1
    print(f"{'N':>6} {'compiled s':>12} {'python s':>12} {'speedup':>8}")
    status = 0
    for N in args.orders:
        tc, rc = run(N, "compiled", args.repeat)
        tp, rp = run(N, "python", args.repeat)
        if rc != rp:
            print(f"N={N}: kernels disagree", file=sys.stderr)
            status = 2
        print(f"{N:>6} {tc:>12.4f} {tp:>12.4f} {tp / tc:>8.1f}")
    return status


if __name__ == "__main__":
    sys.exit(main())
