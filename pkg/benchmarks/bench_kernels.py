#!/usr/bin/env python3
"""Benchmark the compiled polynomial kernels against the pure-Python twins.

Micro benchmarks call both implementations directly; the end-to-end rows
rerun a representative exact verification in a subprocess with
QSUM_PURE_KERNELS toggled, so each lane goes through its real import
path.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import os
import random
import statistics
import subprocess
import sys
import time

from qsum import _zxpy

try:
    from qsum import _zxc
except ImportError:
    _zxc = None


def timeit(fn, repeat):
    best = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best.append(time.perf_counter() - t0)
    return min(best)


def row(name, compiled, pure):
    speedup = "-" if compiled is None else f"{pure / compiled:6.1f}x"
    ct = "-" if compiled is None else f"{compiled * 1000:9.2f}"
    print(f"{name:<38} {ct:>10} {pure * 1000:9.2f} {speedup:>8}")


def micro(repeat):
    rng = random.Random(0)
    small_a = [rng.randint(-30, 30) for _ in range(300)]
    small_b = [rng.randint(-30, 30) for _ in range(300)]
    big_a = [rng.randint(-10 ** 45, 10 ** 45) for _ in range(150)]
    cases = [
        ("zx_mul deg 300, word coefficients",
         lambda impl: impl.zx_mul(small_a, small_b)),
        ("zx_mul deg 150, 45-digit coefficients",
         lambda impl: impl.zx_mul(big_a, big_a)),
        ("zx_binmul chain (Pochhammer expand)",
         lambda impl: _binmul_chain(impl, 120)),
        ("zx_lincomb deg 400 accumulate",
         lambda impl: impl.zx_lincomb(small_a * 2, small_b * 2, 7, -5, 3)),
    ]
    print(f"{'kernel micro-benchmark':<38} {'c (ms)':>10} {'py (ms)':>9} "
          f"{'speedup':>8}")
    for name, fn in cases:
        pure_t = timeit(lambda: fn(_zxpy), repeat)
        comp_t = None if _zxc is None else timeit(lambda: fn(_zxc), repeat)
        row(name, comp_t, pure_t)


def _binmul_chain(impl, n):
    acc = [1]
    for t in range(n):
        acc = impl.zx_binmul(acc, 3, 2, 1 + t % 3)
    return acc


def end_to_end(repeat):
    script = (
        "import time; from fractions import Fraction as F; "
        "from qsum.catalog import IdentityId, ParamSet, verify; "
        "from qsum.series import MonoParam; "
        "ps = ParamSet(b=MonoParam(F(2,3),1), c=MonoParam(F(7,2),2), "
        "d=MonoParam(F(5,4),1), n=8); "
        "t0 = time.perf_counter(); "
        "r = verify(IdentityId.BAILEY_5PSI5_FIRST, ps); "
        "assert r.status == 'equal'; "
        "print(time.perf_counter() - t0)"
    )

    def run(pure):
        env = dict(os.environ)
        env["QSUM_PURE_KERNELS"] = "1" if pure else "0"
        times = []
        for _ in range(repeat):
            out = subprocess.run([sys.executable, "-c", script], env=env,
                                 capture_output=True, text=True, check=True)
            times.append(float(out.stdout.strip()))
        return statistics.median(times)

    pure_t = run(pure=True)
    comp_t = None if _zxc is None else run(pure=False)
    print()
    print(f"{'end-to-end (subprocess)':<38} {'c (ms)':>10} {'py (ms)':>9} "
          f"{'speedup':>8}")
    row("verify thm1.1 exact, n=8", comp_t, pure_t)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _zxc is None:
        print("note: compiled kernels not built; showing pure lane only\n")
    micro(args.repeat)
    end_to_end(max(3, args.repeat))


if __name__ == "__main__":
    main()
