"""Time the compiled and numpy kernel-sum backends on one full pair analysis.

Usage: python benchmarks/bench_kernels.py [--sizes 500,2000,5000] [--repeat 3]
"""

import argparse
import time

import numpy as np

from causal_paths import kernelreg
from causal_paths.criteria import analyze
from causal_paths.synth import SynthSpec, generate


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="500,2000,5000")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = kernelreg.available_backends()
    print(f"{'n':>6}  " + "  ".join(f"{b:>10}" for b in backends) + ("   speedup" if len(backends) > 1 else ""))
    for n in (int(s) for s in args.sizes.split(",")):
        pair = generate(SynthSpec(n, "cubic", 0.2, "gaussian", seed=0))
        timings = {}
        for b in backends:
            kernelreg.set_backend(b)
            timings[b] = best_time(lambda: analyze(pair), args.repeat)
        row = f"{n:>6}  " + "  ".join(f"{timings[b] * 1e3:>8.1f}ms" for b in backends)
        if "cython" in timings:
            row += f"  {timings['python'] / timings['cython']:>7.1f}x"
        print(row)
    if "cython" in backends:
        x = np.random.default_rng(0).normal(size=3000)
        ref = kernelreg._BACKENDS["python"].kernel_sums(x, x**2, 0.3, x)
        ext = kernelreg._BACKENDS["cython"].kernel_sums(x, x**2, 0.3, x)
        err = max(float(np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300))) for a, b in zip(ref, ext))
        print(f"max relative difference between backends: {err:.1e}")


if __name__ == "__main__":
    main()
