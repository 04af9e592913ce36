"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_backends.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from huapickrell import _pykernels

try:
    from huapickrell import _ckernels
except ImportError:
    _ckernels = None


def cases():
    rng = np.random.default_rng(0)
    z2 = 2.0 / (1.0 + 1j * rng.uniform(-5, 5, 2000))
    z1 = 1j * rng.uniform(-40, 40, 2000) + rng.uniform(-5, 5, 2000)
    x = rng.uniform(-50, 50, 2000)
    n = 200
    B = rng.uniform(-0.1, 0.1, n)
    C = rng.uniform(0.5, 2.0, n)
    return [
        ("hyp2f1_terminating m=30, 2000 pts", "hyp2f1_terminating", (30, 0.7 + 0.4j, 61.4, z2)),
        ("hyp1f1 a=0.3+1.1i c=1.6, 2000 pts", "hyp1f1", (0.3 + 1.1j, 1.6, z1)),
        ("ops_recurrence n=200, 2000 pts", "ops_recurrence", (x, B, C, n)),
    ]


def bench(fn, args, repeat):
    number = 1
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    opts = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; only the Python timings are shown")
    print(f"{'case':40s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>9s} {'max diff':>10s}")
    for label, name, args in cases():
        py = getattr(_pykernels, name)
        tp = bench(py, args, opts.repeat)
        if _ckernels is None:
            print(f"{label:40s} {tp * 1e3:12.2f}")
            continue
        cy = getattr(_ckernels, name)
        tc = bench(cy, args, opts.repeat)
        diff = float(np.max(np.abs(np.asarray(py(*args)) - np.asarray(cy(*args)))))
        print(f"{label:40s} {tp * 1e3:12.2f} {tc * 1e3:12.2f} {tp / tc:8.1f}x {diff:10.1e}")


if __name__ == "__main__":
    main()
