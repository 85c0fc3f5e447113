"""Time the compiled kernels against the pure-Python fallback.

Usage: ``python3 benchmarks/bench_kernels.py [--repeat 5]``. Both
implementations are imported directly, so the result does not depend
on which one ``hyppp`` selected at import. Each row also reports the
largest relative difference between the two outputs.
"""
import argparse
import timeit

import numpy as np

from hyppp import _fallback
from hyppp.multilinear import subsets

try:
    from hyppp import _speedups
except ImportError:
    _speedups = None


def cases(rng):
    def cplx(*shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    for n in (6, 10, 14):
        a = cplx(n, n)
        yield f"permanent n={n}", "permanent_ryser", (a,), {}
    for n in (8, 32, 128):
        a = cplx(n, n)
        yield f"det n={n}", "det_lu", (a,), {}
    for b, m, n, ell in ((200, 2, 3, 6), (50, 3, 4, 8)):
        stack = cplx(b, m, n, ell)
        alt = np.array([1] + [0] * (m - 1), dtype=np.uint8)
        yield (f"factored_terms B={b} M={m} N={n} L={ell}", "factored_terms",
               (stack, alt, subsets(ell, n)), {"num_threads": 1})
    for m, ell, n in ((2, 10, 4), (3, 12, 5)):
        h = cplx(m, ell, ell)
        alt = np.array([1] + [0] * (m - 1), dtype=np.uint8)
        yield (f"principal_terms M={m} L={ell} N={n}", "principal_terms",
               (h, alt, subsets(ell, n)), {"num_threads": 1})


def best_time(fn, args, kwargs, repeat):
    timer = timeit.Timer(lambda: fn(*args, **kwargs))
    loops, _ = timer.autorange()
    return min(timer.repeat(repeat, loops)) / loops


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if _speedups is None:
        print("compiled extension not built; only the fallback is available")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<40} {'python':>12} {'compiled':>12} {'speedup':>9} {'rel diff':>10}")
    for label, name, fargs, kwargs in cases(rng):
        t_py = best_time(getattr(_fallback, name), fargs, kwargs, args.repeat)
        if _speedups is None:
            print(f"{label:<40} {t_py * 1e3:>10.3f}ms")
            continue
        t_c = best_time(getattr(_speedups, name), fargs, kwargs, args.repeat)
        ref = np.asarray(getattr(_fallback, name)(*fargs, **kwargs))
        got = np.asarray(getattr(_speedups, name)(*fargs, **kwargs))
        diff = np.max(np.abs(ref - got)) / max(1.0, np.max(np.abs(ref)))
        print(f"{label:<40} {t_py * 1e3:>10.3f}ms {t_c * 1e3:>10.3f}ms "
              f"{t_py / t_c:>8.1f}x {diff:>10.2e}")


if __name__ == "__main__":
    main()
