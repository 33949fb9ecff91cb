"""Compare the compiled and NumPy kernel backends.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Prints the median time per call for each kernel at several dimensions, the
speedup of the compiled backend, and the largest disagreement between the two.
"""
import argparse
import statistics
import timeit

import numpy as np

from realitykit import kernels

DIMS = (4, 8, 16, 32, 64)


def _inputs(d, rng):
    r = np.sort(rng.dirichlet(np.ones(d)))[::-1]
    s = np.sort(rng.dirichlet(np.ones(d)))[::-1]
    u = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))[0]
    w = np.abs(u) ** 2
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = a @ a.conj().T
    return r, np.log(r), np.log(s), w, m


def cases(d, rng):
    r, lr, ls, w, m = _inputs(d, rng)
    half = d // 2
    return {
        "expm1_overlap_sum": lambda impl: kernels.expm1_overlap_sum(r, lr, ls, w, -0.5, impl=impl),
        "log_ratio_sum": lambda impl: kernels.log_ratio_sum(r, lr, ls, w, impl=impl),
        "pinch": lambda impl: kernels.pinch(m, half, 2, impl=impl),
        "trace_middle": lambda impl: kernels.trace_middle(m, 2, 2, d // 4 if d >= 4 else 1, impl=impl),
    }


def _median_time(fn, repeat):
    number = 200
    return statistics.median(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    backends = {name: kernels.backend_module(name) for name in kernels.available_backends()}
    if "cython" not in backends:
        print("compiled kernels not built; timing the NumPy backend only")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<20}{'d':>4}" + "".join(f"{n + ' (us)':>14}" for n in backends) + f"{'speedup':>10}{'max diff':>12}")
    for d in DIMS:
        for name, fn in cases(d, rng).items():
            times = {b: _median_time(lambda: fn(mod), args.repeat) * 1e6 for b, mod in backends.items()}
            outs = [np.asarray(fn(mod)) for mod in backends.values()]
            diff = max(float(np.max(np.abs(o - outs[0]))) for o in outs)
            speed = times["python"] / times["cython"] if "cython" in times else float("nan")
            print(f"{name:<20}{d:>4}" + "".join(f"{t:>14.2f}" for t in times.values()) + f"{speed:>10.2f}{diff:>12.2e}")


if __name__ == "__main__":
    main()
