"""Compare the compiled and pure-Python reduction kernels.

    python3 benchmarks/bench_kernels.py [--size 1000000] [--repeat 5]

Prints the best-of-``repeat`` time per call and the largest relative
disagreement between the two backends.
"""
import argparse
import timeit

import numpy as np

from lpns import _kernels_py

try:
    from lpns import _kernels
except ImportError:  # extension not built
    _kernels = None


def cases(size, rng):
    scalar = rng.standard_normal((1, size))
    vector = rng.standard_normal((3, size // 3))
    flat = rng.standard_normal(size) * np.exp(rng.uniform(-20, 20, size))
    return {
        "neumaier_sum (wide dynamic range)": ("neumaier_sum", (flat,)),
        "magnitude_power_sum p=2, scalar": ("magnitude_power_sum", (scalar, 2.0)),
        "magnitude_power_sum p=4/3, 3-vector": ("magnitude_power_sum", (vector, 4.0 / 3.0)),
        "magnitude_max, 3-vector": ("magnitude_max", (vector,)),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = {"python": _kernels_py}
    if _kernels is not None:
        backends["cython"] = _kernels
    else:
        print("compiled extension not available; timing the fallback only")

    rng = np.random.default_rng(0)
    print(f"{'kernel':<40}" + "".join(f"{name:>12}" for name in backends) + f"{'speedup':>10}{'rel diff':>11}")
    for label, (fn, fargs) in cases(args.size, rng).items():
        times, values = {}, {}
        for name, mod in backends.items():
            f = getattr(mod, fn)
            values[name] = f(*fargs)
            times[name] = min(timeit.repeat(lambda: f(*fargs), number=1, repeat=args.repeat))
        line = f"{label:<40}" + "".join(f"{times[n] * 1e3:10.2f}ms" for n in backends)
        if "cython" in backends:
            ref = values["python"]
            diff = abs(values["cython"] - ref) / abs(ref) if ref else abs(values["cython"])
            line += f"{times['python'] / times['cython']:9.1f}x{diff:11.1e}"
        print(line)


if __name__ == "__main__":
    main()
