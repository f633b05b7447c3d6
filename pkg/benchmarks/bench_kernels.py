"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py --repeat 5
"""

import argparse
import timeit

import numpy as np

from qschur import _kernels_py

try:
    from qschur import _kernels as compiled
except ImportError:
    compiled = None


def workloads(rng, p):
    small = [rng.integers(0, p, size=(4, 4), dtype=np.int64) for _ in range(200)]
    big = [rng.integers(0, p, size=(12, 12), dtype=np.int64) for _ in range(50)]
    flags = [(rng.integers(0, p, size=(4, 4), dtype=np.int64), rng.integers(0, p, size=(4, 4), dtype=np.int64))
             for _ in range(200)]
    return {
        "rank 4x4 x200": lambda mod: [mod.rank_mod_p(m, p) for m in small],
        "rref 12x12 x50": lambda mod: [mod.rref_mod_p(m, p) for m in big],
        "intersections d=4 x200": lambda mod: [mod.intersection_dims(a, [1, 2, 3], b, [1, 2, 3], p) for a, b in flags],
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--prime", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    backends = {"python": _kernels_py}
    if compiled is not None:
        backends["cython"] = compiled
    else:
        print("compiled kernels not built; timing the fallback only")
    print(f"{'workload':28s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if compiled else ""))
    for name, fn in workloads(rng, args.prime).items():
        times = {b: min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat)) for b, mod in backends.items()}
        row = f"{name:28s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times.values())
        if compiled is not None:
            row += f"{times['python'] / times['cython']:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
