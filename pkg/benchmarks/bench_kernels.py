"""Time the compiled lifetime-matrix kernel against the pure-Python twin.

    python3 benchmarks/bench_kernels.py [--nodes 25] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from opar import _kernels_py

try:
    from opar import _kernels
except ImportError:
    _kernels = None


def random_swarm(n, seed):
    rng = np.random.default_rng(seed)
    pos = rng.uniform(0, [300.0, 1000.0, 50.0], size=(n, 3))
    alpha = rng.uniform(-np.pi, np.pi, n)
    theta = rng.uniform(0, np.pi, n)
    heading = np.column_stack([np.sin(theta) * np.cos(alpha),
                               np.sin(theta) * np.sin(alpha),
                               np.cos(theta)])
    return pos, heading, rng.uniform(0, 50, n), rng.uniform(-2, 2, n)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=25)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--horizon", type=float, default=500.0)
    args = ap.parse_args(argv)

    swarm = random_swarm(args.nodes, 0)
    call = lambda mod: mod.lifetime_matrix(*swarm, 250.0, args.horizon, 0.1, 1e-3)

    timings = {}
    for name, mod in (("python", _kernels_py), ("cython", _kernels)):
        if mod is None:
            print(f"{name:>7}: not built")
            continue
        best = min(timeit.repeat(lambda: call(mod), number=1, repeat=args.repeat))
        timings[name] = best
        print(f"{name:>7}: {best * 1e3:10.2f} ms per {args.nodes}x{args.nodes} matrix")

    if len(timings) == 2:
        same = np.array_equal(call(_kernels_py), call(_kernels))
        print(f"speedup: {timings['python'] / timings['cython']:.1f}x, identical output: {same}")


if __name__ == "__main__":
    main()
