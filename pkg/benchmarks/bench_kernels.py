"""Compare the compiled and numpy kernels on surface-sized grids.

    python3 benchmarks/bench_kernels.py [--nx 1025] [--ny 641] [--repeat 5]

Prints the best-of-N wall time per backend and kind, the speed-up, and the
largest difference between the two backends' outputs.
"""
import argparse
import time

import numpy as np

from twolevel._backend import load


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nx", type=int, default=1025)
    ap.add_argument("--ny", type=int, default=641)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    taus = np.linspace(0.0, 4 * np.pi, args.nx)
    dets = np.linspace(-4.0, 4.0, args.ny)
    backends = {"python": load("python")}
    try:
        backends["cython"] = load("cython")
    except ImportError:
        print("compiled extension not built; timing the numpy fallback only")

    print(f"grid {args.nx} x {args.ny} = {args.nx * args.ny} samples, best of {args.repeat}")
    for kind in ("p1", "p2"):
        results = {}
        for name, mod in backends.items():
            grid = getattr(mod, f"{kind}_grid")
            out = np.empty((args.nx, args.ny))
            results[name] = (best_time(lambda: grid(1.0, taus, dets, out), args.repeat), out)
            print(f"  {kind} {name:7s} {results[name][0] * 1e3:9.2f} ms "
                  f"({args.nx * args.ny / results[name][0] / 1e6:7.1f} Msamples/s)")
        if len(results) == 2:
            speedup = results["python"][0] / results["cython"][0]
            diff = np.max(np.abs(results["python"][1] - results["cython"][1]))
            print(f"  {kind} speed-up {speedup:.2f}x, max |difference| {diff:.1e}")


if __name__ == "__main__":
    main()
