"""Time the compiled and pure-Python sweep kernels on the same inputs.

    python benchmarks/bench_backends.py [--repeats N] [--skip-slow]

Both backends must produce identical labels; the script checks that and
prints a table of best-of-N wall times and the speed-up.
"""
import argparse
import time

from kanmi import KanmiConfig, kernels, run
from kanmi.experiments import GeneratorSpec, generate, load_benchmark


def cases(skip_slow: bool):
    yield "votes k=2..9", load_benchmark("votes"), range(2, 10)
    yield "cancer k=2..9", load_benchmark("cancer"), range(2, 10)
    yield "synthetic 10k k=2", generate(GeneratorSpec(rows=10_000)), [2]
    if not skip_slow:
        yield "mushroom k=2..9", load_benchmark("mushroom"), range(2, 10)


def timed(ds, ks, backend, repeats):
    best, labels = float("inf"), None
    for _ in range(repeats):
        t0 = time.perf_counter()
        labels = [run(ds, KanmiConfig(k), backend).labels for k in ks]
        best = min(best, time.perf_counter() - t0)
    return best, labels


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--skip-slow", action="store_true", help="leave out mushroom (about 30 s in Python)")
    args = ap.parse_args(argv)
    if "cython" not in kernels.BACKENDS:
        raise SystemExit("compiled extension not built; reinstall with Cython available")
    print(f"{'case':<22} {'python s':>10} {'cython s':>10} {'speed-up':>9}  labels")
    for name, ds, ks in cases(args.skip_slow):
        tp, lp = timed(ds, ks, "python", 1 if name.startswith("mushroom") else args.repeats)
        tc, lc = timed(ds, ks, "cython", args.repeats)
        same = "identical" if lp == lc else "DIFFER"
        print(f"{name:<22} {tp:>10.4f} {tc:>10.4f} {tp / tc:>8.0f}x  {same}")


if __name__ == "__main__":
    main()
