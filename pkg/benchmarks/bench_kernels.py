"""Compare the compiled and pure-Python cell kernels on the decay census.

Run: python3 benchmarks/bench_kernels.py [--m 3] [--depth 7] [--repeat 3]
"""
import argparse
import time

from jacobi_perron import _cell_kernel_py as py

try:
    from jacobi_perron import _cell_kernel as cy
except ImportError:
    cy = None


def census(k, m, depth):
    lv = k.first_level(m)
    levels = [lv]
    for _ in range(depth):
        lv = k.next_level(lv, m)
        levels.append(lv)
    return levels


def total(k, levels, m):
    return [k.weighted_sum(sorted(lv.items()), 1, m) for lv in levels]


def shoelace_batch(k, n):
    pts = [(3 * i + 1, 5 * i + 2, 7 * i + 3) for i in range(8)]
    for _ in range(n):
        k.shoelace2(pts)


def best(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--m", type=int, default=3)
    ap.add_argument("--depth", type=int, default=7)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = [("python", py)] + ([("cython", cy)] if cy is not None else [])
    results = {}
    for name, k in backends:
        levels = census(k, args.m, args.depth)
        results[name] = (
            best(lambda: census(k, args.m, args.depth), args.repeat),
            best(lambda: total(k, levels, args.m), args.repeat),
            best(lambda: shoelace_batch(k, 20000), args.repeat),
            total(k, levels, args.m),
        )
    if cy is None:
        print("compiled kernel not built; pure-Python timings only")
    elif results["python"][3] != results["cython"][3]:
        raise SystemExit("backends disagree")
    print(f"{'kernel':<14}" + "".join(f"{n:>12}" for n, _ in backends) + ("     speedup" if cy else ""))
    for i, label in enumerate(("census", "measure-sum", "shoelace")):
        row = [results[n][i] for n, _ in backends]
        line = f"{label:<14}" + "".join(f"{t:>11.4f}s" for t in row)
        if cy:
            line += f"{row[0] / row[1]:>11.2f}x"
        print(line)


if __name__ == "__main__":
    main()
