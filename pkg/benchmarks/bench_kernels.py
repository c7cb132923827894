"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--out-dir DIR]

Prints one row per kernel with both timings, the speedup and whether the two
backends produced identical output.
"""
import argparse

from mesp import kernels
from mesp.bench import bench_suite, write_report


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", help="also write kernels.json and kernels.csv here")
    args = parser.parse_args()
    if kernels.compiled_backend is None:
        print("compiled kernels are not built; only the Python timings are shown")
    report = bench_suite("kernels")
    print(f"{'kernel':<18}{'python s':>12}{'compiled s':>12}{'speedup':>10}  identical")
    for row in report["rows"]:
        fmt = lambda v: "-" if v is None else f"{v:.4f}"  # noqa: E731
        speed = "-" if row["speedup"] is None else f"{row['speedup']:.1f}x"
        print(f"{row['kernel']:<18}{fmt(row['python_seconds']):>12}"
              f"{fmt(row['compiled_seconds']):>12}{speed:>10}  {row['identical']}")
    if args.out_dir:
        write_report(report, args.out_dir)


if __name__ == "__main__":
    main()
