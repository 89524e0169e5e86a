"""Compare the compiled grid kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 20]

Prints the best-of-N wall time per case and the speedup, and checks that
both backends agree before timing anything.
"""

import argparse
import timeit

import numpy as np

from tto_workbench import _kernels_py

try:
    from tto_workbench import _kernels as _compiled
except ImportError:
    _compiled = None


def cases():
    rng = np.random.default_rng(7)
    for n, m in [(4, 256), (12, 1024), (32, 4096), (64, 16384)]:
        zeros = 0.8 * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))
        nodes = np.exp(2j * np.pi * np.arange(m) / m)
        yield n, m, zeros, nodes


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)
    if _compiled is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`")
        return 1

    print(f"{'kernel':<16}{'n':>4}{'M':>7}{'python ms':>12}{'compiled ms':>13}{'speedup':>9}")
    for n, m, zeros, nodes in cases():
        for name in ("tm_table", "blaschke_grid"):
            if name == "tm_table":
                py = lambda: _kernels_py.tm_table(zeros, nodes)  # noqa: E731
                cy = lambda: _compiled.tm_table(zeros, nodes)  # noqa: E731
            else:
                py = lambda: _kernels_py.blaschke_grid(zeros, 1.0, nodes, True)  # noqa: E731
                cy = lambda: _compiled.blaschke_grid(zeros, 1.0, nodes, True)  # noqa: E731
            gap = np.max(np.abs(np.asarray(py()) - np.asarray(cy())))
            assert gap < 1e-12, f"{name} backends disagree by {gap:.2e}"
            t_py, t_cy = best(py, args.repeat), best(cy, args.repeat)
            print(f"{name:<16}{n:>4}{m:>7}{1e3 * t_py:>12.3f}{1e3 * t_cy:>13.3f}"
                  f"{t_py / t_cy:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
