"""Time the numba and numpy paths of each kernel on the same inputs.

    python3 benchmarks/bench_kernels.py --n 14 --repeat 5

Kernels are called directly, so one process measures both paths. The
``--pipeline`` option also runs a full bound computation in two subprocesses,
one with ``MOTHERGRAPH_NUMBA=0``.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np
import scipy.sparse as sp

from mothergraph import kernels
from mothergraph.mothercuts import _frames
from mothergraph.schreier import _digit_matrix, build_projected
from mothergraph.words import TreeShape


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases(n):
    d = 2
    yield "binary_edges", (n, d), kernels.binary_edges_numba, kernels.binary_edges_numpy

    shape = TreeShape((3, 2, 4))
    m = max(4, n - 6)
    sizes = shape.sizes(m)
    _, digits, strides = _digit_matrix(sizes)
    args = (digits, strides, np.asarray(sizes, np.int64), d)
    yield f"mixed_edges (n={m})", args, kernels.mixed_edges_numba, kernels.mixed_edges_numpy

    lm = min(n, 11)
    net = build_projected(d, TreeShape.constant(2), lm)
    _, c = _frames(net)
    apos = kernels.positions_of_masks(np.arange(1 << lm))
    args = (c["lo"], c["hi"], c["plo"], c["phi"], c["k"], c["t"], c["anchor"], lm, apos)
    yield f"membership_scan (n={lm})", args, kernels.membership_scan_numba, kernels.membership_scan_numpy

    rng = np.random.default_rng(0)
    count = 1 << n
    base = rng.integers(0, 1 << n, count) & ~0xF
    nlow = rng.integers(0, 4, count)
    kbit = np.where(rng.random(count) < 0.5, rng.integers(4, n, count), -1)
    value = rng.integers(1, 1 << 20, count)
    args = (base, nlow, kbit, value, n)
    yield "accumulate_cutsets", args, kernels.accumulate_cutsets_numba, kernels.accumulate_cutsets_numpy

    size = 1 << n
    lap = sp.diags([-np.ones(size - 1), 2.0 * np.ones(size), -np.ones(size - 1)], [-1, 0, 1]).tocsr()
    b = np.zeros(size)
    b[-1] = 1.0
    args = (lap.indptr.astype(np.int64), lap.indices.astype(np.int64), lap.data, b,
            0.5 * np.ones(size), 1e-12, 10 * size)
    yield "pcg (path Laplacian)", args, kernels.pcg_numba, kernels.pcg_numpy


PIPELINE = (
    "import time; from mothergraph.mothercuts import theorem_bound; from mothergraph.words import BINARY;"
    "s=time.perf_counter(); theorem_bound(2, BINARY, 1, {t}, {n}); print(time.perf_counter()-s)"
)


def pipeline(n):
    out = {}
    for label, flag in (("numba", "1"), ("numpy", "0")):
        env = dict(os.environ, MOTHERGRAPH_NUMBA=flag)
        proc = subprocess.run([sys.executable, "-c", PIPELINE.format(t=n - 2, n=n)], env=env,
                              capture_output=True, text=True, check=True)
        out[label] = float(proc.stdout.strip())
    return out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=14, help="level size driving every input")
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--pipeline", action="store_true", help="also time a full bound in subprocesses")
    args = parser.parse_args(argv)

    print(f"{'kernel':32s} {'numba [s]':>10s} {'numpy [s]':>10s} {'speedup':>8s}")
    for name, call_args, fast, slow in cases(args.n):
        fast(*call_args)  # compile
        t_fast = best_of(lambda: fast(*call_args), args.repeat)
        t_slow = best_of(lambda: slow(*call_args), args.repeat)
        print(f"{name:32s} {t_fast:10.4f} {t_slow:10.4f} {t_slow / t_fast:8.1f}")
    if args.pipeline:
        times = pipeline(args.n)
        print(f"{'theorem_bound d=2 (end to end)':32s} {times['numba']:10.4f} {times['numpy']:10.4f} "
              f"{times['numpy'] / times['numba']:8.1f}")


if __name__ == "__main__":
    main()
