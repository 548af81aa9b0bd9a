"""Benchmark the compiled pair-similarity kernel against the numpy fallback.

Times node_similarity_batch on all node pairs of seeded G(n, p) graphs and
checks that both backends return bitwise-identical output.

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --nodes 200 500 1000 --p 0.05
"""
import argparse
import time

import numpy as np

from linkpred._kernels import pure
from linkpred.oracles import random_graph

try:
    from linkpred._kernels import _simcore
except ImportError:
    _simcore = None


def batch_inputs(g):
    deg = g.degrees().astype(np.float64)
    with np.errstate(divide="ignore"):
        inv = 1.0 / np.log(deg)
    inv[deg < 2.0] = 0.0
    pu, pv = np.triu_indices(g.n_nodes, k=1)
    return g.indptr, g.indices, inv, pu.astype(np.int64), pv.astype(np.int64)


def best_of(fn, args, repeats):
    timings = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        timings.append(time.perf_counter() - t0)
    return out, min(timings)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, nargs="+", default=[100, 300, 600])
    ap.add_argument("--p", type=float, default=0.1, help="edge probability")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeats", type=int, default=3, help="keep the best time")
    args = ap.parse_args()

    if _simcore is None:
        print("compiled kernel not built; timing the fallback only")

    print(f"{'nodes':>6} {'pairs':>9} {'pure_ms':>9} {'compiled_ms':>12} {'speedup':>8}")
    rng = np.random.default_rng(args.seed)
    for n in args.nodes:
        g = random_graph(n, args.p, rng)
        inputs = batch_inputs(g)
        pairs = len(inputs[3])
        ref, t_pure = best_of(pure.node_similarity_batch, inputs, args.repeats)
        if _simcore is None:
            print(f"{g.n_nodes:>6} {pairs:>9} {1e3 * t_pure:>9.2f} {'-':>12} {'-':>8}")
            continue
        out, t_comp = best_of(_simcore.node_similarity_batch, inputs, args.repeats)
        if not np.array_equal(ref, out):
            raise SystemExit(f"backend mismatch at n={n}: outputs differ")
        print(
            f"{g.n_nodes:>6} {pairs:>9} {1e3 * t_pure:>9.2f} "
            f"{1e3 * t_comp:>12.2f} {t_pure / t_comp:>7.1f}x"
        )


if __name__ == "__main__":
    main()
