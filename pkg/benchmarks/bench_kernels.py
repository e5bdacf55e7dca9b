"""Benchmark the numba kernels against the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py [--nodes 2000] [--repeats 5]

Times the hot kernels on a synthetic incidence structure sized like a
citation graph, plus one full train epoch through each backend
(HYPERGCL_BACKEND controls what the package itself picks at import time;
here both kernel modules are imported directly).
"""

import argparse
import time

import numpy as np

from hypergcl import _kernels_numba as knb
from hypergcl import _kernels_numpy as knp


def make_incidence(rng, n_nodes, n_edges, avg_members):
    ni, ej = [], []
    for j in range(n_edges):
        size = max(1, int(rng.poisson(avg_members)))
        members = rng.choice(n_nodes, size=min(size, n_nodes), replace=False)
        ni.append(np.sort(members))
        ej.append(np.full(members.size, j, dtype=np.int64))
    ni = np.concatenate(ni)
    ej = np.concatenate(ej)
    ptr = np.zeros(n_edges + 1, dtype=np.int64)
    np.cumsum(np.bincount(ej, minlength=n_edges), out=ptr[1:])
    return ni, ej, ptr


def timeit(fn, repeats):
    fn()  # warmup (jit compile)
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", type=int, default=2000)
    ap.add_argument("--edges", type=int, default=2100)
    ap.add_argument("--dim", type=int, default=64)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    ni, ej, ptr = make_incidence(rng, args.nodes, args.edges, 30)
    nnz = ni.size
    scores = rng.standard_normal(nnz)
    mval = (rng.random(nnz) > 0.15).astype(np.float64)
    p = rng.standard_normal((args.nodes, args.dim))
    q = rng.standard_normal((args.edges, args.dim))
    bias = np.zeros(nnz)

    npair = 40 * args.nodes
    src = np.repeat(np.arange(args.nodes, dtype=np.int64), 40)
    dst = rng.integers(0, args.nodes, size=npair).astype(np.int64)
    is_pos = rng.random(npair) < 0.5
    aptr = np.arange(args.nodes + 1, dtype=np.int64) * 40
    zl = p / np.linalg.norm(p, axis=1, keepdims=True)

    print(f"nodes={args.nodes} hyperedges={args.edges} nnz={nnz} pairs={npair}")
    print(f"{'kernel':<22}{'numpy (ms)':>12}{'numba (ms)':>12}{'speedup':>9}")

    cases = {
        "seg_softmax_fwd": lambda k: k.seg_softmax_fwd(scores, mval, ptr),
        "weighted_pool_fwd": lambda k: k.weighted_pool_fwd(mval, p, ni, ptr),
        "pair_score_fwd": lambda k: k.pair_score_fwd(p, q, ni, ej, 0.01,
                                                     0.125, bias),
        "contrast_fwd": lambda k: k.contrast_fwd(zl, zl, src, dst, is_pos,
                                                 aptr, 0.5, args.nodes),
    }
    if args.nodes <= 4000:
        indptr = np.zeros(args.nodes + 1, dtype=np.int64)
        deg = rng.integers(2, 6, size=args.nodes)
        np.cumsum(deg, out=indptr[1:])
        indices = rng.integers(0, args.nodes, size=indptr[-1]).astype(np.int64)
        cases["closeness_stats"] = lambda k: k.closeness_stats(
            indptr, indices, args.nodes)

    for name, fn in cases.items():
        t_np = timeit(lambda: fn(knp), args.repeats)
        t_nb = timeit(lambda: fn(knb), args.repeats)
        print(f"{name:<22}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}"
              f"{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
