"""Independent brute-force references used to verify the main pipeline.

Deliberately naive: queue BFS, dense double loops, no vectorization or
stabilization shortcuts, no code shared with the implementations they
check. Shipped in the library so the CLI `verify` command can re-run the
whole suite and emit a machine-readable report.
"""

import csv
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .data import Graph, Hypergraph

SIZE_CAP = 500


@dataclass
class OracleReport:
    case_id: str
    expected: float
    actual: float
    abs_err: float
    rel_err: float
    tol: float
    passed: bool

    @classmethod
    def compare(cls, case_id, expected, actual, tol):
        abs_err = abs(expected - actual)
        rel_err = abs_err / max(abs(expected), abs(actual), 1e-300)
        return cls(case_id=case_id, expected=float(expected),
                   actual=float(actual), abs_err=abs_err, rel_err=rel_err,
                   tol=tol, passed=bool(abs_err <= tol))


def bfs_all_pairs(g: Graph):
    """Exact unweighted all-pairs shortest paths; np.inf for unreachable."""
    n = g.num_nodes
    if n > SIZE_CAP:
        raise ValueError(f"oracle refuses graphs larger than {SIZE_CAP} nodes")
    dist = np.full((n, n), np.inf)
    for s in range(n):
        dist[s, s] = 0.0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in g.neighbors(v):
                u = int(u)
                if not np.isfinite(dist[s, u]):
                    dist[s, u] = dist[s, v] + 1.0
                    queue.append(u)
    return dist


def brute_closeness(g: Graph):
    """Closeness from the all-pairs matrix by the reachable-fraction rule."""
    n = g.num_nodes
    dist = bfs_all_pairs(g)
    scores = np.zeros(n)
    if n <= 1:
        return scores
    for v in range(n):
        reach = [dist[v, u] for u in range(n) if u != v and np.isfinite(dist[v, u])]
        if not reach:
            continue
        scores[v] = (len(reach) / sum(reach)) * (len(reach) / (n - 1))
    return scores


def brute_local_clustering(g: Graph, h: Hypergraph):
    """lc per (hyperedge, node) incidence via the dense adjacency matrix."""
    n = g.num_nodes
    adj = np.zeros((n, n), dtype=bool)
    adj[g.edge_u, g.edge_v] = True
    adj[g.edge_v, g.edge_u] = True
    out = []
    for he in h.hyperedges:
        sub = adj[np.ix_(he, he)]
        deg = sub.sum(axis=1)
        for k in range(he.size):
            if deg[k] <= 1:
                out.append(0.0)
                continue
            nbrs = np.flatnonzero(sub[k])
            links = sub[np.ix_(nbrs, nbrs)].sum() / 2
            out.append(2.0 * links / (deg[k] * (deg[k] - 1)))
    return np.array(out)


def brute_density(h: Hypergraph):
    return np.array([len(he) / h.num_nodes for he in h.hyperedges])


def brute_distinctiveness(h: Hypergraph):
    total = max(h.num_hyperedges, 1)
    out = np.zeros(h.num_nodes)
    for v in range(h.num_nodes):
        count = sum(1 for he in h.hyperedges if v in he)
        out[v] = 1.0 - count / total
    return out


def brute_cosine(x):
    """Dense cosine-similarity matrix by explicit loops (zero rows -> 0)."""
    n = len(x)
    sims = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            ni = math.sqrt(sum(a * a for a in x[i]))
            nj = math.sqrt(sum(a * a for a in x[j]))
            if ni == 0.0 or nj == 0.0:
                continue
            sims[i, j] = sum(a * b for a, b in zip(x[i], x[j])) / (ni * nj)
    return sims


def brute_distance_negatives(g: Graph, pos, t):
    """Farthest-first negatives per anchor from the all-pairs matrix."""
    n = g.num_nodes
    dist = bfs_all_pairs(g)
    out = []
    for v in range(n):
        cand = [u for u in range(n) if u not in set(int(p) for p in pos[v])]
        cand.sort(key=lambda u: (-(dist[v, u] if np.isfinite(dist[v, u]) else math.inf), u))
        out.append(np.array(cand[:t], dtype=np.int64))
    return out


def exhaustive_loss(sims, pos, neg, eta):
    """Direct double-loop evaluation of the multi-positive contrastive
    objective, without stabilization, accumulated in extended precision."""
    n = len(pos)
    if n > 50:
        raise ValueError("exhaustive loss oracle capped at 50 nodes")
    total = np.longdouble(0.0)
    for v in range(n):
        num = np.longdouble(0.0)
        den = np.longdouble(0.0)
        for u in pos[v]:
            num += np.exp(np.longdouble(sims[v, int(u)]) / np.longdouble(eta))
        for u in list(pos[v]) + list(neg[v]):
            den += np.exp(np.longdouble(sims[v, int(u)]) / np.longdouble(eta))
        total += np.log(num / den)
    return float(-total / n)


def finite_difference_grad(loss_fn, params, h=1e-5):
    """Central differences (f(x+h) - f(x-h)) / 2h per coordinate."""
    params = np.asarray(params, dtype=np.float64)
    grad = np.empty_like(params)
    for k in range(params.size):
        orig = params[k]
        params[k] = orig + h
        up = loss_fn(params)
        params[k] = orig - h
        down = loss_fn(params)
        params[k] = orig
        if not (np.isfinite(up) and np.isfinite(down)):
            raise ValueError(f"non-finite loss at coordinate {k}")
        grad[k] = (up - down) / (2.0 * h)
    return grad


def logistic_probe_accuracy(x, labels, train_idx, test_idx, seed=0):
    """Linear-probe reference: logistic regression on raw features."""
    from sklearn.linear_model import LogisticRegression

    clf = LogisticRegression(max_iter=2000, random_state=seed)
    clf.fit(x[train_idx], labels[train_idx])
    return 100.0 * float(clf.score(x[test_idx], labels[test_idx]))


def write_report_csv(reports, path):
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["case_id", "expected", "actual", "abs_err",
                         "rel_err", "tol", "passed"])
        for r in reports:
            writer.writerow([r.case_id, r.expected, r.actual, r.abs_err,
                             r.rel_err, r.tol, r.passed])
