"""Topology-aware contrastive objective: multi-positive sets from graph
and hypergraph neighborhoods, distance- and similarity-based negative
sampling, and the temperature-scaled pairwise view losses.
"""

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .backend import K
from .data import Graph
from .errors import ContractViolation

logger = logging.getLogger(__name__)


@dataclass
class SampleSets:
    """Per-anchor positives (sets) and ordered negatives (length <= t)."""

    pos: list                 # node id -> sorted int64 array (always contains the anchor)
    neg: list                 # node id -> ordered int64 array
    strategy: str             # "distance" or "similarity"
    t: int = 25
    eta: float = 0.5
    _flat: tuple = field(default=None, repr=False, compare=False)

    @property
    def flat_pairs(self):
        """(src, dst, is_pos, anchor_ptr) arrays over all anchor pair blocks."""
        if self._flat is None:
            n = len(self.pos)
            src, dst, is_pos = [], [], []
            ptr = np.zeros(n + 1, dtype=np.int64)
            for v in range(n):
                p, q = self.pos[v], self.neg[v]
                src.append(np.full(p.size + q.size, v, dtype=np.int64))
                dst.append(p)
                dst.append(q)
                is_pos.append(np.ones(p.size, dtype=np.bool_))
                is_pos.append(np.zeros(q.size, dtype=np.bool_))
                ptr[v + 1] = ptr[v] + p.size + q.size
            self._flat = (np.concatenate(src), np.concatenate(dst),
                          np.concatenate(is_pos), ptr)
        return self._flat

    def to_json(self, path):
        obj = {str(v): {"pos": self.pos[v].tolist(), "neg": self.neg[v].tolist()}
               for v in range(len(self.pos))}
        with open(path, "w", encoding="utf-8") as f:
            json.dump(obj, f)
            f.write("\n")


def build_positive_sets(g: Graph, views):
    """pos(v) = {v} u graph neighbors u nodes co-appearing with v in any
    hyperedge of any (un-augmented) view."""
    n = g.num_nodes
    pieces = [[np.array([v], dtype=np.int64), g.neighbors(v)] for v in range(n)]
    for h in views:
        for he in h.hyperedges:
            for v in he:
                pieces[int(v)].append(he)
    return [np.unique(np.concatenate(p)) for p in pieces]


def sample_negatives_distance(g: Graph, pos, t):
    """Top-t non-positives ranked farthest-first by BFS hop distance;
    unreachable nodes come first, ties break by ascending node id."""
    n = g.num_nodes
    ids = np.arange(n)
    out = []
    for v in range(n):
        dist = K.bfs_dist_row(g.indptr, g.indices, v, n)
        mask = np.ones(n, dtype=bool)
        mask[pos[v]] = False
        cand = ids[mask]
        d = dist[cand].astype(np.float64)
        d[d < 0] = np.inf  # unreachable ranks first
        order = np.lexsort((cand, -d))
        chosen = cand[order[:t]]
        if chosen.size < t:
            logger.debug("anchor %d has only %d negative candidates", v, chosen.size)
        out.append(chosen)
    return out


def sample_negatives_similarity(x, pos, t):
    """Top-t non-positives ranked by ascending cosine similarity to the
    anchor's raw attribute vector; zero rows get similarity 0."""
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    norms = np.linalg.norm(x, axis=1)
    xh = np.zeros_like(x)
    nz = norms > 0.0
    xh[nz] = x[nz] / norms[nz, None]
    ids = np.arange(n)
    out = []
    chunk = 512
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        sims = xh[lo:hi] @ xh.T
        for v in range(lo, hi):
            mask = np.ones(n, dtype=bool)
            mask[pos[v]] = False
            cand = ids[mask]
            order = np.lexsort((cand, sims[v - lo][cand]))
            chosen = cand[order[:t]]
            if chosen.size < t:
                logger.debug("anchor %d has only %d negative candidates",
                             v, chosen.size)
            out.append(chosen)
    return out


def build_sample_sets(g: Graph, views, x, strategy, t=25, eta=0.5):
    pos = build_positive_sets(g, views)
    if strategy == "distance":
        neg = sample_negatives_distance(g, pos, t)
    elif strategy == "similarity":
        neg = sample_negatives_similarity(x, pos, t)
    else:
        raise ValueError(f"unknown negative strategy {strategy!r}")
    for v in range(g.num_nodes):
        assert v not in neg[v]
    return SampleSets(pos=pos, neg=neg, strategy=strategy, t=t, eta=eta)


def normalize_rows(z):
    """Row-normalize with a smooth epsilon; returns (zhat, norms)."""
    nrm = np.sqrt(np.einsum("id,id->i", z, z) + 1e-24)
    return z / nrm[:, None], nrm


def normalize_rows_backward(zhat, nrm, dzhat):
    dot = np.einsum("id,id->i", dzhat, zhat)
    return (dzhat - zhat * dot[:, None]) / nrm[:, None]


def pairwise_loss_fwd(zl_hat, zr_hat, samples: SampleSets):
    """Multi-positive InfoNCE between two views' normalized embeddings."""
    if not (np.all(np.isfinite(zl_hat)) and np.all(np.isfinite(zr_hat))):
        raise ContractViolation("non-finite embeddings in contrastive loss")
    src, dst, is_pos, ptr = samples.flat_pairs
    m = len(samples.pos)
    loss, pexp, num, den = K.contrast_fwd(zl_hat, zr_hat, src, dst, is_pos,
                                          ptr, samples.eta, m)
    return loss, (pexp, num, den)


def pairwise_loss_bwd(zl_hat, zr_hat, samples: SampleSets, cache):
    src, dst, is_pos, ptr = samples.flat_pairs
    pexp, num, den = cache
    m = len(samples.pos)
    return K.contrast_bwd(zl_hat, zr_hat, src, dst, is_pos, ptr, samples.eta,
                          m, pexp, num, den)


def pairwise_loss(z_left, z_right, samples: SampleSets):
    """Contract-level entry point: cosine similarities, stabilized softmax
    ratio, averaged over all nodes."""
    zl, _ = normalize_rows(np.asarray(z_left, dtype=np.float64))
    zr, _ = normalize_rows(np.asarray(z_right, dtype=np.float64))
    loss, _ = pairwise_loss_fwd(zl, zr, samples)
    return loss


def dense_infonce_fwd(zl_hat, zr_hat, eta):
    """Self-positive / all-others-negative InfoNCE (topology-free fallback
    used by the contrastive-ablation mode). Dense similarity matrix."""
    n = zl_hat.shape[0]
    s = zl_hat @ zr_hat.T
    mx = s.max(axis=1, keepdims=True)
    e = np.exp((s - mx) / eta)
    den = e.sum(axis=1)
    num = e[np.arange(n), np.arange(n)]
    loss = -(np.log(num) - np.log(den)).sum() / n
    return loss, (e, den)


def dense_infonce_bwd(zl_hat, zr_hat, eta, cache):
    e, den = cache
    n = zl_hat.shape[0]
    ds = e / den[:, None]
    ds[np.arange(n), np.arange(n)] -= 1.0
    ds /= eta * n
    return ds @ zr_hat, ds.T @ zl_hat


def supervised_loss_fwd(logits, labels, nodes):
    """Mean cross-entropy over the given node set; returns (loss, probs)."""
    sub = logits[nodes]
    sub = sub - sub.max(axis=1, keepdims=True)
    e = np.exp(sub)
    probs = e / e.sum(axis=1, keepdims=True)
    picked = probs[np.arange(nodes.size), labels[nodes]]
    loss = -np.log(np.maximum(picked, 1e-300)).mean()
    return loss, probs


def supervised_loss_bwd(logits, labels, nodes, probs):
    dlogits = np.zeros_like(logits)
    g = probs.copy()
    g[np.arange(nodes.size), labels[nodes]] -= 1.0
    dlogits[nodes] = g / nodes.size
    return dlogits


def total_loss(z_a, z_l, z_g, samples: SampleSets, logits_supervised, split):
    """Sum of the three pairwise view losses plus supervised cross-entropy.

    Returns (total, components dict). Views passed as None are skipped
    (their pairwise terms drop out).
    """
    comps = {}
    hats = {}
    for tag, z in (("a", z_a), ("l", z_l), ("g", z_g)):
        if z is not None:
            hats[tag] = normalize_rows(np.asarray(z, dtype=np.float64))[0]
    for left, right in (("a", "l"), ("g", "l"), ("a", "g")):
        if left in hats and right in hats:
            loss, _ = pairwise_loss_fwd(hats[left], hats[right], samples)
            comps[f"contrast_{left}{right}"] = loss
    sup, _ = supervised_loss_fwd(logits_supervised, split.labels, split.train)
    comps["supervised"] = sup
    return sum(comps.values()), comps
