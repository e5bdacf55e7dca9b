"""Pure-numpy kernel implementations (fallback backend).

Mirrors the numba backend function-for-function; selected when
HYPERGCL_BACKEND=numpy or when numba is unavailable. All scatter
reductions use np.add.at / np.maximum.at, which apply updates in index
order and are therefore deterministic.
"""

import numpy as np

NAME = "numpy"


def _seg_ids(seg_ptr, nnz):
    nseg = seg_ptr.size - 1
    return np.repeat(np.arange(nseg, dtype=np.int64), np.diff(seg_ptr))


def seg_softmax_fwd(scores, mval, seg_ptr):
    """Masked segment softmax: w_t = mval_t * exp(scores_t - M) / denom.

    M is the per-segment max over ALL positions (masked ones included) so
    the mask-gradient term exp(scores_t - M)/denom stays finite. Segments
    whose masked weights sum to zero yield w = 0 and denom = 0.
    """
    nnz = scores.size
    ids = _seg_ids(seg_ptr, nnz)
    nseg = seg_ptr.size - 1
    m = np.full(nseg, -np.inf)
    np.maximum.at(m, ids, scores)
    m[~np.isfinite(m)] = 0.0  # empty segments
    softexp = np.exp(scores - m[ids])
    denom = np.zeros(nseg)
    np.add.at(denom, ids, mval * softexp)
    safe = np.where(denom[ids] > 0.0, denom[ids], 1.0)
    w = mval * softexp / safe
    return w, softexp, denom


def seg_softmax_bwd(dw, w, softexp, denom, seg_ptr):
    """Backward of seg_softmax_fwd; returns (dscores, dmval)."""
    nnz = w.size
    ids = _seg_ids(seg_ptr, nnz)
    nseg = seg_ptr.size - 1
    s = np.zeros(nseg)
    np.add.at(s, ids, dw * w)
    diff = dw - s[ids]
    dscores = w * diff
    safe = np.where(denom[ids] > 0.0, denom[ids], np.inf)
    dmval = (softexp / safe) * diff
    return dscores, dmval


def weighted_pool_fwd(w, v, src, seg_ptr):
    """out[s] = sum_{t in segment s} w_t * v[src_t]."""
    nseg = seg_ptr.size - 1
    ids = _seg_ids(seg_ptr, w.size)
    out = np.zeros((nseg, v.shape[1]))
    np.add.at(out, ids, w[:, None] * v[src])
    return out


def weighted_pool_bwd(dout, w, v, src, seg_ptr, nsrc):
    ids = _seg_ids(seg_ptr, w.size)
    gathered = dout[ids]
    dw = np.einsum("td,td->t", gathered, v[src])
    dv = np.zeros((nsrc, v.shape[1]))
    np.add.at(dv, src, w[:, None] * gathered)
    return dw, dv


def pair_score_fwd(sa, sb, ia, ib, slope, scale, bias):
    """r_t = scale * sum_c leaky_relu(sa[ia_t] * sb[ib_t])_c + bias_t."""
    u = sa[ia] * sb[ib]
    act = np.where(u > 0.0, u, slope * u)
    return scale * act.sum(axis=1) + bias


def pair_score_bwd(dr, sa, sb, ia, ib, slope, scale):
    u = sa[ia] * sb[ib]
    g = (dr * scale)[:, None] * np.where(u > 0.0, 1.0, slope)
    dsa = np.zeros_like(sa)
    dsb = np.zeros_like(sb)
    np.add.at(dsa, ia, g * sb[ib])
    np.add.at(dsb, ib, g * sa[ia])
    return dsa, dsb


def _bfs_dist_row(indptr, indices, src, n):
    # frontier-expansion BFS; structurally distinct from the queue-based oracle
    dist = np.full(n, -1, dtype=np.int64)
    dist[src] = 0
    frontier = np.array([src], dtype=np.int64)
    level = 0
    while frontier.size:
        level += 1
        nbrs = np.concatenate([indices[indptr[v]:indptr[v + 1]] for v in frontier])
        nbrs = np.unique(nbrs)
        nbrs = nbrs[dist[nbrs] < 0]
        dist[nbrs] = level
        frontier = nbrs
    return dist


def bfs_dist_row(indptr, indices, src, n):
    """Unweighted shortest-path distances from src; -1 for unreachable."""
    return _bfs_dist_row(indptr, indices, int(src), int(n))


def closeness_stats(indptr, indices, n):
    """Per node: (count of reachable other nodes, sum of distances to them)."""
    reach = np.zeros(n, dtype=np.int64)
    sumd = np.zeros(n, dtype=np.float64)
    for v in range(n):
        dist = _bfs_dist_row(indptr, indices, v, n)
        ok = dist > 0
        reach[v] = int(ok.sum())
        sumd[v] = float(dist[ok].sum())
    return reach, sumd


def contrast_fwd(zl, zr, src, dst, is_pos, anchor_ptr, eta, m):
    """InfoNCE with multiple positives over explicit per-anchor pair blocks.

    zl, zr are row-normalized embeddings; pairs are grouped by anchor via
    anchor_ptr. Returns (loss, pexp, num, den) with per-anchor
    max-stabilization folded into pexp.
    """
    n = anchor_ptr.size - 1
    s = np.einsum("td,td->t", zl[src], zr[dst])
    ids = _seg_ids(anchor_ptr, s.size)
    mx = np.full(n, -np.inf)
    np.maximum.at(mx, ids, s)
    mx[~np.isfinite(mx)] = 0.0
    pexp = np.exp((s - mx[ids]) / eta)
    num = np.zeros(n)
    np.add.at(num, ids, np.where(is_pos, pexp, 0.0))
    den = np.zeros(n)
    np.add.at(den, ids, pexp)
    occupied = np.diff(anchor_ptr) > 0
    logratio = np.zeros(n)
    logratio[occupied] = np.log(num[occupied]) - np.log(den[occupied])
    loss = -logratio.sum() / m
    return loss, pexp, num, den


def contrast_bwd(zl, zr, src, dst, is_pos, anchor_ptr, eta, m, pexp, num, den):
    ids = _seg_ids(anchor_ptr, src.size)
    ds = (pexp / den[ids] - np.where(is_pos, pexp / num[ids], 0.0)) / (eta * m)
    dzl = np.zeros_like(zl)
    dzr = np.zeros_like(zr)
    np.add.at(dzl, src, ds[:, None] * zr[dst])
    np.add.at(dzr, dst, ds[:, None] * zl[src])
    return dzl, dzr
