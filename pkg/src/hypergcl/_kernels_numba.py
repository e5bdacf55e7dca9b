"""Numba-jitted kernel implementations (default backend).

Hot inner loops of the pipeline: masked segment softmax and its backward,
incidence-weighted pooling, pairwise attention scores, BFS, and the
contrastive pair reductions. Scatter accumulations are kept serial so runs
are bit-reproducible; prange is used only where output rows are disjoint.
"""

import numpy as np
from numba import njit, prange

NAME = "numba"


@njit(cache=True)
def seg_softmax_fwd(scores, mval, seg_ptr):
    nnz = scores.size
    nseg = seg_ptr.size - 1
    w = np.zeros(nnz)
    softexp = np.empty(nnz)
    denom = np.zeros(nseg)
    for s in range(nseg):
        lo, hi = seg_ptr[s], seg_ptr[s + 1]
        if lo == hi:
            continue
        m = scores[lo]
        for t in range(lo + 1, hi):
            if scores[t] > m:
                m = scores[t]
        d = 0.0
        for t in range(lo, hi):
            e = np.exp(scores[t] - m)
            softexp[t] = e
            d += mval[t] * e
        denom[s] = d
        if d > 0.0:
            for t in range(lo, hi):
                w[t] = mval[t] * softexp[t] / d
    return w, softexp, denom


@njit(cache=True)
def seg_softmax_bwd(dw, w, softexp, denom, seg_ptr):
    nnz = w.size
    nseg = seg_ptr.size - 1
    dscores = np.zeros(nnz)
    dmval = np.zeros(nnz)
    for s in range(nseg):
        lo, hi = seg_ptr[s], seg_ptr[s + 1]
        if lo == hi or denom[s] <= 0.0:
            continue
        acc = 0.0
        for t in range(lo, hi):
            acc += dw[t] * w[t]
        for t in range(lo, hi):
            diff = dw[t] - acc
            dscores[t] = w[t] * diff
            dmval[t] = softexp[t] / denom[s] * diff
    return dscores, dmval


@njit(cache=True)
def weighted_pool_fwd(w, v, src, seg_ptr):
    nseg = seg_ptr.size - 1
    d = v.shape[1]
    out = np.zeros((nseg, d))
    for s in range(nseg):
        for t in range(seg_ptr[s], seg_ptr[s + 1]):
            r = src[t]
            wt = w[t]
            for c in range(d):
                out[s, c] += wt * v[r, c]
    return out


@njit(cache=True)
def weighted_pool_bwd(dout, w, v, src, seg_ptr, nsrc):
    nseg = seg_ptr.size - 1
    d = v.shape[1]
    dw = np.zeros(w.size)
    dv = np.zeros((nsrc, d))
    for s in range(nseg):
        for t in range(seg_ptr[s], seg_ptr[s + 1]):
            r = src[t]
            acc = 0.0
            for c in range(d):
                acc += dout[s, c] * v[r, c]
                dv[r, c] += w[t] * dout[s, c]
            dw[t] = acc
    return dw, dv


@njit(cache=True, parallel=True)
def pair_score_fwd(sa, sb, ia, ib, slope, scale, bias):
    nnz = ia.size
    d = sa.shape[1]
    r = np.empty(nnz)
    for t in prange(nnz):
        acc = 0.0
        a = ia[t]
        b = ib[t]
        for c in range(d):
            u = sa[a, c] * sb[b, c]
            acc += u if u > 0.0 else slope * u
        r[t] = scale * acc + bias[t]
    return r


@njit(cache=True)
def pair_score_bwd(dr, sa, sb, ia, ib, slope, scale):
    nnz = ia.size
    d = sa.shape[1]
    dsa = np.zeros_like(sa)
    dsb = np.zeros_like(sb)
    for t in range(nnz):
        a = ia[t]
        b = ib[t]
        g0 = dr[t] * scale
        for c in range(d):
            u = sa[a, c] * sb[b, c]
            g = g0 if u > 0.0 else g0 * slope
            dsa[a, c] += g * sb[b, c]
            dsb[b, c] += g * sa[a, c]
    return dsa, dsb


@njit(cache=True)
def bfs_dist_row(indptr, indices, src, n):
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    dist[src] = 0
    queue[0] = src
    head, tail = 0, 1
    while head < tail:
        v = queue[head]
        head += 1
        for k in range(indptr[v], indptr[v + 1]):
            u = indices[k]
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                queue[tail] = u
                tail += 1
    return dist


@njit(cache=True, parallel=True)
def closeness_stats(indptr, indices, n):
    reach = np.zeros(n, dtype=np.int64)
    sumd = np.zeros(n, dtype=np.float64)
    for v in prange(n):
        dist = bfs_dist_row(indptr, indices, v, n)
        r = 0
        s = 0.0
        for u in range(n):
            if dist[u] > 0:
                r += 1
                s += dist[u]
        reach[v] = r
        sumd[v] = s
    return reach, sumd


@njit(cache=True, parallel=True)
def contrast_fwd(zl, zr, src, dst, is_pos, anchor_ptr, eta, m):
    n = anchor_ptr.size - 1
    d = zl.shape[1]
    npair = src.size
    s = np.empty(npair)
    for t in prange(npair):
        acc = 0.0
        a = src[t]
        b = dst[t]
        for c in range(d):
            acc += zl[a, c] * zr[b, c]
        s[t] = acc
    pexp = np.empty(npair)
    num = np.zeros(n)
    den = np.zeros(n)
    total = 0.0
    for v in range(n):
        lo, hi = anchor_ptr[v], anchor_ptr[v + 1]
        if lo == hi:
            continue
        mx = s[lo]
        for t in range(lo + 1, hi):
            if s[t] > mx:
                mx = s[t]
        for t in range(lo, hi):
            e = np.exp((s[t] - mx) / eta)
            pexp[t] = e
            den[v] += e
            if is_pos[t]:
                num[v] += e
        total += np.log(num[v]) - np.log(den[v])
    return -total / m, pexp, num, den


@njit(cache=True)
def contrast_bwd(zl, zr, src, dst, is_pos, anchor_ptr, eta, m, pexp, num, den):
    n = anchor_ptr.size - 1
    d = zl.shape[1]
    dzl = np.zeros_like(zl)
    dzr = np.zeros_like(zr)
    for v in range(n):
        lo, hi = anchor_ptr[v], anchor_ptr[v + 1]
        if lo == hi:
            continue
        for t in range(lo, hi):
            ds = pexp[t] / den[v]
            if is_pos[t]:
                ds -= pexp[t] / num[v]
            ds /= eta * m
            a = src[t]
            b = dst[t]
            for c in range(d):
                dzl[a, c] += ds * zr[b, c]
                dzr[b, c] += ds * zl[a, c]
    return dzl, dzr
