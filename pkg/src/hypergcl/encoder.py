"""View-specific hypergraph attention encoders.

The attribute view uses plain two-level attention (node-to-hyperedge then
hyperedge-to-node); the structure views add learnable structural feature
encodings to the input layer and additive topology biases to the attention
scores. Forward and backward passes are written out explicitly over the
sparse incidence positions; the hot loops live in the kernel backend.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .backend import K
from .data import Graph, Hypergraph, IncidenceCOO

logger = logging.getLogger(__name__)

D_HID = 64
LEAKY_SLOPE = 0.01
N_BINS = 64


def glorot(rng, fan_in, fan_out):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def leaky_relu(x, slope=LEAKY_SLOPE):
    return np.where(x > 0.0, x, slope * x)


def normalized_adjacency(g: Graph):
    """Symmetric-normalized adjacency with self-loops, D^-1/2 (A+I) D^-1/2."""
    n = g.num_nodes
    rows = np.concatenate([g.edge_u, g.edge_v, np.arange(n)])
    cols = np.concatenate([g.edge_v, g.edge_u, np.arange(n)])
    vals = np.ones(rows.size)
    a = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    deg = np.asarray(a.sum(axis=1)).ravel()
    dinv = 1.0 / np.sqrt(np.maximum(deg, 1.0))
    return sp.diags(dinv) @ a @ sp.diags(dinv)


def distinctiveness_scores(h: Hypergraph):
    """d(v) = 1 - (#hyperedges containing v) / (#hyperedges)."""
    counts = np.zeros(h.num_nodes)
    for he in h.hyperedges:
        counts[he] += 1.0
    total = max(h.num_hyperedges, 1)
    return 1.0 - counts / total


def score_bins(scores, n_bins=N_BINS):
    """Min-max normalize to [0,1] and bucket into n_bins uniform bins."""
    scores = np.asarray(scores, dtype=np.float64)
    lo, hi = scores.min(), scores.max()
    norm = (scores - lo) / max(hi - lo, 1e-12)
    return np.minimum((norm * n_bins).astype(np.int64), n_bins - 1)


def clustering_bias(g: Graph, h: Hypergraph):
    """Per-incidence local clustering coefficient within each hyperedge's
    induced subgraph, in canonical (hyperedge, node) position order.
    lc = 2*I / (deg*(deg-1)); 0 when the node has <= 1 neighbor inside.
    """
    out = []
    for he in h.hyperedges:
        members = set(int(v) for v in he)
        inner = {int(v): members.intersection(int(u) for u in g.neighbors(v))
                 for v in he}
        for v in he:
            nbrs = inner[int(v)]
            gdeg = len(nbrs)
            if gdeg <= 1:
                out.append(0.0)
                continue
            links = sum(len(inner[u] & nbrs) for u in nbrs) // 2
            out.append(2.0 * links / (gdeg * (gdeg - 1)))
    return np.array(out, dtype=np.float64)


def density_bias(h: Hypergraph):
    """hd(e) = |e| / num_nodes, per hyperedge."""
    sizes = np.array([he.size for he in h.hyperedges], dtype=np.float64)
    return sizes / h.num_nodes


@dataclass
class ViewStatic:
    """Immutable per-view inputs to the encoder: incidence layout, biases,
    structural score bins, and the normalized adjacency for the GCN."""

    view_tag: str
    coo: IncidenceCOO
    shygan: bool
    lc: np.ndarray = None         # (nnz,) canonical order; None -> no bias
    hd: np.ndarray = None         # (num_hyperedges,); None -> no bias
    cent_bins: np.ndarray = None  # (n,) int bins of closeness centrality
    dist_bins: np.ndarray = None  # (n,) int bins of distinctiveness
    adj_norm: object = None       # scipy CSR, for the connectivity GCN
    use_lce: bool = True
    use_ce: bool = True
    use_de: bool = True


def build_view_static(g: Graph, h: Hypergraph, shygan, cent_bins=None,
                      use_lce=True, use_ce=True, use_de=True,
                      use_lc=True, use_hd=True, adj_norm=None):
    coo = IncidenceCOO(h)
    if not shygan:
        return ViewStatic(view_tag=h.view_tag, coo=coo, shygan=False)
    return ViewStatic(
        view_tag=h.view_tag,
        coo=coo,
        shygan=True,
        lc=clustering_bias(g, h) if use_lc else None,
        hd=density_bias(h) if use_hd else None,
        cent_bins=cent_bins,
        dist_bins=score_bins(distinctiveness_scores(h)),
        adj_norm=adj_norm,
        use_lce=use_lce,
        use_ce=use_ce,
        use_de=use_de,
    )


def init_view_params(rng, pfx, static: ViewStatic, d_in, heads=2, d_hid=D_HID):
    """Fresh parameter tensors for one view encoder, keyed by flat names."""
    params = {}
    params[f"{pfx}.input_proj"] = glorot(rng, d_in, d_hid)
    params[f"{pfx}.edge_emb"] = glorot(rng, max(static.coo.num_hyperedges, 1),
                                       d_hid)[:static.coo.num_hyperedges]
    for h in range(heads):
        for w in ("W1", "W2", "W3", "W4", "W5", "W6"):
            params[f"{pfx}.h{h}.{w}"] = glorot(rng, d_hid, d_hid)
    if static.shygan:
        if static.use_lce:
            params[f"{pfx}.gcn.W1"] = glorot(rng, d_in, d_hid)
            params[f"{pfx}.gcn.W2"] = glorot(rng, d_hid, d_hid)
        if static.use_ce:
            params[f"{pfx}.psi"] = glorot(rng, N_BINS, d_hid)
        if static.use_de:
            params[f"{pfx}.zeta"] = glorot(rng, N_BINS, d_hid)
    return params


def struct_features(params, pfx, static: ViewStatic, x0):
    """Structure-enriched input features (SHyGAN views); returns (P0, cache)."""
    p0 = x0 @ params[f"{pfx}.input_proj"]
    cache = {}
    if static.use_lce:
        ax0 = static.adj_norm @ x0
        pre1 = ax0 @ params[f"{pfx}.gcn.W1"]
        h1 = np.maximum(pre1, 0.0)
        ah1 = static.adj_norm @ h1
        p0 = p0 + ah1 @ params[f"{pfx}.gcn.W2"]
        cache.update(ax0=ax0, pre1=pre1, ah1=ah1)
    if static.use_ce:
        p0 = p0 + params[f"{pfx}.psi"][static.cent_bins]
    if static.use_de:
        p0 = p0 + params[f"{pfx}.zeta"][static.dist_bins]
    return p0, cache


def struct_features_backward(params, grads, pfx, static: ViewStatic, x0,
                             cache, dp0):
    _accum(grads, f"{pfx}.input_proj", x0.T @ dp0)
    if static.use_lce:
        _accum(grads, f"{pfx}.gcn.W2", cache["ah1"].T @ dp0)
        dah1 = dp0 @ params[f"{pfx}.gcn.W2"].T
        dh1 = static.adj_norm @ dah1  # adjacency is symmetric
        dpre1 = dh1 * (cache["pre1"] > 0.0)
        _accum(grads, f"{pfx}.gcn.W1", cache["ax0"].T @ dpre1)
    if static.use_ce:
        dpsi = np.zeros_like(params[f"{pfx}.psi"])
        np.add.at(dpsi, static.cent_bins, dp0)
        _accum(grads, f"{pfx}.psi", dpsi)
    if static.use_de:
        dzeta = np.zeros_like(params[f"{pfx}.zeta"])
        np.add.at(dzeta, static.dist_bins, dp0)
        _accum(grads, f"{pfx}.zeta", dzeta)


def encode_view(params, pfx, static: ViewStatic, x0, mval, dropout_masks=None,
                heads=2, d_hid=D_HID):
    """One attention layer over the masked incidence; returns (Z, cache).

    mval: per-position mask values in canonical order (binary in the hard
    forward). dropout_masks: {("n2h"|"h2n", head): (nnz,) inverted-dropout
    scales} or None.
    """
    coo = static.coo
    scale = 1.0 / np.sqrt(d_hid)
    if static.shygan:
        p0, struct_cache = struct_features(params, pfx, static, x0)
    else:
        p0 = x0 @ params[f"{pfx}.input_proj"]
        struct_cache = {}
    q0 = params[f"{pfx}.edge_emb"]
    lc = static.lc if static.lc is not None else np.zeros(coo.nnz)

    perm = coo.node_perm
    ni_n = coo.ni[perm]
    ej_n = coo.ej[perm]
    mval_n = mval[perm]
    if static.hd is not None and coo.num_hyperedges > 0:
        hd_n = static.hd[ej_n]
    else:
        hd_n = np.zeros(coo.nnz)

    cache = {"p0": p0, "q0": q0, "struct": struct_cache, "mval": mval,
             "mval_n": mval_n, "heads": []}

    # node -> hyperedge level, per head
    q_heads = []
    for h in range(heads):
        s2 = p0 @ params[f"{pfx}.h{h}.W2"]
        s3 = q0 @ params[f"{pfx}.h{h}.W3"]
        r = K.pair_score_fwd(s2, s3, coo.ni, coo.ej, LEAKY_SLOPE, scale, lc)
        gamma, softexp_e, denom_e = K.seg_softmax_fwd(r, mval, coo.edge_ptr)
        dmask_e = dropout_masks.get(("n2h", h)) if dropout_masks else None
        gamma_used = gamma * dmask_e if dmask_e is not None else gamma
        v1 = p0 @ params[f"{pfx}.h{h}.W1"]
        qh = K.weighted_pool_fwd(gamma_used, v1, coo.ni, coo.edge_ptr)
        q_heads.append(qh)
        cache["heads"].append({
            "s2": s2, "s3": s3, "gamma": gamma, "softexp_e": softexp_e,
            "denom_e": denom_e, "dmask_e": dmask_e, "gamma_used": gamma_used,
            "v1": v1,
        })
    q1 = sum(q_heads) / heads if q_heads else np.zeros((0, d_hid))
    cache["q1"] = q1

    # hyperedge -> node level, per head
    z_heads = []
    fallback = None
    for h in range(heads):
        s5 = q1 @ params[f"{pfx}.h{h}.W5"]
        s6 = p0 @ params[f"{pfx}.h{h}.W6"]
        y = K.pair_score_fwd(s5, s6, ej_n, ni_n, LEAKY_SLOPE, scale, hd_n)
        lam, softexp_n, denom_n = K.seg_softmax_fwd(y, mval_n, coo.node_ptr)
        if fallback is None:
            fallback = denom_n == 0.0  # nodes with no surviving membership
            if fallback.any():
                logger.debug("%s: %d nodes fell back to pass-through",
                             pfx, int(fallback.sum()))
        dmask_n = dropout_masks.get(("h2n", h)) if dropout_masks else None
        lam_used = lam * dmask_n if dmask_n is not None else lam
        v4 = q1 @ params[f"{pfx}.h{h}.W4"]
        zh = K.weighted_pool_fwd(lam_used, v4, ej_n, coo.node_ptr)
        if fallback.any():
            w1 = params[f"{pfx}.h{h}.W1"]
            w4 = params[f"{pfx}.h{h}.W4"]
            zh[fallback] = (p0[fallback] @ w1) @ w4
        z_heads.append(zh)
        cache["heads"][h].update({
            "s5": s5, "s6": s6, "lam": lam, "softexp_n": softexp_n,
            "denom_n": denom_n, "dmask_n": dmask_n, "lam_used": lam_used,
            "v4": v4,
        })
    z = sum(z_heads) / heads
    cache["fallback"] = fallback
    cache["ni_n"] = ni_n
    cache["ej_n"] = ej_n
    return z, cache


def encode_view_backward(params, grads, pfx, static: ViewStatic, x0, cache,
                         dz, heads=2, d_hid=D_HID):
    """Backward of encode_view; returns d(loss)/d(mask values) in canonical
    order and accumulates parameter gradients into ``grads``."""
    coo = static.coo
    scale = 1.0 / np.sqrt(d_hid)
    p0 = cache["p0"]
    q0 = cache["q0"]
    q1 = cache["q1"]
    fallback = cache["fallback"]
    ni_n, ej_n = cache["ni_n"], cache["ej_n"]

    dp0 = np.zeros_like(p0)
    dq1 = np.zeros_like(q1)
    dmval = np.zeros(coo.nnz)
    dmval_n = np.zeros(coo.nnz)

    for h in range(heads):
        hc = cache["heads"][h]
        dzh = dz / heads
        w1 = params[f"{pfx}.h{h}.W1"]
        w4 = params[f"{pfx}.h{h}.W4"]
        if fallback.any():
            dzh = dzh.copy()
            dfb = dzh[fallback]
            t = p0[fallback] @ w1
            _accum(grads, f"{pfx}.h{h}.W4", t.T @ dfb)
            dt = dfb @ w4.T
            _accum(grads, f"{pfx}.h{h}.W1", p0[fallback].T @ dt)
            dp0[fallback] += dt @ w1.T
            dzh[fallback] = 0.0
        dlam_used, dv4 = K.weighted_pool_bwd(
            dzh, hc["lam_used"], hc["v4"], ej_n, coo.node_ptr,
            coo.num_hyperedges)
        _accum(grads, f"{pfx}.h{h}.W4", q1.T @ dv4)
        dq1 += dv4 @ w4.T
        dlam = dlam_used * hc["dmask_n"] if hc["dmask_n"] is not None else dlam_used
        dy, dmv = K.seg_softmax_bwd(dlam, hc["lam"], hc["softexp_n"],
                                    hc["denom_n"], coo.node_ptr)
        dmval_n += dmv
        ds5, ds6 = K.pair_score_bwd(dy, hc["s5"], hc["s6"], ej_n, ni_n,
                                    LEAKY_SLOPE, scale)
        _accum(grads, f"{pfx}.h{h}.W5", q1.T @ ds5)
        dq1 += ds5 @ params[f"{pfx}.h{h}.W5"].T
        _accum(grads, f"{pfx}.h{h}.W6", p0.T @ ds6)
        dp0 += ds6 @ params[f"{pfx}.h{h}.W6"].T

    dmval[coo.node_perm] = dmval_n

    dq0 = np.zeros_like(q0)
    for h in range(heads):
        hc = cache["heads"][h]
        dqh = dq1 / heads
        dgamma_used, dv1 = K.weighted_pool_bwd(
            dqh, hc["gamma_used"], hc["v1"], coo.ni, coo.edge_ptr,
            coo.num_nodes)
        _accum(grads, f"{pfx}.h{h}.W1", p0.T @ dv1)
        dp0 += dv1 @ params[f"{pfx}.h{h}.W1"].T
        dgamma = (dgamma_used * hc["dmask_e"]
                  if hc["dmask_e"] is not None else dgamma_used)
        dr, dmv = K.seg_softmax_bwd(dgamma, hc["gamma"], hc["softexp_e"],
                                    hc["denom_e"], coo.edge_ptr)
        dmval += dmv
        ds2, ds3 = K.pair_score_bwd(dr, hc["s2"], hc["s3"], coo.ni, coo.ej,
                                    LEAKY_SLOPE, scale)
        _accum(grads, f"{pfx}.h{h}.W2", p0.T @ ds2)
        dp0 += ds2 @ params[f"{pfx}.h{h}.W2"].T
        _accum(grads, f"{pfx}.h{h}.W3", q0.T @ ds3)
        dq0 += ds3 @ params[f"{pfx}.h{h}.W3"].T

    _accum(grads, f"{pfx}.edge_emb", dq0)
    if static.shygan:
        struct_features_backward(params, grads, pfx, static, x0,
                                 cache["struct"], dp0)
    else:
        _accum(grads, f"{pfx}.input_proj", x0.T @ dp0)
    return dmval


def _accum(grads, name, value):
    if name in grads:
        grads[name] += value
    else:
        grads[name] = value
