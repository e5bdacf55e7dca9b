"""Construction of the three hypergraph views from graph structure and
node attributes: attribute-driven (k-NN + k-means), local (ego networks),
and global (overlapping communities plus high-centrality global nodes).

All builders are deterministic given (inputs, seed); every tie (neighbor
distance, cluster distance, centrality) is broken by ascending id.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .backend import K
from .communities import CommunityCover, detect_communities
from .data import Graph, Hypergraph
from .errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass
class AttributeViewConfig:
    k_nn: int = 50
    k_clusters: int = 60
    s: int = 2
    kmeans_iters: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.k_nn < 1:
            raise ConfigError(f"k_nn must be >= 1, got {self.k_nn}")
        if not (1 <= self.s <= self.k_clusters):
            raise ConfigError(f"need 1 <= s <= k_clusters, got s={self.s}, "
                              f"k_clusters={self.k_clusters}")


@dataclass
class GlobalViewConfig:
    n_g: int = 3
    detector: str = "wolp"
    detector_params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_g < 0:
            raise ConfigError(f"n_g must be >= 0, got {self.n_g}")


def pairwise_sq_dists(x, y):
    """Squared Euclidean distances, shape (len(x), len(y))."""
    xx = np.einsum("id,id->i", x, x)
    yy = np.einsum("id,id->i", y, y)
    d = xx[:, None] + yy[None, :] - 2.0 * (x @ y.T)
    np.maximum(d, 0.0, out=d)
    return d


def build_attribute_view(x, cfg: AttributeViewConfig):
    """Attribute-driven view: one k-NN hyperedge per node plus one
    hyperedge per k-means cluster (each node joins its s closest centers).
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    if cfg.k_nn >= n:
        raise ConfigError(f"k_nn={cfg.k_nn} must be < num_nodes={n}")

    d = pairwise_sq_dists(x, x)
    np.fill_diagonal(d, np.inf)
    ids = np.arange(n)
    hyperedges = []
    for i in range(n):
        order = np.lexsort((ids, d[i]))  # distance, then node id
        members = np.concatenate(([i], order[:cfg.k_nn]))
        hyperedges.append(np.sort(members))

    centers = _kmeans(x, cfg.k_clusters, cfg.kmeans_iters, cfg.seed)
    dc = pairwise_sq_dists(x, centers)
    cluster_ids = np.arange(cfg.k_clusters)
    members_per_cluster = [[] for _ in range(cfg.k_clusters)]
    for i in range(n):
        order = np.lexsort((cluster_ids, dc[i]))
        for c in order[:cfg.s]:
            members_per_cluster[c].append(i)
    for c in range(cfg.k_clusters):
        if not members_per_cluster[c]:
            logger.info("dropping empty cluster hyperedge %d", c)
            continue
        hyperedges.append(np.array(members_per_cluster[c], dtype=np.int64))
    return Hypergraph(num_nodes=n, hyperedges=hyperedges, view_tag="attribute")


def _kmeans(x, k, iters, seed):
    """Lloyd's algorithm with k-means++ seeding; returns final centers."""
    n = x.shape[0]
    rng = np.random.default_rng(seed)
    if k > n:
        raise ConfigError(f"k_clusters={k} exceeds num_nodes={n}")
    centers = np.empty((k, x.shape[1]))
    centers[0] = x[rng.integers(n)]
    closest = pairwise_sq_dists(x, centers[:1])[:, 0]
    for c in range(1, k):
        total = closest.sum()
        if total <= 0.0:
            centers[c] = x[rng.integers(n)]  # all points coincide with centers
        else:
            centers[c] = x[rng.choice(n, p=closest / total)]
        closest = np.minimum(closest, pairwise_sq_dists(x, centers[c:c + 1])[:, 0])

    assign = None
    for _ in range(iters):
        new_assign = np.argmin(pairwise_sq_dists(x, centers), axis=1)
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for c in range(k):
            mask = assign == c
            if mask.any():
                centers[c] = x[mask].mean(axis=0)
            # empty cluster keeps its previous center
    return centers


def build_local_view(g: Graph):
    """Local view: one hyperedge per node = its closed 1-hop neighborhood."""
    hyperedges = []
    for i in range(g.num_nodes):
        members = np.concatenate(([i], g.neighbors(i)))
        hyperedges.append(np.sort(members))
    return Hypergraph(num_nodes=g.num_nodes, hyperedges=hyperedges, view_tag="local")


def closeness_centrality(g: Graph):
    """Closeness with the Wasserman-Faust reachable-fraction scaling.

    score(v) = (n_reach / sum of BFS distances) * (n_reach / (n - 1));
    0 for isolated nodes and single-node graphs.
    """
    n = g.num_nodes
    scores = np.zeros(n)
    if n <= 1:
        return scores
    reach, sumd = K.closeness_stats(g.indptr, g.indices, n)
    ok = reach > 0
    scores[ok] = (reach[ok] / sumd[ok]) * (reach[ok] / (n - 1))
    return scores


def build_global_view(g: Graph, cover: CommunityCover, cfg: GlobalViewConfig):
    """Global view: one hyperedge per community, with the n_g highest
    closeness-centrality nodes (ties by node id) added to every hyperedge
    so the incidence structure stays connected.
    """
    if cfg.n_g > g.num_nodes:
        raise ConfigError(f"n_g={cfg.n_g} exceeds num_nodes={g.num_nodes}")
    if cfg.n_g == 0:
        hyperedges = [c.copy() for c in cover.communities]
    else:
        scores = closeness_centrality(g)
        order = np.lexsort((np.arange(g.num_nodes), -scores))
        global_nodes = order[:cfg.n_g]
        hyperedges = [np.union1d(c, global_nodes) for c in cover.communities]
    return Hypergraph(num_nodes=g.num_nodes, hyperedges=hyperedges, view_tag="global")


def build_views(g: Graph, x, attr_cfg: AttributeViewConfig,
                glob_cfg: GlobalViewConfig, seed=0):
    """Build (attribute, local, global) views; communities use the given seed."""
    h_a = build_attribute_view(x, attr_cfg)
    h_l = build_local_view(g)
    cover = detect_communities(g, {"detector": glob_cfg.detector,
                                   **glob_cfg.detector_params}, seed=seed)
    h_g = build_global_view(g, cover, glob_cfg)
    return h_a, h_l, h_g
