"""Core data model: graphs, hypergraphs, features, labels, splits, file ingestion.

Node ids are dense integers 0..num_nodes-1 everywhere. Loaders that accept
arbitrary external ids remap them and persist the mapping as a sidecar CSV.
"""

import csv
import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ContractViolation

logger = logging.getLogger(__name__)


class Graph:
    """Simple undirected attributed graph with CSR adjacency.

    Edges are stored once with u < v; the adjacency is symmetric by
    construction. Weights default to 1.0 and are only consumed by the
    community detector.
    """

    def __init__(self, num_nodes, edge_u, edge_v, edge_w):
        self.num_nodes = int(num_nodes)
        self.edge_u = np.asarray(edge_u, dtype=np.int64)
        self.edge_v = np.asarray(edge_v, dtype=np.int64)
        self.edge_w = np.asarray(edge_w, dtype=np.float64)
        self._build_adjacency()

    @classmethod
    def from_edges(cls, num_nodes, edges):
        """Build a graph from an iterable of (u, v) or (u, v, w) tuples.

        Self-loops are dropped with a warning; duplicate undirected edges
        are collapsed (first weight wins).
        """
        seen = {}
        for e in edges:
            if len(e) == 2:
                u, v = e
                w = 1.0
            else:
                u, v, w = e
            u, v = int(u), int(v)
            if not (0 <= u < num_nodes and 0 <= v < num_nodes):
                raise ParseError(f"node id out of range [0, {num_nodes}): edge ({u}, {v})")
            if u == v:
                logger.warning("dropping self-loop at node %d", u)
                continue
            key = (u, v) if u < v else (v, u)
            if key not in seen:
                seen[key] = float(w)
        keys = sorted(seen)
        eu = np.array([k[0] for k in keys], dtype=np.int64)
        ev = np.array([k[1] for k in keys], dtype=np.int64)
        ew = np.array([seen[k] for k in keys], dtype=np.float64)
        return cls(num_nodes, eu, ev, ew)

    def _build_adjacency(self):
        n = self.num_nodes
        deg = np.zeros(n, dtype=np.int64)
        np.add.at(deg, self.edge_u, 1)
        np.add.at(deg, self.edge_v, 1)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        indices = np.empty(indptr[-1], dtype=np.int64)
        weights = np.empty(indptr[-1], dtype=np.float64)
        cursor = indptr[:-1].copy()
        for u, v, w in zip(self.edge_u, self.edge_v, self.edge_w):
            indices[cursor[u]] = v
            weights[cursor[u]] = w
            cursor[u] += 1
            indices[cursor[v]] = u
            weights[cursor[v]] = w
            cursor[v] += 1
        # sort each neighbor list (weights follow)
        for i in range(n):
            lo, hi = indptr[i], indptr[i + 1]
            order = np.argsort(indices[lo:hi], kind="stable")
            indices[lo:hi] = indices[lo:hi][order]
            weights[lo:hi] = weights[lo:hi][order]
        self.indptr = indptr
        self.indices = indices
        self.weights = weights

    @property
    def num_edges(self):
        return len(self.edge_u)

    def neighbors(self, v):
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def neighbor_weights(self, v):
        return self.weights[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v):
        return int(self.indptr[v + 1] - self.indptr[v])

    def __repr__(self):
        return f"Graph(num_nodes={self.num_nodes}, num_edges={self.num_edges})"


@dataclass
class Hypergraph:
    """Node set plus hyperedge -> node-set incidence for one view."""

    num_nodes: int
    hyperedges: list          # list of sorted int64 arrays
    view_tag: str             # one of {"attribute", "local", "global"}
    _memberships: list = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        clean = []
        for he in self.hyperedges:
            arr = np.unique(np.asarray(he, dtype=np.int64))
            if arr.size == 0:
                raise ContractViolation("empty hyperedge")
            if arr[0] < 0 or arr[-1] >= self.num_nodes:
                raise ContractViolation(
                    f"hyperedge node id out of range [0, {self.num_nodes})")
            clean.append(arr)
        self.hyperedges = clean

    @property
    def num_hyperedges(self):
        return len(self.hyperedges)

    @property
    def node_memberships(self):
        """node id -> sorted array of hyperedge ids (exact incidence transpose)."""
        if self._memberships is None:
            buckets = [[] for _ in range(self.num_nodes)]
            for j, he in enumerate(self.hyperedges):
                for i in he:
                    buckets[int(i)].append(j)
            self._memberships = [np.array(b, dtype=np.int64) for b in buckets]
        return self._memberships


class IncidenceCOO:
    """Sparse incidence positions of a hypergraph, in the two orders the
    encoder consumes: grouped by hyperedge and grouped by node.

    Canonical position order is sorted by (hyperedge, node); ``node_perm``
    maps canonical positions into node-grouped order.
    """

    def __init__(self, h: Hypergraph):
        ni, ej = [], []
        for j, he in enumerate(h.hyperedges):
            ej.append(np.full(he.size, j, dtype=np.int64))
            ni.append(he)
        self.num_nodes = h.num_nodes
        self.num_hyperedges = h.num_hyperedges
        self.ni = np.concatenate(ni) if ni else np.zeros(0, dtype=np.int64)
        self.ej = np.concatenate(ej) if ej else np.zeros(0, dtype=np.int64)
        self.nnz = self.ni.size
        counts_e = np.bincount(self.ej, minlength=self.num_hyperedges)
        self.edge_ptr = np.zeros(self.num_hyperedges + 1, dtype=np.int64)
        np.cumsum(counts_e, out=self.edge_ptr[1:])
        self.node_perm = np.lexsort((self.ej, self.ni))
        counts_n = np.bincount(self.ni, minlength=self.num_nodes)
        self.node_ptr = np.zeros(self.num_nodes + 1, dtype=np.int64)
        np.cumsum(counts_n, out=self.node_ptr[1:])


@dataclass
class LabeledSplit:
    labels: np.ndarray        # node id -> class id
    train: np.ndarray
    val: np.ndarray
    test: np.ndarray
    num_classes: int


def load_graph(path, num_nodes):
    """Parse a whitespace-separated edge list file into a Graph.

    Each non-comment line is "u v" or "u v w"; ``#`` starts a comment.
    Duplicate lines are collapsed and a missing weight defaults to 1.0.

    Raises
    ------
    ParseError
        On a malformed line (message carries the 1-based line number) or a
        node id outside [0, num_nodes).
    """
    edges = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise ParseError(f"{path}: line {lineno}: expected 'u v' or 'u v w', got {raw!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: {exc}") from None
            if not (0 <= u < num_nodes and 0 <= v < num_nodes):
                raise ParseError(
                    f"{path}: line {lineno}: node id out of range [0, {num_nodes})")
            if not np.isfinite(w):
                raise ParseError(f"{path}: line {lineno}: non-finite weight")
            edges.append((u, v, w))
    return Graph.from_edges(num_nodes, edges)


def load_features(path, num_nodes):
    """Load a dense feature matrix from CSV (header row optional, row = node id)."""
    rows = _read_numeric_csv(path)
    x = np.asarray(rows, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[0] != num_nodes:
        raise ParseError(f"{path}: expected {num_nodes} rows, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise ParseError(f"{path}: non-finite feature value")
    return x


def load_labels(path, num_nodes):
    """Load per-node class labels from a one-column CSV (row index = node id).

    String labels are mapped to dense class ids in lexicographic order.
    """
    with open(path, "r", encoding="utf-8") as f:
        raw = [r for r in csv.reader(f) if r and any(cell.strip() for cell in r)]
    if raw and not _is_number(raw[0][-1]):
        header_like = raw[0][-1]
        # one string value could be a header or a class name; treat the first
        # row as header only when row count is num_nodes + 1
        if len(raw) == num_nodes + 1:
            logger.info("treating first label row %r as header", header_like)
            raw = raw[1:]
    if len(raw) != num_nodes:
        raise ParseError(f"{path}: expected {num_nodes} label rows, got {len(raw)}")
    values = [r[-1].strip() for r in raw]
    if all(_is_number(v) for v in values):
        labels = np.array([int(float(v)) for v in values], dtype=np.int64)
    else:
        classes = sorted(set(values))
        lut = {c: i for i, c in enumerate(classes)}
        labels = np.array([lut[v] for v in values], dtype=np.int64)
    if labels.min() < 0:
        raise ParseError(f"{path}: negative class id")
    return labels


def save_id_mapping(path, external_ids):
    """Persist the external-id -> internal-id mapping as a two-column CSV."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["external_id", "internal_id"])
        for i, ext in enumerate(external_ids):
            writer.writerow([ext, i])


def load_id_mapping(path):
    with open(path, "r", encoding="utf-8") as f:
        reader = csv.reader(f)
        next(reader)
        return {row[0]: int(row[1]) for row in reader if row}


def split_nodes(labels, ratios=(0.1, 0.1, 0.8), seed=0):
    """Deterministic train/val/test node split.

    Stratified per class when every class has >= 10 members, otherwise a
    plain shuffle. A class with fewer than 3 members triggers a warning and
    the plain-shuffle fallback.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {ratios}")
    n = labels.size
    num_classes = int(labels.max()) + 1 if n else 0
    counts = np.bincount(labels, minlength=num_classes)
    rng = np.random.default_rng(seed)

    if counts.size and counts.min() < 3:
        logger.warning(
            "class %d has only %d members; falling back to plain shuffle",
            int(counts.argmin()), int(counts.min()))
    if counts.size and counts.min() >= 10:
        train, val, test = [], [], []
        for c in range(num_classes):
            members = np.flatnonzero(labels == c)
            members = members[rng.permutation(members.size)]
            n_tr = int(round(ratios[0] * members.size))
            n_va = int(round(ratios[1] * members.size))
            train.append(members[:n_tr])
            val.append(members[n_tr:n_tr + n_va])
            test.append(members[n_tr + n_va:])
        train = np.sort(np.concatenate(train))
        val = np.sort(np.concatenate(val))
        test = np.sort(np.concatenate(test))
    else:
        perm = rng.permutation(n)
        n_tr = int(round(ratios[0] * n))
        n_va = int(round(ratios[1] * n))
        train = np.sort(perm[:n_tr])
        val = np.sort(perm[n_tr:n_tr + n_va])
        test = np.sort(perm[n_tr + n_va:])
    return LabeledSplit(labels=labels, train=train, val=val, test=test,
                        num_classes=num_classes)


def incidence_of(h: Hypergraph):
    """Binary incidence matrix, shape (num_nodes, num_hyperedges)."""
    a = np.zeros((h.num_nodes, h.num_hyperedges), dtype=np.uint8)
    for j, he in enumerate(h.hyperedges):
        a[he, j] = 1
    return a


def hypergraph_from_incidence(a, view_tag):
    """Inverse of incidence_of (round-trip helper)."""
    a = np.asarray(a)
    hyperedges = [np.flatnonzero(a[:, j]).astype(np.int64) for j in range(a.shape[1])]
    return Hypergraph(num_nodes=a.shape[0], hyperedges=hyperedges, view_tag=view_tag)


def save_hypergraph(h: Hypergraph, path):
    """Text format: '#view=<tag>' header, one hyperedge per line of node ids."""
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"#view={h.view_tag}\n")
        for he in h.hyperedges:
            f.write(" ".join(str(int(i)) for i in he) + "\n")


def load_hypergraph(path, num_nodes):
    view_tag = None
    hyperedges = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if line.startswith("#"):
                if line.startswith("#view="):
                    view_tag = line.split("=", 1)[1]
                continue
            if not line:
                continue
            try:
                ids = [int(t) for t in line.split()]
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: {exc}") from None
            hyperedges.append(np.array(ids, dtype=np.int64))
    if view_tag is None:
        raise ParseError(f"{path}: missing '#view=' header")
    return Hypergraph(num_nodes=num_nodes, hyperedges=hyperedges, view_tag=view_tag)


def hypergraph_manifest(views, config_hash):
    """Count summary used by the CLI manifest (JSON-serializable)."""
    counts = {f"num_hyperedges_{v.view_tag}": v.num_hyperedges for v in views}
    counts["num_nodes"] = views[0].num_nodes if views else 0
    counts["config_hash"] = config_hash
    return counts


def write_json(path, obj):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(obj, f, indent=2, sort_keys=True)
        f.write("\n")


def _read_numeric_csv(path):
    with open(path, "r", encoding="utf-8") as f:
        reader = csv.reader(f)
        rows = [r for r in reader if r and any(cell.strip() for cell in r)]
    if not rows:
        raise ParseError(f"{path}: empty file")
    if not all(_is_number(c) for c in rows[0]):
        rows = rows[1:]
    out = []
    for i, r in enumerate(rows):
        try:
            out.append([float(c) for c in r])
        except ValueError as exc:
            raise ParseError(f"{path}: row {i}: {exc}") from None
    return out


def _is_number(s):
    try:
        float(s)
        return True
    except ValueError:
        return False
