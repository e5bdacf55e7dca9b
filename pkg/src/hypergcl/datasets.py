"""Dataset fixtures: synthetic stochastic-block-model graphs for offline
testing, ingestion of citation-style raw files (content + cites), and the
checksummed fetch command for the standard benchmark archives.
"""

import csv
import hashlib
import io
import logging
import os
import tarfile
import urllib.request
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import Graph, load_graph, load_features, load_labels, save_id_mapping
from .errors import ConfigError, ParseError

logger = logging.getLogger(__name__)

ARCHIVES = {
    "cora": "https://linqs-data.soe.ucsc.edu/public/lbc/cora.tgz",
    "citeseer": "https://linqs-data.soe.ucsc.edu/public/lbc/citeseer.tgz",
}


@dataclass
class DatasetBundle:
    name: str
    graph: Graph
    features: np.ndarray
    labels: np.ndarray


def data_root(override=None):
    """Dataset root directory; HYPERGCL_DATA_DIR overrides the default."""
    if override:
        return Path(override)
    return Path(os.environ.get("HYPERGCL_DATA_DIR", Path.home() / ".hypergcl" / "data"))


def synthetic_sbm(block_sizes, p_in, p_out, feature_dim=8, feature_noise=0.5,
                  seed=0):
    """Homophilous SBM with block-aligned Gaussian features.

    Each block gets a distinct mean vector (scaled one-hot-ish directions);
    features are mean + noise. Labels are the block ids.
    """
    rng = np.random.default_rng(seed)
    n = int(sum(block_sizes))
    labels = np.concatenate([np.full(sz, b, dtype=np.int64)
                             for b, sz in enumerate(block_sizes)])
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            p = p_in if labels[i] == labels[j] else p_out
            if rng.random() < p:
                edges.append((i, j))
    graph = Graph.from_edges(n, edges)
    k = len(block_sizes)
    means = np.zeros((k, feature_dim))
    for b in range(k):
        means[b, b % feature_dim] = 3.0
        means[b, (b + 1) % feature_dim] = -1.5
    x = means[labels] + feature_noise * rng.standard_normal((n, feature_dim))
    return DatasetBundle(name="synthetic_sbm", graph=graph, features=x,
                         labels=labels)


def load_generic(name, edge_path, feature_path, label_path, num_nodes):
    """Load a dataset from the canonical edge-list + CSV files."""
    graph = load_graph(edge_path, num_nodes)
    x = load_features(feature_path, num_nodes)
    labels = load_labels(label_path, num_nodes)
    return DatasetBundle(name=name, graph=graph, features=x, labels=labels)


def load_dataset_dir(name, root=None):
    """Load <root>/<name>/{edges.txt,features.csv,labels.csv,meta.csv}."""
    d = data_root(root) / name
    meta = d / "meta.csv"
    if not meta.exists():
        raise ConfigError(
            f"dataset {name!r} not found under {d}; run `hypergcl fetch-data "
            f"--dataset {name}` or point HYPERGCL_DATA_DIR at prepared files")
    with open(meta, "r", encoding="utf-8") as f:
        rows = dict(csv.reader(f))
    num_nodes = int(rows["num_nodes"])
    return load_generic(name, d / "edges.txt", d / "features.csv",
                        d / "labels.csv", num_nodes)


def ingest_citation_files(name, content_path, cites_path, out_dir):
    """Convert content/cites raw citation files to the canonical layout.

    content: <id> <feat_0..d-1> <class>; cites: <cited> <citing>. External
    ids are remapped to dense ints in content order; the mapping is saved.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ext_ids, feats, labels = [], [], []
    with open(content_path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) < 3:
                raise ParseError(f"{content_path}: line {lineno}: too few columns")
            ext_ids.append(parts[0])
            feats.append([float(v) for v in parts[1:-1]])
            labels.append(parts[-1])
    lut = {e: i for i, e in enumerate(ext_ids)}
    n = len(ext_ids)

    edges = []
    skipped = 0
    with open(cites_path, "r", encoding="utf-8") as f:
        for line in f:
            parts = line.split()
            if len(parts) != 2:
                continue
            a, b = parts
            if a in lut and b in lut:
                edges.append((lut[a], lut[b]))
            else:
                skipped += 1
    if skipped:
        logger.warning("%s: skipped %d citation lines with unknown ids",
                       name, skipped)

    with open(out_dir / "edges.txt", "w", encoding="utf-8") as f:
        f.write(f"# {name} citation edges\n")
        for u, v in edges:
            f.write(f"{u} {v}\n")
    with open(out_dir / "features.csv", "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        for row in feats:
            writer.writerow([int(v) if float(v).is_integer() else v for v in row])
    with open(out_dir / "labels.csv", "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        for lab in labels:
            writer.writerow([lab])
    save_id_mapping(out_dir / "idmap.csv", ext_ids)
    with open(out_dir / "meta.csv", "w", encoding="utf-8", newline="") as f:
        csv.writer(f).writerows([["num_nodes", n], ["num_classes",
                                                    len(set(labels))]])
    return n, len(edges)


def fetch_dataset(name, root=None):
    """Download, checksum, unpack, and ingest one of the known archives.

    The sha256 of each archive is recorded on first download and verified
    on later fetches (checksums.csv next to the dataset directories).
    """
    if name not in ARCHIVES:
        raise ConfigError(f"unknown dataset {name!r}; known: {sorted(ARCHIVES)}")
    root = data_root(root)
    root.mkdir(parents=True, exist_ok=True)
    url = ARCHIVES[name]
    logger.info("downloading %s", url)
    with urllib.request.urlopen(url, timeout=120) as resp:
        blob = resp.read()
    digest = hashlib.sha256(blob).hexdigest()
    _check_or_record_checksum(root / "checksums.csv", name, digest)

    content_path, cites_path = None, None
    with tarfile.open(fileobj=io.BytesIO(blob), mode="r:gz") as tar:
        tmp = root / f"_{name}_raw"
        tmp.mkdir(exist_ok=True)
        for member in tar.getmembers():
            base = os.path.basename(member.name)
            if base.endswith(".content") or base.endswith(".cites"):
                with tar.extractfile(member) as src, open(tmp / base, "wb") as dst:
                    dst.write(src.read())
                if base.endswith(".content"):
                    content_path = tmp / base
                else:
                    cites_path = tmp / base
    if content_path is None or cites_path is None:
        raise ParseError(f"{name}: archive missing .content/.cites members")
    n, m = ingest_citation_files(name, content_path, cites_path, root / name)
    logger.info("%s: %d nodes, %d citation lines ingested", name, n, m)
    return root / name


def _check_or_record_checksum(path, name, digest):
    known = {}
    if path.exists():
        with open(path, "r", encoding="utf-8") as f:
            known = dict(csv.reader(f))
    if name in known and known[name] != digest:
        raise ParseError(f"{name}: archive sha256 {digest} does not match "
                         f"recorded {known[name]}")
    known[name] = digest
    with open(path, "w", encoding="utf-8", newline="") as f:
        csv.writer(f).writerows(sorted(known.items()))
