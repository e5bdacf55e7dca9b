import numpy as np
import pytest

from hypergcl.data import Graph, split_nodes
from hypergcl.datasets import synthetic_sbm
from hypergcl.model import HyperGCLModel
from hypergcl.train import TrainConfig, build_views_for_cfg


@pytest.fixture
def path3():
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def two_triangles():
    return Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


def tiny_cfg(**overrides):
    base = dict(k_nn=3, k_clusters=3, s=1, t=4, seed=1, dropout=0.0,
                epochs_max=5, patience=100)
    base.update(overrides)
    return TrainConfig(**base)


def make_instance(n_per_block=10, seed=3, **cfg_overrides):
    """Small two-block instance with all three views and a built model."""
    ds = synthetic_sbm([n_per_block, n_per_block], 0.7, 0.15, feature_dim=6,
                       seed=seed)
    cfg = tiny_cfg(**cfg_overrides)
    split = split_nodes(ds.labels, seed=cfg.seed)
    views = build_views_for_cfg(ds.graph, ds.features, cfg)
    model = HyperGCLModel(ds.graph, ds.features, split, views, cfg)
    return ds, cfg, split, views, model


@pytest.fixture(scope="session")
def small_instance():
    return make_instance()


def random_graph(rng, n, p):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < p]
    return Graph.from_edges(n, edges)
