"""End-to-end optimization, evaluation, multi-seed repetition, ablations,
and the global-node sweep.
"""

import copy
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .data import Graph, split_nodes
from .errors import ConfigError, DivergenceError
from .model import HyperGCLModel
from .views import (AttributeViewConfig, GlobalViewConfig, build_attribute_view,
                    build_global_view, build_local_view)
from .communities import detect_communities

logger = logging.getLogger(__name__)

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass
class TrainConfig:
    lr: float = 0.001
    dropout: float = 0.1
    epochs_max: int = 1500
    patience: int = 100
    seed: int = 0
    negative_strategy: str = "distance"
    t: int = 25
    eta: float = 0.5
    tau: float = 0.2
    theta: float = 0.8
    heads: int = 2
    d_hid: int = 64
    k_nn: int = 50
    k_clusters: int = 60
    s: int = 2
    kmeans_iters: int = 100
    n_g: int = 3
    detector: str = "wolp"
    detector_params: dict = field(default_factory=dict)
    use_view_a: bool = True
    use_view_l: bool = True
    use_view_g: bool = True
    use_augmentation: bool = True
    use_netcl: bool = True
    use_shygan: bool = True
    use_lce: bool = True
    use_ce: bool = True
    use_de: bool = True
    use_lc: bool = True
    use_hd: bool = True

    def __post_init__(self):
        if self.lr <= 0.0:
            raise ConfigError(f"lr must be positive, got {self.lr}")
        if not (0.0 <= self.dropout < 1.0):
            raise ConfigError(f"dropout must be in [0,1), got {self.dropout}")
        if self.epochs_max < 0 or self.patience < 1:
            raise ConfigError("epochs_max must be >= 0 and patience >= 1")
        if self.negative_strategy not in ("distance", "similarity"):
            raise ConfigError(
                f"negative_strategy must be distance|similarity, "
                f"got {self.negative_strategy!r}")


@dataclass
class TrainOutcome:
    params: dict
    best_epoch: int
    best_val_acc: float
    test_acc: float
    history: dict            # per-epoch component losses and accuracies
    wall_clock: float


@dataclass
class RunResult:
    seeds: list
    accuracies: list
    mean: float
    std: float
    wall_clock: float
    label: str = ""
    config_hash: str = ""

    @classmethod
    def from_accuracies(cls, seeds, accuracies, wall_clock, label="",
                        config_hash=""):
        accs = [float(a) for a in accuracies]
        mean = float(np.mean(accs)) if accs else 0.0
        std = float(np.std(accs, ddof=1)) if len(accs) > 1 else 0.0
        return cls(seeds=list(seeds), accuracies=accs, mean=mean, std=std,
                   wall_clock=wall_clock, label=label, config_hash=config_hash)

    def to_json_dict(self):
        return {"label": self.label, "seeds": self.seeds,
                "accuracies": self.accuracies, "mean": self.mean,
                "std": self.std, "wall_clock": self.wall_clock,
                "config_hash": self.config_hash}


def build_views_for_cfg(graph: Graph, x, cfg: TrainConfig, cover=None):
    """Build the active hypergraph views for a config; reuses a community
    cover when supplied (the cover does not depend on n_g)."""
    views = {}
    if cfg.use_view_a:
        views["a"] = build_attribute_view(x, AttributeViewConfig(
            k_nn=cfg.k_nn, k_clusters=cfg.k_clusters, s=cfg.s,
            kmeans_iters=cfg.kmeans_iters, seed=cfg.seed))
    if cfg.use_view_l:
        views["l"] = build_local_view(graph)
    if cfg.use_view_g:
        if cover is None:
            cover = detect_communities(
                graph, {"detector": cfg.detector, **cfg.detector_params},
                seed=cfg.seed)
        views["g"] = build_global_view(graph, cover, GlobalViewConfig(
            n_g=cfg.n_g, detector=cfg.detector,
            detector_params=cfg.detector_params))
    return views


def adam_init(params):
    return {"m": {k: np.zeros_like(v) for k, v in params.items()},
            "v": {k: np.zeros_like(v) for k, v in params.items()},
            "t": 0}


def adam_step(params, grads, state, lr):
    state["t"] += 1
    t = state["t"]
    bc1 = 1.0 - ADAM_BETA1 ** t
    bc2 = 1.0 - ADAM_BETA2 ** t
    for k, g in grads.items():
        m = state["m"][k]
        v = state["v"][k]
        m *= ADAM_BETA1
        m += (1.0 - ADAM_BETA1) * g
        v *= ADAM_BETA2
        v += (1.0 - ADAM_BETA2) * g * g
        params[k] -= lr * (m / bc1) / (np.sqrt(v / bc2) + ADAM_EPS)


def train(graph: Graph, x, labels, cfg: TrainConfig, views=None, split=None):
    """Train one model; early-stops on validation accuracy and restores the
    best-validation parameters."""
    start = time.perf_counter()
    if split is None:
        split = split_nodes(labels, seed=cfg.seed)
    if views is None:
        views = build_views_for_cfg(graph, x, cfg)
    model = HyperGCLModel(graph, x, split, views, cfg)
    params = model.init_params(cfg.seed)
    state = adam_init(params)
    noise_rng = np.random.default_rng([cfg.seed, 1])

    history = {"total": [], "val_acc": [], "test_acc": []}
    best_epoch, best_params = -1, copy.deepcopy(params)
    _, logits0 = model.embeddings(params)
    best_val = model.accuracy_from_logits(logits0, split.val)
    best_test = model.accuracy_from_logits(logits0, split.test)
    since_best = 0

    for epoch in range(cfg.epochs_max):
        noise, dropout = model.draw_epoch_randomness(noise_rng)
        total, comps, cache = model.forward(params, noise=noise,
                                            dropout=dropout)
        if not np.isfinite(total):
            raise DivergenceError(
                f"non-finite loss at epoch {epoch}", components=comps)
        grads = model.backward(params, cache)
        adam_step(params, grads, state, cfg.lr)

        _, eval_logits = model.embeddings(params)
        val_acc = model.accuracy_from_logits(eval_logits, split.val)
        test_acc = model.accuracy_from_logits(eval_logits, split.test)
        history["total"].append(float(total))
        for k, v in comps.items():
            history.setdefault(k, []).append(float(v))
        history["val_acc"].append(val_acc)
        history["test_acc"].append(test_acc)

        if val_acc > best_val:
            best_epoch, best_val, best_test = epoch, val_acc, test_acc
            best_params = copy.deepcopy(params)
            since_best = 0
        else:
            since_best += 1
            if since_best >= cfg.patience:
                logger.info("early stop at epoch %d (best %d)", epoch, best_epoch)
                break

    return TrainOutcome(params=best_params, best_epoch=best_epoch,
                        best_val_acc=best_val, test_acc=best_test,
                        history=history,
                        wall_clock=time.perf_counter() - start)


def evaluate(params, model: HyperGCLModel, nodes):
    """Accuracy (%) of the classifier head on the given node set."""
    return model.accuracy(params, nodes)


def _run_one_seed(args):
    graph, x, labels, cfg, views, seed = args
    outcome = train(graph, x, labels, replace(cfg, seed=seed), views=views)
    return seed, outcome.test_acc


def run_many_seeds(graph, x, labels, cfg: TrainConfig, seeds, views=None,
                   workers=1, label=""):
    """Repeat training over seeds (seed drives split + init + noise); the
    views are built once from the base config and shared."""
    start = time.perf_counter()
    if views is None:
        views = build_views_for_cfg(graph, x, cfg)
    jobs = [(graph, x, labels, cfg, views, s) for s in seeds]
    if workers > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one_seed, jobs))
    else:
        results = [_run_one_seed(j) for j in jobs]
    accs = [acc for _, acc in results]
    return RunResult.from_accuracies(seeds, accs,
                                     time.perf_counter() - start, label=label)


ABLATION_TOGGLES = {
    "ha": {"use_view_a": False},
    "hl": {"use_view_l": False},
    "hg": {"use_view_g": False},
    "augmentation": {"use_augmentation": False},
    "netcl": {"use_netcl": False},
    "shygan": {"use_shygan": False},
    "lce": {"use_lce": False},
    "ce": {"use_ce": False},
    "de": {"use_de": False},
    "lc": {"use_lc": False},
    "hd": {"use_hd": False},
}


def canonical_component(name):
    key = name.strip().lower().replace("^", "").replace("_", "").replace("-", "")
    if key not in ABLATION_TOGGLES:
        raise ConfigError(f"unknown ablation component {name!r}; "
                          f"known: {sorted(ABLATION_TOGGLES)}")
    return key


def run_ablation(graph, x, labels, base_cfg: TrainConfig, component, seeds,
                 workers=1):
    """Disable exactly one component and rerun training over the seeds."""
    key = canonical_component(component)
    cfg = replace(base_cfg, **ABLATION_TOGGLES[key])
    return run_many_seeds(graph, x, labels, cfg, seeds, workers=workers,
                          label=f"without_{key}")


def sweep_global_nodes(graph, x, labels, base_cfg: TrainConfig, n_g_values,
                       seeds, workers=1):
    """One RunResult per global-node count; community cover computed once."""
    cover = None
    if base_cfg.use_view_g:
        cover = detect_communities(
            graph, {"detector": base_cfg.detector, **base_cfg.detector_params},
            seed=base_cfg.seed)
    results = []
    for n_g in n_g_values:
        cfg = replace(base_cfg, n_g=int(n_g))
        views = build_views_for_cfg(graph, x, cfg, cover=cover)
        res = run_many_seeds(graph, x, labels, cfg, seeds, views=views,
                             workers=workers, label=f"n_g={n_g}")
        results.append(res)
    return results
