"""Overlapping community detection behind a pluggable interface.

The shipped default is weighted overlapping label propagation: every node
carries up to ``v`` community labels with belonging coefficients, updated
asynchronously by weighted neighbor voting until the label sets stabilize
or the sweep cap is reached. Deterministic given (graph, params, seed).
"""

import logging
from dataclasses import dataclass

import numpy as np

from .data import Graph
from .errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass
class CommunityCover:
    """Possibly-overlapping node groups; union covers all non-isolated nodes."""

    communities: list  # list of sorted int64 arrays

    @property
    def num_communities(self):
        return len(self.communities)


def weighted_overlapping_label_propagation(g: Graph, params, seed):
    """Label propagation where nodes keep up to v labels (coeff >= 1/v).

    Votes are neighbor belonging coefficients scaled by edge weight; a node
    with no label above threshold keeps the argmax (ties -> smallest label).
    """
    v_max = int(params.get("v", 2))
    max_sweeps = int(params.get("max_sweeps", 30))
    if v_max < 1:
        raise ConfigError(f"label capacity v must be >= 1, got {v_max}")
    n = g.num_nodes
    rng = np.random.default_rng(seed)
    active = [i for i in range(n) if g.degree(i) > 0]
    memory = {i: {i: 1.0} for i in active}
    threshold = 1.0 / v_max

    for _ in range(max_sweeps):
        changed = False
        order = rng.permutation(len(active))
        for k in order:
            i = active[k]
            votes = {}
            nbrs = g.neighbors(i)
            wts = g.neighbor_weights(i)
            for j, w in zip(nbrs, wts):
                for lab, coeff in memory[int(j)].items():
                    votes[lab] = votes.get(lab, 0.0) + w * coeff
            total = sum(votes.values())
            if total <= 0.0:
                continue
            kept = {lab: c / total for lab, c in votes.items() if c / total >= threshold}
            if not kept:
                best = min(votes, key=lambda lab: (-votes[lab], lab))
                kept = {best: 1.0}
            else:
                norm = sum(kept.values())
                kept = {lab: c / norm for lab, c in kept.items()}
            if set(kept) != set(memory[i]):
                changed = True
            memory[i] = kept
        if not changed:
            break

    by_label = {}
    for i in active:
        for lab in memory[i]:
            by_label.setdefault(lab, []).append(i)
    communities = []
    seen_sets = set()
    for lab in sorted(by_label):
        members = tuple(sorted(by_label[lab]))
        if members in seen_sets:
            continue  # distinct labels can converge to identical groups
        seen_sets.add(members)
        communities.append(np.array(members, dtype=np.int64))
    return CommunityCover(communities=communities)


DETECTORS = {
    "wolp": weighted_overlapping_label_propagation,
}


def detect_communities(g: Graph, params=None, seed=0):
    """Run the configured detector; ``params['detector']`` selects it."""
    params = dict(params or {})
    name = params.pop("detector", "wolp")
    if name not in DETECTORS:
        raise ConfigError(f"unknown community detector {name!r}; known: {sorted(DETECTORS)}")
    return DETECTORS[name](g, params, seed)
