"""Learnable adaptive augmentation of incidence structures.

Each original incidence position carries a trainable (keep, drop) logit
pair. A forward pass perturbs the logits with Gumbel noise, takes the
two-way softmax at temperature tau, thresholds the keep probability at
theta into a hard bit, and emits the hard bit while routing gradients
through the soft probability (straight-through). Dropping every member of
a hyperedge would break the encoder's softmax, so an all-zero column has
its max-probability position forced back on.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .data import IncidenceCOO
from .errors import ConfigError, ContractViolation

logger = logging.getLogger(__name__)

INIT_KEEP_LOGIT = 2.0
INIT_DROP_LOGIT = 0.0


@dataclass
class MaskLogits:
    """Per-incidence (keep, drop) logits plus the sampling constants."""

    phi: np.ndarray           # (nnz, 2) float64
    tau: float = 0.2
    theta: float = 0.8

    def __post_init__(self):
        if self.tau <= 0.0:
            raise ConfigError(f"tau must be > 0, got {self.tau}")
        if not (0.0 < self.theta < 1.0):
            raise ConfigError(f"theta must be in (0, 1), got {self.theta}")

    @classmethod
    def initial(cls, nnz, tau=0.2, theta=0.8):
        phi = np.empty((nnz, 2))
        phi[:, 0] = INIT_KEEP_LOGIT
        phi[:, 1] = INIT_DROP_LOGIT
        return cls(phi=phi, tau=tau, theta=theta)


@dataclass
class AugmentedIncidence:
    """Forward mask values per incidence position (canonical COO order)."""

    coo: IncidenceCOO
    values: np.ndarray        # what the encoder consumes (binary in hard mode)
    hard_mask: np.ndarray     # thresholded bits, guard applied
    p_keep: np.ndarray        # soft keep probabilities (gradient path)
    forced: np.ndarray        # positions restored by the emptiness guard
    mode: str                 # "hard" or "soft"

    def to_dense(self):
        a = np.zeros((self.coo.num_nodes, self.coo.num_hyperedges))
        a[self.coo.ni, self.coo.ej] = self.values
        return a


def sample_gumbel(count, seed):
    """Standard Gumbel(0,1) noise: -log(-log(u)), u ~ Uniform(0,1), seeded."""
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    rng = np.random.default_rng(seed)
    return gumbel_from_rng(rng, count)


def gumbel_transform(u):
    """Inverse-CDF map from Uniform(0,1) draws to Gumbel(0,1) noise."""
    u = np.clip(u, 1e-12, 1.0 - 1e-12)
    return -np.log(-np.log(u))


def gumbel_from_rng(rng, shape):
    return gumbel_transform(rng.random(shape))


def augment(coo: IncidenceCOO, logits: MaskLogits, noise=None, mode="hard"):
    """Sample a mask over the incidence positions of ``coo``.

    noise: (nnz, 2) Gumbel draws for training, or None for evaluation
    (epsilon = 0). mode="soft" emits p_keep instead of the hard bit; it
    exists for gradient verification, where the threshold must be bypassed.
    """
    nnz = coo.nnz
    if logits.phi.shape != (nnz, 2):
        raise ContractViolation(
            f"mask logits shape {logits.phi.shape} does not match incidence "
            f"nnz {nnz}")
    if noise is None:
        z = logits.phi
    else:
        if noise.shape != (nnz, 2):
            raise ContractViolation(
                f"noise shape {noise.shape} does not match incidence nnz {nnz}")
        z = logits.phi + noise
    # two-way softmax at temperature tau == sigmoid of the scaled logit gap
    p_keep = _sigmoid((z[:, 0] - z[:, 1]) / logits.tau)
    hard = (p_keep > logits.theta).astype(np.float64)

    forced = np.zeros(nnz, dtype=bool)
    survivors = np.bincount(coo.ej, weights=hard, minlength=coo.num_hyperedges)
    for j in np.flatnonzero(survivors == 0):
        lo, hi = coo.edge_ptr[j], coo.edge_ptr[j + 1]
        if lo == hi:
            continue
        t = lo + int(np.argmax(p_keep[lo:hi]))
        hard[t] = 1.0
        forced[t] = True
    if forced.any():
        logger.debug("emptiness guard restored %d incidence positions",
                     int(forced.sum()))

    values = p_keep if mode == "soft" else hard
    return AugmentedIncidence(coo=coo, values=values, hard_mask=hard,
                              p_keep=p_keep, forced=forced, mode=mode)


def augment_backward(aug: AugmentedIncidence, tau, dvalues):
    """Gradient of the loss w.r.t. the logits, given d(loss)/d(mask values).

    Straight-through: the emitted value is the hard bit but d value/d p_keep
    is 1, so both modes route dvalues into the sigmoid backward.
    """
    p = aug.p_keep
    dz = dvalues * p * (1.0 - p) / tau
    dphi = np.empty((p.size, 2))
    dphi[:, 0] = dz
    dphi[:, 1] = -dz
    return dphi


def identity_mask(coo: IncidenceCOO):
    """All-ones mask used when augmentation is disabled."""
    ones = np.ones(coo.nnz)
    return AugmentedIncidence(coo=coo, values=ones, hard_mask=ones.copy(),
                              p_keep=ones.copy(),
                              forced=np.zeros(coo.nnz, dtype=bool), mode="hard")


def mask_to_hypergraph(aug: AugmentedIncidence, view_tag):
    """Surviving incidences as a Hypergraph, for snapshot export."""
    from .data import Hypergraph

    coo = aug.coo
    hyperedges = []
    for j in range(coo.num_hyperedges):
        lo, hi = coo.edge_ptr[j], coo.edge_ptr[j + 1]
        members = coo.ni[lo:hi][aug.hard_mask[lo:hi] > 0.0]
        hyperedges.append(members)
    return Hypergraph(num_nodes=coo.num_nodes, hyperedges=hyperedges,
                      view_tag=view_tag)


def _sigmoid(x):
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out
