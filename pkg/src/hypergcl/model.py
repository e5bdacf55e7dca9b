"""Full-model assembly: three view encoders, adaptive masks, contrastive
terms, and the linear classification head, with explicit forward/backward
over a flat parameter dict (name -> ndarray).
"""

import logging

import numpy as np

from . import augment as aug_mod
from . import contrast, encoder
from .data import Graph, LabeledSplit
from .errors import ContractViolation
from .views import closeness_centrality

logger = logging.getLogger(__name__)

VIEW_ORDER = ("a", "l", "g")
PAIR_ORDER = (("a", "l"), ("g", "l"), ("a", "g"))


class HyperGCLModel:
    """Holds the static per-view structures and implements the loss.

    views_by_tag maps a subset of {"a","l","g"} to un-augmented Hypergraphs;
    only those views participate (ablations drop entries).
    """

    def __init__(self, graph: Graph, features, split: LabeledSplit,
                 views_by_tag, cfg):
        self.graph = graph
        self.x0 = np.asarray(features, dtype=np.float64)
        self.split = split
        self.cfg = cfg
        self.tags = [t for t in VIEW_ORDER if t in views_by_tag]
        if not self.tags:
            raise ContractViolation("at least one view must be active")
        self.views = {t: views_by_tag[t] for t in self.tags}

        needs_shygan = cfg.use_shygan and any(t != "a" for t in self.tags)
        cent_bins = None
        adj_norm = None
        if needs_shygan and cfg.use_ce:
            cent_bins = encoder.score_bins(closeness_centrality(graph))
        if needs_shygan and cfg.use_lce:
            adj_norm = encoder.normalized_adjacency(graph)

        self.static = {}
        for t in self.tags:
            shygan = cfg.use_shygan and t != "a"
            self.static[t] = encoder.build_view_static(
                graph, self.views[t], shygan, cent_bins=cent_bins,
                use_lce=cfg.use_lce, use_ce=cfg.use_ce, use_de=cfg.use_de,
                use_lc=cfg.use_lc, use_hd=cfg.use_hd, adj_norm=adj_norm)

        if cfg.use_netcl:
            self.samples = contrast.build_sample_sets(
                graph, [self.views[t] for t in self.tags], self.x0,
                cfg.negative_strategy, t=cfg.t, eta=cfg.eta)
        else:
            self.samples = None

    @property
    def num_classes(self):
        return self.split.num_classes

    def init_params(self, seed):
        rng = np.random.default_rng(seed)
        params = {}
        d_in = self.x0.shape[1]
        for t in self.tags:
            params.update(encoder.init_view_params(
                rng, t, self.static[t], d_in, heads=self.cfg.heads,
                d_hid=self.cfg.d_hid))
        params["head.W"] = encoder.glorot(
            rng, self.cfg.d_hid * len(self.tags), self.num_classes)
        params["head.b"] = np.zeros(self.num_classes)
        if self.cfg.use_augmentation:
            for t in self.tags:
                params[f"mask.{t}"] = aug_mod.MaskLogits.initial(
                    self.static[t].coo.nnz).phi
        return params

    def draw_epoch_randomness(self, rng):
        """Per-epoch Gumbel noise and attention-dropout masks, drawn in a
        fixed order so runs are reproducible."""
        noise = {}
        dropout = {}
        rate = self.cfg.dropout
        for t in self.tags:
            nnz = self.static[t].coo.nnz
            if self.cfg.use_augmentation:
                noise[t] = aug_mod.gumbel_from_rng(rng, (nnz, 2))
            if rate > 0.0:
                masks = {}
                for level in ("n2h", "h2n"):
                    for h in range(self.cfg.heads):
                        keep = rng.random(nnz) >= rate
                        masks[(level, h)] = keep / (1.0 - rate)
                dropout[t] = masks
        return noise, dropout

    def forward(self, params, noise=None, dropout=None, mask_mode="hard"):
        """Returns (total loss, components dict, cache for backward)."""
        noise = noise or {}
        dropout = dropout or {}
        cache = {"views": {}, "mask_mode": mask_mode}
        z = {}
        for t in self.tags:
            st = self.static[t]
            if self.cfg.use_augmentation:
                logits = aug_mod.MaskLogits(
                    params[f"mask.{t}"], tau=self.cfg.tau, theta=self.cfg.theta)
                aug = aug_mod.augment(st.coo, logits, noise=noise.get(t),
                                      mode=mask_mode)
            else:
                aug = aug_mod.identity_mask(st.coo)
            zt, enc_cache = encoder.encode_view(
                params, t, st, self.x0, aug.values,
                dropout_masks=dropout.get(t), heads=self.cfg.heads,
                d_hid=self.cfg.d_hid)
            zhat, nrm = contrast.normalize_rows(zt)
            cache["views"][t] = {"aug": aug, "enc": enc_cache, "z": zt,
                                 "zhat": zhat, "nrm": nrm}
            z[t] = zt

        comps = {}
        cache["pairs"] = {}
        for left, right in PAIR_ORDER:
            if left in z and right in z:
                zl = cache["views"][left]["zhat"]
                zr = cache["views"][right]["zhat"]
                if self.cfg.use_netcl:
                    loss, pc = contrast.pairwise_loss_fwd(zl, zr, self.samples)
                else:
                    loss, pc = contrast.dense_infonce_fwd(zl, zr, self.cfg.eta)
                comps[f"contrast_{left}{right}"] = loss
                cache["pairs"][(left, right)] = pc

        concat = np.concatenate([z[t] for t in self.tags], axis=1)
        logits_sup = concat @ params["head.W"] + params["head.b"]
        sup, probs = contrast.supervised_loss_fwd(
            logits_sup, self.split.labels, self.split.train)
        comps["supervised"] = sup
        cache["concat"] = concat
        cache["logits"] = logits_sup
        cache["probs"] = probs
        total = sum(comps.values())
        return total, comps, cache

    def backward(self, params, cache):
        """Gradients for every trainable tensor, same keys as params."""
        grads = {}
        dlogits = contrast.supervised_loss_bwd(
            cache["logits"], self.split.labels, self.split.train,
            cache["probs"])
        grads["head.W"] = cache["concat"].T @ dlogits
        grads["head.b"] = dlogits.sum(axis=0)
        dconcat = dlogits @ params["head.W"].T

        d = self.cfg.d_hid
        dz = {}
        dzhat = {}
        for k, t in enumerate(self.tags):
            dz[t] = dconcat[:, k * d:(k + 1) * d].copy()
            dzhat[t] = np.zeros_like(dz[t])

        for (left, right), pc in cache["pairs"].items():
            zl = cache["views"][left]["zhat"]
            zr = cache["views"][right]["zhat"]
            if self.cfg.use_netcl:
                dl, dr = contrast.pairwise_loss_bwd(zl, zr, self.samples, pc)
            else:
                dl, dr = contrast.dense_infonce_bwd(zl, zr, self.cfg.eta, pc)
            dzhat[left] += dl
            dzhat[right] += dr

        for t in self.tags:
            vc = cache["views"][t]
            dz[t] += contrast.normalize_rows_backward(
                vc["zhat"], vc["nrm"], dzhat[t])
            dmval = encoder.encode_view_backward(
                params, grads, t, self.static[t], self.x0, vc["enc"], dz[t],
                heads=self.cfg.heads, d_hid=self.cfg.d_hid)
            if self.cfg.use_augmentation:
                grads[f"mask.{t}"] = aug_mod.augment_backward(
                    vc["aug"], self.cfg.tau, dmval)

        for name, p in params.items():
            if name not in grads:
                grads[name] = np.zeros_like(p)
        return grads

    def loss_value(self, params, noise=None, mask_mode="hard"):
        """Deterministic loss for gradient checking (no dropout)."""
        total, _, _ = self.forward(params, noise=noise, mask_mode=mask_mode)
        return total

    def embeddings(self, params):
        """Noise-free per-view embeddings and classifier logits; skips the
        contrastive terms (evaluation only needs the head)."""
        z = {}
        for t in self.tags:
            st = self.static[t]
            if self.cfg.use_augmentation:
                logits = aug_mod.MaskLogits(
                    params[f"mask.{t}"], tau=self.cfg.tau, theta=self.cfg.theta)
                aug = aug_mod.augment(st.coo, logits)
            else:
                aug = aug_mod.identity_mask(st.coo)
            z[t], _ = encoder.encode_view(
                params, t, st, self.x0, aug.values, heads=self.cfg.heads,
                d_hid=self.cfg.d_hid)
        concat = np.concatenate([z[t] for t in self.tags], axis=1)
        return z, concat @ params["head.W"] + params["head.b"]

    def accuracy_from_logits(self, logits, nodes):
        pred = logits[nodes].argmax(axis=1)
        return 100.0 * float((pred == self.split.labels[nodes]).mean())

    def accuracy(self, params, nodes):
        _, logits = self.embeddings(params)
        return self.accuracy_from_logits(logits, nodes)
