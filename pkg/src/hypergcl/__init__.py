"""Multimodal hypergraph contrastive learning for node classification."""

__version__ = "0.1.0"
