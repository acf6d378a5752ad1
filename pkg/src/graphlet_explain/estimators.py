"""Sklearn-style transformer wrapping the graphlet census."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import check_fitted, check_graphs
from .catalog import build_catalog
from .census import DEFAULT_SAMPLES, EXHAUSTIVE_MAX_NODES, census_dataset

__all__ = ["GraphletCensus"]


class GraphletCensus(BaseEstimator, TransformerMixin):
    """Turns a sequence of graphs into the (n, 29) frequency matrix.

    ``mode`` is "auto" (exhaustive up to ``exhaustive_max_nodes`` nodes,
    sampled beyond), "exhaustive", or "sampled". fit() only builds the
    immutable catalog, so the transformer is stateless across datasets
    and composes with sklearn pipelines.
    """

    def __init__(
        self,
        mode: str = "auto",
        samples: int = DEFAULT_SAMPLES,
        seed: int = 0,
        exhaustive_max_nodes: int = EXHAUSTIVE_MAX_NODES,
    ):
        self.mode = mode
        self.samples = samples
        self.seed = seed
        self.exhaustive_max_nodes = exhaustive_max_nodes

    def fit(self, X=None, y=None):
        if self.mode not in ("auto", "exhaustive", "sampled"):
            raise ValueError(f"unknown census mode {self.mode!r}")
        self.catalog_ = build_catalog()
        return self

    def census(self, X):
        """Full per-graph census results (counts, totals, frequencies)."""
        check_fitted(self, "catalog_")
        return census_dataset(
            check_graphs(X),
            self.catalog_,
            mode=self.mode,
            samples=self.samples,
            seed=self.seed,
            exhaustive_max_nodes=self.exhaustive_max_nodes,
        )

    def transform(self, X) -> np.ndarray:
        return np.array([r.frequencies for r in self.census(X)])
