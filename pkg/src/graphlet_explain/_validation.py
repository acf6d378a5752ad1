"""Input validation helpers shared by the estimators."""

from __future__ import annotations

import numpy as np
from sklearn.exceptions import NotFittedError

from .catalog import N_GRAPHLETS
from .graphs import Graph


def check_graphs(X) -> list[Graph]:
    graphs = list(X)
    if not graphs:
        raise ValueError("expected a non-empty sequence of graphs")
    for g in graphs:
        if not isinstance(g, Graph):
            raise TypeError(f"expected Graph instances, got {type(g).__name__}")
    return graphs


def check_binary_labels(y, n: int) -> np.ndarray:
    y = np.asarray(y, dtype=np.int64)
    if y.shape != (n,):
        raise ValueError(f"labels must have shape ({n},), got {y.shape}")
    present = set(np.unique(y).tolist())
    if not present <= {0, 1}:
        raise ValueError(f"labels must be in {{0, 1}}, got values {sorted(present)}")
    if present != {0, 1}:
        raise ValueError("both classes must be present for training")
    return y


def check_frequency_matrix(F, n_rows: int | None = None) -> np.ndarray:
    F = np.asarray(F, dtype=np.float64)
    if F.ndim != 2 or F.shape[1] != N_GRAPHLETS:
        raise ValueError(f"frequency matrix must be (n, {N_GRAPHLETS}), got {F.shape}")
    if n_rows is not None and F.shape[0] != n_rows:
        raise ValueError(f"expected {n_rows} rows, got {F.shape[0]}")
    if not np.all(np.isfinite(F)):
        raise ValueError("frequency matrix contains non-finite values")
    if F.min() < -1e-12 or F.max() > 1 + 1e-12:
        raise ValueError("frequencies must lie in [0, 1]")
    return F


def check_fitted(est, attr: str) -> None:
    if getattr(est, attr, None) is None:
        raise NotFittedError(
            f"{type(est).__name__} is not fitted yet; call fit() before using this method"
        )
