"""Four-layer graph convolutional classifier trained from scratch.

Propagation uses the symmetric renormalized adjacency with self-loops,
A_hat = D^-1/2 (A + I) D^-1/2. The four hidden layers (width 20, ReLU,
no bias) are concatenated into an 80-D node embedding, mean-pooled into
the graph embedding, and a single affine head plus softmax produces the
two class probabilities. Node inputs are one-hot encoded clamped degrees.

Training is full batch over a block-diagonal sparse propagation matrix,
cross-entropy loss, Adam, fully deterministic given the seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator

from . import autodiff as ad
from ._validation import check_binary_labels, check_fitted, check_graphs
from .graphs import Graph, degree_onehot, degrees

__all__ = ["GcnClassifier", "TrainReport", "normalized_adjacency"]


def normalized_adjacency(g: Graph) -> sp.csr_matrix:
    """D^-1/2 (A + I) D^-1/2 for one graph, as CSR."""
    n = g.n_nodes
    rows, cols = [], []
    for (u, v) in g.edges:
        rows.extend((u, v))
        cols.extend((v, u))
    rows.extend(range(n))
    cols.extend(range(n))
    a = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    d_inv_sqrt = 1.0 / np.sqrt(np.asarray(a.sum(axis=1)).ravel())
    d = sp.diags(d_inv_sqrt)
    return (d @ a @ d).tocsr()


def _batch_operators(graphs: list[Graph]) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Block-diagonal propagation matrix and the mean-pooling matrix."""
    a_hat = sp.block_diag([normalized_adjacency(g) for g in graphs], format="csr")
    sizes = [g.n_nodes for g in graphs]
    offsets = np.cumsum([0] + sizes)
    rows = np.repeat(np.arange(len(graphs)), sizes)
    cols = np.arange(offsets[-1])
    vals = np.concatenate([np.full(n, 1.0 / n) for n in sizes])
    pool = sp.csr_matrix((vals, (rows, cols)), shape=(len(graphs), offsets[-1]))
    return a_hat, pool


@dataclass
class TrainReport:
    """Training outcome: accuracy plus per-graph probabilities/embeddings."""

    accuracy: float
    train_accuracy: float
    losses: list[float]
    probabilities: np.ndarray
    embeddings: np.ndarray
    train_indices: np.ndarray = field(repr=False, default=None)

    def confidence_of(self, labels: np.ndarray) -> np.ndarray:
        return self.probabilities[np.arange(len(labels)), labels]


class GcnClassifier(BaseEstimator):
    """Graph-level binary classifier over raw topology.

    Parameters
    ----------
    n_layers, hidden_dim : depth and width of the convolution stack; the
        graph embedding is their product (80 by default).
    learning_rate, epochs : Adam settings for full-batch training.
    degree_cap : clamp for the one-hot degree features; None uses the
        maximum degree observed in the training graphs.
    train_fraction : fraction of graphs used for the gradient (seeded
        shuffle); 1.0 trains on everything.
    """

    def __init__(
        self,
        n_layers: int = 4,
        hidden_dim: int = 20,
        n_classes: int = 2,
        learning_rate: float = 1e-3,
        epochs: int = 200,
        seed: int = 0,
        train_fraction: float = 1.0,
        degree_cap: int | None = None,
    ):
        self.n_layers = n_layers
        self.hidden_dim = hidden_dim
        self.n_classes = n_classes
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.seed = seed
        self.train_fraction = train_fraction
        self.degree_cap = degree_cap

    @property
    def embedding_dim(self) -> int:
        return self.n_layers * self.hidden_dim

    def _check_config(self) -> None:
        if self.n_layers < 1 or self.hidden_dim < 1:
            raise ValueError("n_layers and hidden_dim must be >= 1")
        if self.n_classes != 2:
            raise ValueError("only binary classification is supported")
        if not 0 < self.train_fraction <= 1:
            raise ValueError("train_fraction must be in (0, 1]")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")

    def _features(self, graphs: list[Graph]) -> np.ndarray:
        return np.vstack([degree_onehot(g, self.feature_cap_) for g in graphs])

    def _forward(self, a_hat, a_hat_t, pool, pool_t, x) -> tuple[ad.Tensor, ad.Tensor]:
        h = ad.Tensor(x)
        hidden = []
        for w in self.layers_:
            h = ad.relu(ad.matmul(ad.spmm(a_hat, a_hat_t, h), w))
            hidden.append(h)
        node_emb = ad.concat_cols(hidden)
        graph_emb = ad.spmm(pool, pool_t, node_emb)
        logits = ad.add(ad.matmul(graph_emb, self.head_weight_), self.head_bias_)
        return graph_emb, logits

    def fit(self, X, y=None):
        self._check_config()
        graphs = check_graphs(X)
        if y is None:
            y = [g.label for g in graphs]
        y = check_binary_labels(y, len(graphs))

        if self.degree_cap is not None:
            cap = int(self.degree_cap)
            if cap < 1:
                raise ValueError("degree_cap must be >= 1")
        else:
            cap = max(1, max(int(degrees(g).max(initial=0)) for g in graphs))
        self.feature_cap_ = cap

        rng = np.random.default_rng(self.seed)
        dims = [cap + 1] + [self.hidden_dim] * self.n_layers
        self.layers_ = [
            ad.parameter((dims[i], dims[i + 1]), rng=rng, fan_in=dims[i])
            for i in range(self.n_layers)
        ]
        self.head_weight_ = ad.parameter(
            (self.embedding_dim, self.n_classes), rng=rng, fan_in=self.embedding_dim
        )
        self.head_bias_ = ad.parameter(np.zeros((1, self.n_classes)))

        order = rng.permutation(len(graphs))
        n_train = max(2, int(round(self.train_fraction * len(graphs))))
        train_idx = np.sort(order[:n_train])
        train_graphs = [graphs[i] for i in train_idx]
        y_train = y[train_idx]
        if len(set(y_train.tolist())) < 2:
            raise ValueError("training split lost one class; raise train_fraction")

        a_hat, pool = _batch_operators(train_graphs)
        a_hat_t = a_hat.T.tocsr()
        pool_t = pool.T.tocsr()
        x = self._features(train_graphs)
        onehot = np.eye(self.n_classes)[y_train]

        params = self.layers_ + [self.head_weight_, self.head_bias_]
        opt = ad.Adam(params, lr=self.learning_rate)
        losses = []
        for _ in range(self.epochs):
            opt.zero_grad()
            _, logits = self._forward(a_hat, a_hat_t, pool, pool_t, x)
            loss = ad.cross_entropy_logits(logits, onehot)
            value = loss.item()
            if not np.isfinite(value):
                raise RuntimeError(f"training diverged: loss became {value}")
            loss.backward()
            opt.step()
            losses.append(value)

        probs = self.predict_proba(graphs)
        embeddings = self.embed(graphs)
        conf = probs[np.arange(len(graphs)), y]
        train_conf = conf[train_idx]
        self.report_ = TrainReport(
            accuracy=float(np.mean(conf > 0.5)),
            train_accuracy=float(np.mean(train_conf > 0.5)),
            losses=losses,
            probabilities=probs,
            embeddings=embeddings,
            train_indices=train_idx,
        )
        self.classes_ = np.array([0, 1])
        return self

    def _forward_numpy(self, graphs: list[Graph]) -> tuple[np.ndarray, np.ndarray]:
        check_fitted(self, "layers_")
        a_hat, pool = _batch_operators(graphs)
        h = self._features(graphs)
        hidden = []
        for w in self.layers_:
            h = np.maximum(a_hat @ h @ w.data, 0.0)
            hidden.append(h)
        emb = pool @ np.concatenate(hidden, axis=1)
        logits = emb @ self.head_weight_.data + self.head_bias_.data
        shifted = logits - logits.max(axis=1, keepdims=True)
        e = np.exp(shifted)
        return emb, e / e.sum(axis=1, keepdims=True)

    def predict_proba(self, X) -> np.ndarray:
        graphs = check_graphs(X)
        return self._forward_numpy(graphs)[1]

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.predict_proba(X), axis=1)

    def embed(self, X) -> np.ndarray:
        graphs = check_graphs(X)
        return self._forward_numpy(graphs)[0]

    def forward_one(self, g: Graph) -> tuple[np.ndarray, np.ndarray]:
        """Embedding and class probabilities of a single graph."""
        emb, probs = self._forward_numpy([g])
        return emb[0], probs[0]

    # Checkpoint format: config + dense layer blobs + head + feature cap.
    def to_dict(self) -> dict:
        check_fitted(self, "layers_")

        def blob(arr: np.ndarray) -> dict:
            return {"rows": arr.shape[0], "cols": arr.shape[1], "data": arr.ravel().tolist()}

        return {
            "config": self.get_params(),
            "layers": [blob(w.data) for w in self.layers_],
            "head": {"weight": blob(self.head_weight_.data), "bias": self.head_bias_.data.ravel().tolist()},
            "feature_cap": self.feature_cap_,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GcnClassifier":
        est = cls(**d["config"])

        def unblob(b: dict) -> np.ndarray:
            return np.asarray(b["data"], dtype=np.float64).reshape(b["rows"], b["cols"])

        est.layers_ = [ad.Tensor(unblob(b), requires_grad=True) for b in d["layers"]]
        est.head_weight_ = ad.Tensor(unblob(d["head"]["weight"]), requires_grad=True)
        est.head_bias_ = ad.Tensor(
            np.asarray(d["head"]["bias"], dtype=np.float64).reshape(1, -1), requires_grad=True
        )
        est.feature_cap_ = int(d["feature_cap"])
        est.classes_ = np.array([0, 1])
        return est

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()) + "\n")

    @classmethod
    def load(cls, path) -> "GcnClassifier":
        return cls.from_dict(json.loads(Path(path).read_text()))
