"""Encoder-decoder surrogate mapping frequency vectors to the classifier.

The encoder compresses the 29-D graphlet frequency vector through two
20-D ReLU layers into a 10-D latent, with its own affine+softmax head
supervised by the classifier's probabilities (L2). The decoder expands
the latent back through two 20-D ReLU layers into an 80-D reconstructed
graph embedding, which a frozen copy of the classifier head turns into
probabilities. Residual connections are mirrored: decoder hidden 1 adds
encoder hidden 2, decoder hidden 2 adds encoder hidden 1, both applied
after the ReLU.

Training alternates single Adam steps: encoder (probability L2), then
decoder (embedding L2 plus probability L2) against a detached latent, so
neither component's weights move during the other's step. The full
encoder -> decoder -> frozen head path is the probability source for
counterfactual inference.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator

from . import autodiff as ad
from ._validation import check_fitted, check_frequency_matrix

__all__ = ["GraphletSurrogate", "SurrogateReport", "cosine_similarity"]


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    denom = np.linalg.norm(a) * np.linalg.norm(b)
    if denom == 0:
        return 0.0
    return float(np.dot(a, b) / denom)


@dataclass
class SurrogateReport:
    """Fit summary: probability agreement with the classifier."""

    cosine_similarity: float
    baseline_probabilities: np.ndarray
    encoder_losses: list[float]
    decoder_losses: list[float]


class GraphletSurrogate(BaseEstimator):
    """Approximates a trained graph classifier from frequency vectors.

    Parameters
    ----------
    steps : number of encoder/decoder alternations.
    embedding_loss_weight, probability_loss_weight : the two decoder loss
        terms; equal by default.
    """

    LATENT_DIM = 10
    HIDDEN_DIM = 20
    INPUT_DIM = 29

    def __init__(
        self,
        steps: int = 5000,
        learning_rate: float = 1e-3,
        seed: int = 0,
        embedding_loss_weight: float = 1.0,
        probability_loss_weight: float = 1.0,
    ):
        self.steps = steps
        self.learning_rate = learning_rate
        self.seed = seed
        self.embedding_loss_weight = embedding_loss_weight
        self.probability_loss_weight = probability_loss_weight

    def _init_params(self, rng: np.random.Generator, embedding_dim: int, n_classes: int) -> None:
        def lin(din, dout):
            w = ad.parameter((din, dout), rng=rng, fan_in=din)
            b = ad.parameter(np.zeros((1, dout)))
            return w, b

        h, z = self.HIDDEN_DIM, self.LATENT_DIM
        self.enc_ = [lin(self.INPUT_DIM, h), lin(h, h), lin(h, z)]
        self.enc_head_ = lin(z, n_classes)
        self.dec_ = [lin(z, h), lin(h, h), lin(h, embedding_dim)]

    def _encoder_params(self) -> list[ad.Tensor]:
        return [t for pair in self.enc_ + [self.enc_head_] for t in pair]

    def _decoder_params(self) -> list[ad.Tensor]:
        return [t for pair in self.dec_ for t in pair]

    @staticmethod
    def _affine(x, pair):
        w, b = pair
        return ad.add(ad.matmul(x, w), b)

    def _encode(self, f) -> tuple[ad.Tensor, ad.Tensor, ad.Tensor, ad.Tensor]:
        """latent, encoder-head logits, and the two hidden activations."""
        h1 = ad.relu(self._affine(f, self.enc_[0]))
        h2 = ad.relu(self._affine(h1, self.enc_[1]))
        latent = self._affine(h2, self.enc_[2])
        logits = self._affine(latent, self.enc_head_)
        return latent, logits, h1, h2

    def _decode(self, latent, h1, h2) -> tuple[ad.Tensor, ad.Tensor]:
        """Reconstructed embedding and frozen-head logits."""
        d1 = ad.add(ad.relu(self._affine(latent, self.dec_[0])), h2)
        d2 = ad.add(ad.relu(self._affine(d1, self.dec_[1])), h1)
        emb = self._affine(d2, self.dec_[2])
        logits = ad.add(ad.matmul(emb, ad.Tensor(self.frozen_head_weight_)), ad.Tensor(self.frozen_head_bias_))
        return emb, logits

    def fit(self, F, embeddings, probabilities, head_weight, head_bias):
        """Train against a frozen classifier.

        F is the (n, 29) frequency matrix; embeddings and probabilities
        are the classifier outputs for the same graphs; head_weight and
        head_bias are copied verbatim as the frozen classification head.
        """
        F = check_frequency_matrix(F)
        n = F.shape[0]
        emb_target = np.asarray(embeddings, dtype=float)
        prob_target = np.asarray(probabilities, dtype=float)
        if emb_target.shape[0] != n or prob_target.shape != (n, 2):
            raise ValueError("embeddings/probabilities do not match the frequency matrix")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")

        self.frozen_head_weight_ = np.array(head_weight, dtype=np.float64)
        self.frozen_head_bias_ = np.array(head_bias, dtype=np.float64).reshape(1, -1)
        if self.frozen_head_weight_.shape != (emb_target.shape[1], prob_target.shape[1]):
            raise ValueError("frozen head shape does not match the embedding/probability dims")

        rng = np.random.default_rng(self.seed)
        self._init_params(rng, emb_target.shape[1], prob_target.shape[1])
        opt_enc = ad.Adam(self._encoder_params(), lr=self.learning_rate)
        opt_dec = ad.Adam(self._decoder_params(), lr=self.learning_rate)

        enc_losses, dec_losses = [], []
        for _ in range(self.steps):
            opt_enc.zero_grad()
            _, logits, _, _ = self._encode(ad.Tensor(F))
            loss_e = ad.mse(ad.softmax(logits), prob_target)
            value_e = loss_e.item()
            if not np.isfinite(value_e):
                raise RuntimeError(f"encoder training diverged: loss became {value_e}")
            loss_e.backward()
            opt_enc.step()
            enc_losses.append(value_e)

            # Freeze the encoder: recompute and detach its activations.
            latent, _, h1, h2 = self._encode(ad.Tensor(F))
            latent, h1, h2 = ad.Tensor(latent.data), ad.Tensor(h1.data), ad.Tensor(h2.data)
            opt_dec.zero_grad()
            emb_rec, logits_rec = self._decode(latent, h1, h2)
            loss_d = ad.add(
                ad.scale(ad.mse(emb_rec, emb_target), self.embedding_loss_weight),
                ad.scale(ad.mse(ad.softmax(logits_rec), prob_target), self.probability_loss_weight),
            )
            value_d = loss_d.item()
            if not np.isfinite(value_d):
                raise RuntimeError(f"decoder training diverged: loss became {value_d}")
            loss_d.backward()
            opt_dec.step()
            dec_losses.append(value_d)

        baseline = self.predict_proba(F)
        self.report_ = SurrogateReport(
            cosine_similarity=cosine_similarity(baseline, prob_target),
            baseline_probabilities=baseline,
            encoder_losses=enc_losses,
            decoder_losses=dec_losses,
        )
        return self

    def encode(self, F) -> tuple[np.ndarray, np.ndarray, tuple[np.ndarray, np.ndarray]]:
        """Latent vectors, encoder-head probabilities, hidden activations."""
        check_fitted(self, "enc_")
        F = check_frequency_matrix(F)
        latent, logits, h1, h2 = self._encode(ad.Tensor(F))
        return latent.data, _softmax_np(logits.data), (h1.data, h2.data)

    def reconstruct(self, F) -> np.ndarray:
        """Reconstructed 80-D graph embeddings for the given frequencies."""
        check_fitted(self, "enc_")
        F = check_frequency_matrix(F)
        latent, _, h1, h2 = self._encode(ad.Tensor(F))
        emb, _ = self._decode(latent, h1, h2)
        return emb.data

    def predict_proba(self, F) -> np.ndarray:
        """Decoder-path probabilities: encoder -> decoder -> frozen head."""
        check_fitted(self, "enc_")
        F = check_frequency_matrix(F)
        latent, _, h1, h2 = self._encode(ad.Tensor(F))
        _, logits = self._decode(latent, h1, h2)
        return _softmax_np(logits.data)

    def to_dict(self) -> dict:
        check_fitted(self, "enc_")

        def blob(arr: np.ndarray) -> dict:
            return {"rows": arr.shape[0], "cols": arr.shape[1], "data": arr.ravel().tolist()}

        def layers(pairs):
            return [{"weight": blob(w.data), "bias": b.data.ravel().tolist()} for (w, b) in pairs]

        return {
            "config": self.get_params(),
            "encoder": {"layers": layers(self.enc_), "head": layers([self.enc_head_])[0]},
            "decoder": {"layers": layers(self.dec_)},
            "frozen_head": {
                "weight": blob(self.frozen_head_weight_),
                "bias": self.frozen_head_bias_.ravel().tolist(),
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GraphletSurrogate":
        est = cls(**d["config"])

        def unblob(b: dict) -> np.ndarray:
            return np.asarray(b["data"], dtype=np.float64).reshape(b["rows"], b["cols"])

        def pairs(layer_dicts):
            return [
                (
                    ad.Tensor(unblob(ld["weight"]), requires_grad=True),
                    ad.Tensor(np.asarray(ld["bias"], dtype=np.float64).reshape(1, -1), requires_grad=True),
                )
                for ld in layer_dicts
            ]

        est.enc_ = pairs(d["encoder"]["layers"])
        est.enc_head_ = pairs([d["encoder"]["head"]])[0]
        est.dec_ = pairs(d["decoder"]["layers"])
        est.frozen_head_weight_ = unblob(d["frozen_head"]["weight"])
        est.frozen_head_bias_ = np.asarray(d["frozen_head"]["bias"], dtype=np.float64).reshape(1, -1)
        return est

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()) + "\n")

    @classmethod
    def load(cls, path) -> "GraphletSurrogate":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _softmax_np(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)
