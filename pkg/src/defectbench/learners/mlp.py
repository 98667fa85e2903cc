"""Single-hidden-layer perceptron with logistic activations.

Trained with full-batch gradient descent on the cross-entropy loss for a
fixed number of epochs, which keeps fits reproducible from the seed alone.
Scores are the output-unit pre-activations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -35.0, 35.0)))


@dataclass
class MlpModel:
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: float

    def score(self, x_std: np.ndarray) -> np.ndarray:
        hidden = _sigmoid(x_std @ self.w1 + self.b1)
        return hidden @ self.w2 + self.b2


def fit_mlp(x_std: np.ndarray, labels: np.ndarray, hp: dict, rng_seed: int) -> MlpModel:
    hidden_units = int(hp.get("hidden", 8))
    lr = float(hp.get("learning_rate", 0.5))
    epochs = int(hp.get("epochs", 300))
    y = (labels == 1).astype(float)
    n, p = x_std.shape

    rng = np.random.default_rng(rng_seed)
    w1 = rng.normal(0.0, 1.0 / np.sqrt(p), size=(p, hidden_units))
    b1 = np.zeros(hidden_units)
    w2 = rng.normal(0.0, 1.0 / np.sqrt(hidden_units), size=hidden_units)
    b2 = 0.0

    for _ in range(epochs):
        hidden = _sigmoid(x_std @ w1 + b1)
        out = _sigmoid(hidden @ w2 + b2)
        # d(loss)/d(pre-activation) for cross-entropy + sigmoid
        delta_out = (out - y) / n
        grad_w2 = hidden.T @ delta_out
        grad_b2 = float(delta_out.sum())
        delta_hidden = np.outer(delta_out, w2) * hidden * (1.0 - hidden)
        grad_w1 = x_std.T @ delta_hidden
        grad_b1 = delta_hidden.sum(axis=0)
        w1 -= lr * grad_w1
        b1 -= lr * grad_b1
        w2 -= lr * grad_w2
        b2 -= lr * grad_b2

    return MlpModel(w1=w1, b1=b1, w2=w2, b2=b2)
