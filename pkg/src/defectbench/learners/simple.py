"""Gaussian naive Bayes, k-nearest-neighbours, and the constant baseline."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..sampling import pairwise_sq_dists

_VAR_FLOOR = 1e-12


@dataclass
class NaiveBayesModel:
    mean_pos: np.ndarray
    var_pos: np.ndarray
    mean_neg: np.ndarray
    var_neg: np.ndarray
    log_prior_odds: float

    def score(self, x_std: np.ndarray) -> np.ndarray:
        """Log posterior odds for the faulty class."""
        ll_pos = -0.5 * (np.log(2.0 * np.pi * self.var_pos)
                         + (x_std - self.mean_pos) ** 2 / self.var_pos).sum(axis=1)
        ll_neg = -0.5 * (np.log(2.0 * np.pi * self.var_neg)
                         + (x_std - self.mean_neg) ** 2 / self.var_neg).sum(axis=1)
        return ll_pos - ll_neg + self.log_prior_odds


def fit_gaussian_naive_bayes(x_std: np.ndarray, labels: np.ndarray, hp: dict,
                             rng_seed: int) -> NaiveBayesModel:
    pos = labels == 1
    n_pos, n_neg = int(pos.sum()), int((~pos).sum())
    return NaiveBayesModel(
        mean_pos=x_std[pos].mean(axis=0),
        var_pos=np.maximum(x_std[pos].var(axis=0), _VAR_FLOOR),
        mean_neg=x_std[~pos].mean(axis=0),
        var_neg=np.maximum(x_std[~pos].var(axis=0), _VAR_FLOOR),
        log_prior_odds=float(np.log(n_pos) - np.log(n_neg)),
    )


@dataclass
class KnnModel:
    train: np.ndarray
    train_pos: np.ndarray  # 0/1 per training row
    k: int

    def score(self, x_std: np.ndarray) -> np.ndarray:
        """Fraction of the k nearest training rows that are faulty."""
        d2 = pairwise_sq_dists(x_std, self.train)
        # stable sort breaks distance ties by training-row index
        order = np.argsort(d2, axis=1, kind="stable")
        nearest = order[:, : self.k]
        return self.train_pos[nearest].mean(axis=1)


def fit_knn(x_std: np.ndarray, labels: np.ndarray, hp: dict, rng_seed: int) -> KnnModel:
    k = int(hp.get("k", 5))
    k = min(k, len(labels))
    return KnnModel(train=x_std.copy(), train_pos=(labels == 1).astype(float), k=k)


@dataclass
class ConstantModel:
    """Information-free baseline: the same score for every instance."""

    def score(self, x_std: np.ndarray) -> np.ndarray:
        return np.zeros(len(x_std))


def fit_constant(x_std: np.ndarray, labels: np.ndarray, hp: dict,
                 rng_seed: int) -> ConstantModel:
    return ConstantModel()
