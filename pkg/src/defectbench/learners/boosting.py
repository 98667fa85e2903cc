"""AdaBoost.M1 over decision stumps.

The additive score is the alpha-weighted sum of stump votes, so its sign
is exactly the weighted-majority decision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_EPS = 1e-10


@dataclass
class Stump:
    feature: int
    threshold: float
    polarity: int  # +1: predict faulty when x >= threshold; -1: flipped

    def predict(self, x: np.ndarray) -> np.ndarray:
        raw = np.where(x[:, self.feature] >= self.threshold, 1.0, -1.0)
        return self.polarity * raw


def best_stump(x: np.ndarray, y: np.ndarray, weights: np.ndarray) -> tuple[Stump, float]:
    """Minimum weighted-error stump; first candidate wins exact ties.

    Candidates are enumerated feature-ascending, boundary-ascending, with
    polarity +1 before -1, so the result is deterministic.
    """
    n, _ = x.shape
    total_w = float(weights.sum())
    total_neg = float(weights[y < 0].sum())
    best = None  # (err, feature, threshold, polarity)
    for f in range(x.shape[1]):
        order = np.argsort(x[:, f], kind="stable")
        xs = x[order, f]
        cumw = np.concatenate([[0.0], np.cumsum(weights[order])])
        cumwy = np.concatenate([[0.0], np.cumsum((weights * y)[order])])
        # boundary b: first b sorted rows fall below the threshold
        boundaries = np.concatenate(
            [[0], np.flatnonzero(xs[1:] != xs[:-1]) + 1])
        wpos_left = 0.5 * (cumw[boundaries] + cumwy[boundaries])
        wneg_left = cumw[boundaries] - wpos_left
        err_plus = wpos_left + (total_neg - wneg_left)
        err_minus = total_w - err_plus
        thresholds = np.where(
            boundaries == 0, -np.inf,
            0.5 * (xs[np.maximum(boundaries - 1, 0)] + xs[np.minimum(boundaries, n - 1)]))
        for errs, pol in ((err_plus, 1), (err_minus, -1)):
            j = int(np.argmin(errs))
            cand = (float(errs[j]), f, float(thresholds[j]), pol)
            if best is None or cand[0] < best[0]:
                best = cand
    err, f, thr, pol = best
    return Stump(feature=f, threshold=thr, polarity=pol), err


@dataclass
class AdaBoostModel:
    stumps: list[Stump]
    alphas: list[float]

    def score(self, x_std: np.ndarray) -> np.ndarray:
        out = np.zeros(len(x_std))
        for stump, alpha in zip(self.stumps, self.alphas):
            out += alpha * stump.predict(x_std)
        return out


def fit_adaboost(x_std: np.ndarray, labels: np.ndarray, hp: dict,
                 rng_seed: int) -> AdaBoostModel:
    """Stagewise stump boosting; stops early on a perfect or useless stump."""
    rounds = int(hp.get("rounds", 100))
    y = labels.astype(float)
    n = len(y)
    weights = np.full(n, 1.0 / n)
    stumps: list[Stump] = []
    alphas: list[float] = []
    for _ in range(rounds):
        stump, err = best_stump(x_std, y, weights)
        if err >= 0.5:  # no stump better than chance under these weights
            break
        err = max(err, _EPS)
        alpha = 0.5 * np.log((1.0 - err) / err)
        stumps.append(stump)
        alphas.append(float(alpha))
        pred = stump.predict(x_std)
        weights = weights * np.exp(-alpha * y * pred)
        weights /= weights.sum()
        if err <= _EPS:  # perfect stump: further rounds are redundant
            break
    return AdaBoostModel(stumps=stumps, alphas=alphas)
