"""Scoring of (scores, labels) pairs: ROC curves, AUC, and the H-measure.

AUC is the tie-corrected probability that a random faulty instance is
scored above a random non-faulty one. The H-measure instead fixes a single
cost distribution (a Beta, symmetric by default) for every classifier and
reports one minus the expected minimum misclassification loss, normalized
against the information-free classifier. Because the cost weighting is the
same regardless of the score vector, H values are comparable across
classifiers in a way raw AUC is not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import betainc
from scipy.stats import rankdata


class MetricError(ValueError):
    """Raised when a score vector cannot be scored (e.g. one class only)."""


@dataclass(frozen=True)
class RocCurve:
    """Tie-grouped ROC points from (0,0) to (1,1), one per distinct score.

    ``thresholds[i]`` is the score cutoff realizing ``points[i]`` (predict
    faulty when score >= threshold); the (0,0) point carries +inf.
    """

    points: np.ndarray      # (m, 2) columns fpr, tpr
    thresholds: np.ndarray  # (m,)

    @property
    def fpr(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def tpr(self) -> np.ndarray:
        return self.points[:, 1]


@dataclass(frozen=True)
class CostWeighting:
    """Beta(alpha, beta) weighting over the misclassification-cost ratio."""

    alpha: float = 2.0
    beta: float = 2.0

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise MetricError("Beta shape parameters must be positive")


def _check_scored(scores, labels):
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise MetricError("scores and labels must be equal-length vectors")
    if not np.isfinite(scores).all():
        raise MetricError("scores must be finite")
    pos = labels == 1
    n_pos = int(pos.sum())
    if n_pos == 0 or n_pos == len(labels):
        raise MetricError("single-class labels: both classes required")
    return scores, pos, n_pos, len(labels) - n_pos


def roc_points(scores, labels) -> RocCurve:
    """Descending-score sweep with ties collapsed into single steps."""
    scores, pos, n_pos, n_neg = _check_scored(scores, labels)
    order = np.argsort(-scores, kind="stable")
    s_sorted = scores[order]
    pos_sorted = pos[order].astype(int)

    # last index of each tie group in the sorted order
    group_end = np.flatnonzero(np.diff(s_sorted) != 0.0)
    group_end = np.append(group_end, len(s_sorted) - 1)

    tp = np.cumsum(pos_sorted)[group_end]
    fp = (group_end + 1) - tp
    points = np.empty((len(group_end) + 1, 2))
    points[0] = (0.0, 0.0)
    points[1:, 0] = fp / n_neg
    points[1:, 1] = tp / n_pos
    thresholds = np.concatenate([[np.inf], s_sorted[group_end]])
    return RocCurve(points=points, thresholds=thresholds)


def auc(scores, labels) -> float:
    """Tie-corrected concordance: (concordant + 0.5 * tied) / (n_pos * n_neg)."""
    scores, pos, n_pos, n_neg = _check_scored(scores, labels)
    ranks = rankdata(scores, method="average")
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def trapezoid_area(curve: RocCurve) -> float:
    """Area under a ROC curve by the trapezoid rule (cross-check for auc)."""
    x, y = curve.fpr, curve.tpr
    return float(np.trapezoid(y, x))


def roc_convex_hull(curve: RocCurve) -> RocCurve:
    """Upper-left convex hull of a ROC curve, endpoints included.

    Hull points are a subset of the input points; collinear interior points
    are dropped, so the operation is idempotent.
    """
    pts = curve.points
    thresholds = curve.thresholds
    keep: list[int] = []
    for i in range(len(pts)):
        while len(keep) >= 2:
            a, b, c = pts[keep[-2]], pts[keep[-1]], pts[i]
            cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            if cross >= 0.0:  # middle point on or below chord: not a hull vertex
                keep.pop()
            else:
                break
        keep.append(i)
    idx = np.array(keep)
    return RocCurve(points=pts[idx], thresholds=thresholds[idx])


def _beta_partial_moments(a: float, b: float, lo: np.ndarray, hi: np.ndarray):
    """(int_lo^hi c w(c) dc, int_lo^hi (1-c) w(c) dc) for w = Beta(a, b)."""
    mean = a / (a + b)
    mc = mean * (betainc(a + 1.0, b, hi) - betainc(a + 1.0, b, lo))
    m1c = (1.0 - mean) * (betainc(a, b + 1.0, hi) - betainc(a, b + 1.0, lo))
    return mc, m1c


def h_measure(scores, labels, w: CostWeighting | None = None) -> float:
    """Expected-minimum-loss score in [0, 1] under a fixed Beta cost weighting.

    For cost ratio c the achievable loss is minimized over the operating
    points of the ROC convex hull; each hull vertex is optimal on one cost
    interval, so the Beta-weighted expected loss reduces to incomplete-Beta
    terms per hull segment. The result is 1 - L / L_ref with L_ref the same
    integral for the classifier whose only operating points are (0,0) and
    (1,1). Depends on scores only through their ordering.
    """
    if w is None:
        w = CostWeighting()
    scores, pos, n_pos, n_neg = _check_scored(scores, labels)
    pi1 = n_pos / (n_pos + n_neg)
    pi0 = 1.0 - pi1

    hull = roc_convex_hull(roc_points(scores, labels))
    fpr, tpr = hull.fpr, hull.tpr

    # cost where vertex i stops beating vertex i+1; convexity makes these sorted
    dxf = np.diff(fpr)
    dxt = np.diff(tpr)
    cross = pi0 * dxf / (pi1 * dxt + pi0 * dxf)
    lo = np.concatenate([[0.0], cross])
    hi = np.concatenate([cross, [1.0]])

    mc, m1c = _beta_partial_moments(w.alpha, w.beta, lo, hi)
    loss = float(np.sum(pi1 * (1.0 - tpr) * mc + pi0 * fpr * m1c))

    mc_ref, m1c_ref = _beta_partial_moments(
        w.alpha, w.beta, np.array([0.0, pi0]), np.array([pi0, 1.0])
    )
    loss_ref = float(pi1 * mc_ref[0] + pi0 * m1c_ref[1])

    h = 1.0 - loss / loss_ref
    return float(min(1.0, max(0.0, h)))


def pearson_correlation(a, b) -> float:
    """Product-moment correlation of two equal-length non-constant vectors."""
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.shape != b.shape or len(a) < 2:
        raise MetricError("need two equal-length vectors with >= 2 entries")
    if np.ptp(a) == 0.0 or np.ptp(b) == 0.0:
        raise MetricError("correlation undefined for constant input")
    ac = a - a.mean()
    bc = b - b.mean()
    return float((ac @ bc) / np.sqrt((ac @ ac) * (bc @ bc)))
