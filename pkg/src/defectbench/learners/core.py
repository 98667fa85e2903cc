"""Uniform fit/predict interface over the built-in learners.

Every learner is fitted on standardized features (the scaler is part of
the trained model) and scores with a real value where higher means more
likely faulty. Model selection runs a stratified inner cross-validation
over a candidate grid and picks the best mean metric, breaking ties by
grid position.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..data import Dataset, ScalerParams, apply_scaler, standardize, with_rows
from ..metrics import auc, h_measure
from ..sampling import stratified_folds
from ..seeding import derive_seed
from .boosting import fit_adaboost
from .linear import fit_linear_svm, fit_logistic, fit_ridge
from .mlp import fit_mlp
from .simple import fit_constant, fit_gaussian_naive_bayes, fit_knn
from .spec import CandidateGrid, ClassifierSpec, LearnerError
from .tree import fit_cart, fit_random_forest

_FITTERS = {
    "logistic_regression": fit_logistic,
    "ridge_regression": fit_ridge,
    "gaussian_naive_bayes": fit_gaussian_naive_bayes,
    "knn": fit_knn,
    "cart": fit_cart,
    "random_forest": fit_random_forest,
    "linear_svm": fit_linear_svm,
    "mlp": fit_mlp,
    "adaboost": fit_adaboost,
    "constant": fit_constant,
}

_METRIC_FNS = {"auc": auc, "h": h_measure}


@dataclass
class TrainedModel:
    """Immutable fitted classifier: spec, fit-time scaler, and parameters."""

    spec: ClassifierSpec
    scaler: ScalerParams
    impl: object
    converged: bool = True


def fit(spec: ClassifierSpec, train: Dataset, rng_seed: int = 0) -> TrainedModel:
    """Fit a candidate model; deterministic given (spec, train, rng_seed)."""
    if spec.algorithm not in _FITTERS:
        raise LearnerError(f"unknown algorithm {spec.algorithm!r}")
    if train.has_missing:
        raise LearnerError(f"{train.name}: clean the dataset before fitting")
    scaler, transform = standardize(train)
    x_std = transform(train.features)
    impl = _FITTERS[spec.algorithm](x_std, train.labels, spec.hyperparameters, rng_seed)
    converged = getattr(impl, "converged", True)
    if not converged:
        warnings.warn(
            f"{spec.describe()} did not converge after "
            f"{getattr(impl, 'iterations', '?')} iterations; "
            "returning the last iterate",
            RuntimeWarning,
            stacklevel=2,
        )
    return TrainedModel(spec=spec, scaler=scaler, impl=impl, converged=converged)


def predict_scores(model: TrainedModel, x: np.ndarray) -> np.ndarray:
    """Real-valued scores for each row of x; higher = more likely faulty."""
    x_std = apply_scaler(model.scaler, x)
    scores = np.asarray(model.impl.score(x_std), dtype=float)
    if not np.isfinite(scores).all():
        raise LearnerError(f"{model.spec.describe()} produced non-finite scores")
    return scores


def select_candidate(grid: CandidateGrid, train: Dataset, inner_k: int = 5,
                     metric: str = "auc", rng_seed: int = 0) -> ClassifierSpec:
    """Pick the grid candidate with the best mean inner-CV metric.

    Ties go to the earliest grid position. The caller refits the winner on
    the full training split. Only the training data is ever touched here.
    """
    if metric not in _METRIC_FNS:
        raise LearnerError(f"unknown selection metric {metric!r}")
    if len(grid.candidates) == 1:
        return grid.candidates[0]

    metric_fn = _METRIC_FNS[metric]
    plan = stratified_folds(train.labels, inner_k, derive_seed(rng_seed, "inner-folds"))
    means = np.zeros(len(grid.candidates))
    for fold in range(inner_k):
        tr_idx = plan.train_indices(fold)
        te_idx = plan.test_indices(fold)
        sub = with_rows(train, tr_idx, suffix=f"[inner{fold}]")
        x_te = train.features[te_idx]
        y_te = train.labels[te_idx]
        for ci, cand in enumerate(grid.candidates):
            model = fit(cand, sub, derive_seed(rng_seed, "inner-fit", fold, ci))
            means[ci] += metric_fn(predict_scores(model, x_te), y_te)
    return grid.candidates[int(np.argmax(means))]
