"""Classifier specifications, hyperparameter validation, and default grids.

A candidate model is one algorithm plus one hyperparameter assignment; a
grid is the list of candidates that model selection searches over.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class LearnerError(ValueError):
    """Raised for unknown algorithms or invalid hyperparameters."""


def _positive_int(v) -> bool:
    return float(v) == int(v) and int(v) >= 1


_PARAM_RULES = {
    "logistic_regression": {},
    "ridge_regression": {"lambda": lambda v: float(v) >= 0.0},
    "gaussian_naive_bayes": {},
    "knn": {"k": _positive_int},
    "cart": {"min_leaf": _positive_int, "max_depth": _positive_int},
    "random_forest": {
        "n_trees": _positive_int,
        "feature_fraction": lambda v: 0.0 < float(v) <= 1.0,
        "min_leaf": _positive_int,
    },
    "linear_svm": {"c": lambda v: float(v) > 0.0},
    "mlp": {
        "hidden": _positive_int,
        "learning_rate": lambda v: float(v) > 0.0,
        "epochs": _positive_int,
    },
    "adaboost": {"rounds": _positive_int},
    "constant": {},
}

ALGORITHMS = tuple(sorted(_PARAM_RULES))


@dataclass(frozen=True)
class ClassifierSpec:
    """One algorithm with one hyperparameter assignment (a candidate model)."""

    algorithm: str
    params: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        rules = _PARAM_RULES.get(self.algorithm)
        if rules is None:
            raise LearnerError(f"unknown algorithm {self.algorithm!r}")
        for name, value in self.params:
            if name not in rules:
                raise LearnerError(f"{self.algorithm}: unknown hyperparameter {name!r}")
            if not rules[name](value):
                raise LearnerError(
                    f"{self.algorithm}: invalid value {value!r} for {name!r}"
                )

    @classmethod
    def make(cls, algorithm: str, **hyperparameters) -> "ClassifierSpec":
        return cls(algorithm=algorithm,
                   params=tuple(sorted(hyperparameters.items())))

    @property
    def hyperparameters(self) -> dict:
        return dict(self.params)

    def get(self, name: str, default=None):
        return self.hyperparameters.get(name, default)

    def describe(self) -> str:
        if not self.params:
            return self.algorithm
        inner = ",".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}"
                         for k, v in self.params)
        return f"{self.algorithm}({inner})"


@dataclass
class CandidateGrid:
    """All candidate models of one algorithm considered during selection."""

    algorithm: str
    candidates: list[ClassifierSpec]

    def __post_init__(self):
        if not self.candidates:
            raise LearnerError(f"{self.algorithm}: empty candidate grid")
        for spec in self.candidates:
            if spec.algorithm != self.algorithm:
                raise LearnerError(
                    f"grid for {self.algorithm} contains a {spec.algorithm} candidate"
                )

    @classmethod
    def from_params(cls, algorithm: str, assignments: list[dict]) -> "CandidateGrid":
        return cls(algorithm=algorithm,
                   candidates=[ClassifierSpec.make(algorithm, **a) for a in assignments])


def _log_spaced_ints(lo: int, hi: int, count: int) -> list[int]:
    if hi <= lo:
        return [lo]
    vals = np.unique(np.rint(np.geomspace(lo, hi, count)).astype(int))
    return [int(v) for v in vals]


def default_grid(algorithm: str, n_train: int) -> CandidateGrid:
    """Built-in hyperparameter grid, sized for the given training-set size."""
    if algorithm == "cart":
        leaves = _log_spaced_ints(1, max(2, n_train // 10), 12)
        return CandidateGrid.from_params("cart", [{"min_leaf": v} for v in leaves])
    if algorithm == "knn":
        ks = [k for k in (1, 3, 5, 7, 9, 11, 15, 21) if k < n_train]
        return CandidateGrid.from_params("knn", [{"k": k} for k in ks])
    if algorithm == "ridge_regression":
        lams = np.geomspace(1e-4, 1e4, 10)
        return CandidateGrid.from_params(
            "ridge_regression", [{"lambda": float(v)} for v in lams])
    if algorithm == "linear_svm":
        cs = np.geomspace(1e-3, 1e3, 7)
        return CandidateGrid.from_params("linear_svm", [{"c": float(v)} for v in cs])
    if algorithm == "mlp":
        return CandidateGrid.from_params(
            "mlp",
            [{"hidden": h, "learning_rate": lr}
             for h in (4, 16) for lr in (0.1, 1.0)])
    if algorithm == "random_forest":
        return CandidateGrid.from_params(
            "random_forest",
            [{"n_trees": t, "feature_fraction": f}
             for t in (50, 100, 250, 500) for f in (0.33, 0.6, 1.0)])
    if algorithm == "adaboost":
        return CandidateGrid.from_params(
            "adaboost", [{"rounds": r} for r in (50, 100, 200, 400)])
    if algorithm in ("logistic_regression", "gaussian_naive_bayes", "constant"):
        return CandidateGrid.from_params(algorithm, [{}])
    raise LearnerError(f"unknown algorithm {algorithm!r}")
