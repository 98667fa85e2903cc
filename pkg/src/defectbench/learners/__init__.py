"""Built-in classifiers behind a uniform fit/score interface."""

from .core import TrainedModel, fit, predict_scores, select_candidate
from .spec import ALGORITHMS, CandidateGrid, ClassifierSpec, LearnerError, default_grid

__all__ = [
    "ALGORITHMS",
    "CandidateGrid",
    "ClassifierSpec",
    "LearnerError",
    "TrainedModel",
    "default_grid",
    "fit",
    "predict_scores",
    "select_candidate",
]
