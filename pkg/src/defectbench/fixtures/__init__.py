"""Bundled benchmark metric matrices.

Four classifiers x datasets tables ship with the package: AUC and H values
for 17 classifiers over the 12 NASA MDP datasets and the 15 GitHub project
datasets. They serve as ready-made inputs for the comparison commands and
as regression targets for the test suite.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

FIXTURE_NAMES = ("mdp_auc", "mdp_h", "github_auc", "github_h")


def fixture_path(name: str) -> Path:
    """Filesystem path of a bundled matrix (one of FIXTURE_NAMES)."""
    if name not in FIXTURE_NAMES:
        raise ValueError(f"unknown fixture {name!r}; choose from {FIXTURE_NAMES}")
    ref = resources.files(__name__) / f"{name}.csv"
    return Path(str(ref))


def load_fixture(name: str):
    """Bundled matrix as a MetricMatrix; metric inferred from the name."""
    from ..stattests import ingest_metric_matrix

    metric = "auc" if name.endswith("auc") else "h"
    return ingest_metric_matrix(fixture_path(name), metric=metric)
