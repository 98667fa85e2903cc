"""Bundled sanity experiment: two synthetic defect datasets plus a config.

The datasets are pairs of well-separated Gaussian blobs with a minority
faulty class, so any reasonable learner should score near-perfect AUC and
the constant baseline should rank last. Used by the test suite's
end-to-end determinism check and handy as a quick install smoke test:

    python -c "import defectbench.sanity as s; print(s.write_sanity_experiment('sanity'))"
    defectbench run sanity/config.json --out sanity/store
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

_DATASETS = (
    # name, rows, features, minority fraction, mean shift per feature
    ("blobs_a", 240, 4, 0.10, 2.2),
    ("blobs_b", 300, 5, 0.15, 1.8),
)

CLASSIFIERS = [
    {"algorithm": "logistic_regression"},
    {"algorithm": "knn", "grid": [{"k": 1}, {"k": 5}]},
    {"algorithm": "random_forest", "grid": [{"n_trees": 25, "feature_fraction": 1.0}]},
    {"algorithm": "constant"},
]


def _write_blobs(path: Path, rows: int, features: int, minority: float,
                 shift: float, seed: int) -> None:
    rng = np.random.default_rng(seed)
    n_pos = int(round(rows * minority))
    x_neg = rng.normal(0.0, 1.0, size=(rows - n_pos, features))
    x_pos = rng.normal(shift, 1.0, size=(n_pos, features))
    x = np.vstack([x_neg, x_pos])
    y = np.array(["clean"] * (rows - n_pos) + ["faulty"] * n_pos)
    order = rng.permutation(rows)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"m{i}" for i in range(features)] + ["label"])
        for i in order:
            writer.writerow([f"{v:.9f}" for v in x[i]] + [y[i]])


def write_sanity_experiment(out_dir, master_seed: int = 1234,
                            data_seed: int = 20250811) -> Path:
    """Generate the datasets and config under out_dir; returns the config path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, (name, rows, features, minority, shift) in enumerate(_DATASETS):
        csv_path = out / f"{name}.csv"
        _write_blobs(csv_path, rows, features, minority, shift, data_seed + i)
        entries.append({"path": csv_path.name, "label_column": "label",
                        "positive_label": "faulty", "name": name})
    config = {
        "master_seed": master_seed,
        "datasets": entries,
        "classifiers": CLASSIFIERS,
        "metrics": ["auc", "h"],
        "outer_folds": 5,
        "inner_folds": 5,
        "target_minority_ratio": 0.20,
    }
    config_path = out / "config.json"
    config_path.write_text(json.dumps(config, indent=2) + "\n")
    return config_path
