"""End-to-end protocol: clean, resample, nested cross-validation, scoring.

Each (dataset, classifier, outer fold) task resamples its training portion,
selects a candidate model with an inner cross-validation, refits the winner,
and scores the untouched test portion. Task seeds derive deterministically
from the master seed and the task key, so serial and threaded runs produce
identical stores.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .data import Dataset, clean_dataset, load_csv_dataset, with_rows
from .learners import CandidateGrid, ClassifierSpec, default_grid, fit, predict_scores, select_candidate
from .metrics import CostWeighting, auc, h_measure
from .sampling import SamplingConfig, adasyn, stratified_folds
from .seeding import derive_seed
from .stattests import (MetricMatrix, PosteriorTriple, RankTable, RopeBounds,
                        average_ranks, bayesian_rope_test, critical_distance,
                        default_rope, friedman_test, nemenyi_pairwise, nemenyi_q,
                        subset_matrix)

VALID_METRICS = ("auc", "h")
VALID_RESAMPLE_MODES = ("train_folds_only", "whole_dataset")


class ConfigError(ValueError):
    """Raised when an experiment configuration is invalid; names the field."""


@dataclass
class DatasetEntry:
    path: str
    label_column: str
    positive_label: str
    name: str | None = None


@dataclass
class ClassifierEntry:
    algorithm: str
    grid: list[dict] | None = None  # None: use the built-in default grid


@dataclass
class ExperimentConfig:
    datasets: list[DatasetEntry]
    classifiers: list[ClassifierEntry]
    master_seed: int
    target_minority_ratio: float = 0.20
    sampling_neighbors: int = 5
    outer_folds: int = 5
    inner_folds: int = 5
    metrics: tuple[str, ...] = ("auc", "h")
    beta_weighting: tuple[float, float] = (2.0, 2.0)
    ropes: dict = field(default_factory=dict)
    resample_mode: str = "train_folds_only"

    def __post_init__(self):
        if not self.datasets:
            raise ConfigError("datasets: need at least one entry")
        if not self.classifiers:
            raise ConfigError("classifiers: need at least one entry")
        if self.outer_folds < 2:
            raise ConfigError("outer_folds: must be >= 2")
        if self.inner_folds < 2:
            raise ConfigError("inner_folds: must be >= 2")
        if not self.metrics:
            raise ConfigError("metrics: need at least one")
        for m in self.metrics:
            if m not in VALID_METRICS:
                raise ConfigError(f"metrics: unknown metric {m!r}")
        if not 0.0 < self.target_minority_ratio <= 0.5:
            raise ConfigError("target_minority_ratio: must be in (0, 0.5]")
        if self.resample_mode not in VALID_RESAMPLE_MODES:
            raise ConfigError(
                f"resample_mode: must be one of {VALID_RESAMPLE_MODES}")
        algos = [c.algorithm for c in self.classifiers]
        if len(set(algos)) != len(algos):
            raise ConfigError("classifiers: duplicate algorithm entries")

    @property
    def selection_metric(self) -> str:
        return self.metrics[0]

    def rope_for(self, metric: str) -> RopeBounds:
        if metric in self.ropes:
            lo, hi = self.ropes[metric]
            return RopeBounds(lo, hi)
        return default_rope(metric)

    @classmethod
    def from_dict(cls, raw: dict, base_dir: Path | None = None) -> "ExperimentConfig":
        raw = dict(raw)
        if "master_seed" not in raw:
            raise ConfigError("master_seed: required field is missing")
        if not isinstance(raw["master_seed"], int):
            raise ConfigError("master_seed: must be an integer")
        try:
            ds_raw = raw.pop("datasets")
        except KeyError:
            raise ConfigError("datasets: required field is missing") from None
        datasets = []
        for i, entry in enumerate(ds_raw):
            for key in ("path", "label_column", "positive_label"):
                if key not in entry:
                    raise ConfigError(f"datasets[{i}].{key}: required field is missing")
            path = entry["path"]
            if base_dir is not None and not os.path.isabs(path):
                path = str(base_dir / path)
            datasets.append(DatasetEntry(path=path,
                                         label_column=str(entry["label_column"]),
                                         positive_label=str(entry["positive_label"]),
                                         name=entry.get("name")))
        try:
            clf_raw = raw.pop("classifiers")
        except KeyError:
            raise ConfigError("classifiers: required field is missing") from None
        classifiers = []
        for i, entry in enumerate(clf_raw):
            if "algorithm" not in entry:
                raise ConfigError(f"classifiers[{i}].algorithm: required field is missing")
            classifiers.append(ClassifierEntry(algorithm=entry["algorithm"],
                                               grid=entry.get("grid")))
        known = {"master_seed", "target_minority_ratio", "sampling_neighbors",
                 "outer_folds", "inner_folds", "metrics", "beta_weighting",
                 "ropes", "resample_mode"}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        kwargs = {k: raw[k] for k in known if k in raw}
        if "metrics" in kwargs:
            kwargs["metrics"] = tuple(kwargs["metrics"])
        if "beta_weighting" in kwargs:
            kwargs["beta_weighting"] = tuple(kwargs["beta_weighting"])
        return cls(datasets=datasets, classifiers=classifiers, **kwargs)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(raw, base_dir=path.parent)

    def to_dict(self) -> dict:
        return {
            "datasets": [{"path": d.path, "label_column": d.label_column,
                          "positive_label": d.positive_label, "name": d.name}
                         for d in self.datasets],
            "classifiers": [{"algorithm": c.algorithm, "grid": c.grid}
                            for c in self.classifiers],
            "master_seed": self.master_seed,
            "target_minority_ratio": self.target_minority_ratio,
            "sampling_neighbors": self.sampling_neighbors,
            "outer_folds": self.outer_folds,
            "inner_folds": self.inner_folds,
            "metrics": list(self.metrics),
            "beta_weighting": list(self.beta_weighting),
            "ropes": self.ropes,
            "resample_mode": self.resample_mode,
        }


@dataclass
class FoldRecord:
    dataset: str
    classifier: str
    fold: int
    selected: ClassifierSpec | None
    test_indices: np.ndarray | None
    scores: np.ndarray | None
    labels: np.ndarray | None
    metric_values: dict
    error: str | None = None


@dataclass
class ResultStore:
    """Per-(dataset, classifier, fold) results plus the resolved config."""

    config: ExperimentConfig
    records: dict = field(default_factory=dict)
    started_at: float = 0.0
    finished_at: float = 0.0

    def add(self, record: FoldRecord) -> None:
        self.records[(record.dataset, record.classifier, record.fold)] = record

    @property
    def failures(self) -> list[FoldRecord]:
        return [r for r in self.records.values() if r.error is not None]

    @property
    def publishable(self) -> bool:
        return not self.failures

    def dataset_names(self) -> list[str]:
        return sorted({k[0] for k in self.records})

    def classifier_names(self) -> list[str]:
        return sorted({k[1] for k in self.records})


def _grid_for(entry: ClassifierEntry, n_train: int) -> CandidateGrid:
    if entry.grid is None:
        return default_grid(entry.algorithm, n_train)
    return CandidateGrid.from_params(entry.algorithm, entry.grid)


def _metric_fn(metric: str, weighting: CostWeighting):
    if metric == "auc":
        return auc
    return lambda s, y: h_measure(s, y, weighting)


def _run_task(cleaned: Dataset, entry: ClassifierEntry, fold: int,
              plan, cfg: ExperimentConfig) -> FoldRecord:
    task_seed = derive_seed(cfg.master_seed, cleaned.name, entry.algorithm, fold)
    weighting = CostWeighting(*cfg.beta_weighting)
    try:
        tr_idx = plan.train_indices(fold)
        te_idx = plan.test_indices(fold)
        train = with_rows(cleaned, tr_idx, suffix=f"[fold{fold}]")
        if cfg.resample_mode == "train_folds_only":
            train = adasyn(train, SamplingConfig(
                target_minority_ratio=cfg.target_minority_ratio,
                k_neighbors=cfg.sampling_neighbors,
                rng_seed=derive_seed(task_seed, "resample")))
        grid = _grid_for(entry, train.n)
        winner = select_candidate(grid, train, inner_k=cfg.inner_folds,
                                  metric=cfg.selection_metric, rng_seed=task_seed)
        model = fit(winner, train, derive_seed(task_seed, "refit"))
        scores = predict_scores(model, cleaned.features[te_idx])
        labels = cleaned.labels[te_idx]
        values = {m: _metric_fn(m, weighting)(scores, labels) for m in cfg.metrics}
        return FoldRecord(dataset=cleaned.name, classifier=entry.algorithm,
                          fold=fold, selected=winner, test_indices=te_idx,
                          scores=scores, labels=labels, metric_values=values)
    except Exception as exc:  # record the failure, keep other tasks running
        return FoldRecord(dataset=cleaned.name, classifier=entry.algorithm,
                          fold=fold, selected=None, test_indices=None,
                          scores=None, labels=None, metric_values={},
                          error=f"{type(exc).__name__}: {exc}")


def _worker_count(threads: int | None) -> int:
    if threads is None:
        threads = os.cpu_count() or 1
    cap = os.environ.get("DEFECTBENCH_THREADS")
    if cap:
        threads = min(threads, max(1, int(cap)))
    return max(1, threads)


def run_experiment(cfg: ExperimentConfig, threads: int | None = None) -> ResultStore:
    """Execute the full protocol; per-task failures are recorded, not raised."""
    store = ResultStore(config=cfg, started_at=time.time())
    tasks = []
    for ds_entry in cfg.datasets:
        name = ds_entry.name
        raw = load_csv_dataset(ds_entry.path, ds_entry.label_column,
                               ds_entry.positive_label, name=name)
        cleaned, _ = clean_dataset(raw)
        if cfg.resample_mode == "whole_dataset":
            cleaned = adasyn(cleaned, SamplingConfig(
                target_minority_ratio=cfg.target_minority_ratio,
                k_neighbors=cfg.sampling_neighbors,
                rng_seed=derive_seed(cfg.master_seed, cleaned.name, "resample")))
        plan = stratified_folds(
            cleaned.labels, cfg.outer_folds,
            derive_seed(cfg.master_seed, cleaned.name, "outer-folds"))
        for entry in cfg.classifiers:
            for fold in range(cfg.outer_folds):
                tasks.append((cleaned, entry, fold, plan))

    workers = _worker_count(threads)
    if workers == 1:
        for args in tasks:
            store.add(_run_task(*args, cfg))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for record in pool.map(lambda a: _run_task(*a, cfg), tasks):
                store.add(record)
    store.finished_at = time.time()
    return store


def aggregate(store: ResultStore, metric: str) -> MetricMatrix:
    """Classifiers x datasets matrix of per-fold metric means."""
    datasets = store.dataset_names()
    classifiers = store.classifier_names()
    gaps = [f"{k[0]}/{k[1]}/fold{k[2]}: {r.error}"
            for k, r in sorted(store.records.items()) if r.error is not None]
    if gaps:
        raise ValueError("store has failed tasks; cannot aggregate:\n  " + "\n  ".join(gaps))
    values = np.empty((len(classifiers), len(datasets)))
    for i, clf in enumerate(classifiers):
        for j, ds in enumerate(datasets):
            folds = [r.metric_values[metric] for (d, c, _), r in store.records.items()
                     if d == ds and c == clf]
            expected = store.config.outer_folds
            if len(folds) != expected:
                raise ValueError(
                    f"{ds}/{clf}: expected {expected} fold records, found {len(folds)}")
            values[i, j] = float(np.mean(folds))
    return MetricMatrix(metric=metric, classifiers=classifiers,
                        datasets=datasets, values=values)


@dataclass
class MetricComparison:
    metric: str
    ranks: RankTable
    friedman_stat: float
    friedman_df: int
    friedman_p: float
    q_alpha: float
    cd: float
    nemenyi: list
    rope: RopeBounds
    bayes: list  # (classifier_i, classifier_j, PosteriorTriple)


@dataclass
class ComparisonReport:
    comparisons: list[MetricComparison]
    subset: list[str] | None
    alpha: float
    mc_samples: int
    seed: int
    tool_version: str = __version__


def compare(matrices: dict[str, MetricMatrix], subset: list[str] | None = None,
            alpha: float = 0.05, ropes: dict[str, RopeBounds] | None = None,
            mc_samples: int = 50000, seed: int = 0) -> ComparisonReport:
    """Ranks, Friedman, critical distance, rank post-hoc, and Bayesian pairs.

    ``matrices`` maps metric name to its classifiers x datasets matrix;
    an optional classifier subset re-ranks the submatrices, mirroring the
    drop-the-bad-classifiers workflow.
    """
    if not matrices:
        raise ValueError("no matrices to compare")
    name_sets = {tuple(m.classifiers) for m in matrices.values()}
    if len(name_sets) > 1:
        raise ValueError("matrices disagree on classifier names")
    comparisons = []
    for metric in sorted(matrices):
        m = matrices[metric]
        if subset is not None:
            if len(subset) < 2:
                raise ValueError("subset must name at least two classifiers")
            m = subset_matrix(m, subset)
        ranks = average_ranks(m)
        stat, df, p = friedman_test(m)
        q = nemenyi_q(m.k, alpha)
        cd = critical_distance(m.k, m.n_datasets, q)
        pairs = nemenyi_pairwise(ranks, cd)
        rope = (ropes or {}).get(metric) or default_rope(metric)
        bayes = []
        for i in range(m.k):
            for j in range(i + 1, m.k):
                pair_seed = derive_seed(seed, metric, m.classifiers[i], m.classifiers[j])
                triple = bayesian_rope_test(m.values[i], m.values[j], rope,
                                            mc_samples=mc_samples, seed=pair_seed)
                bayes.append((m.classifiers[i], m.classifiers[j], triple))
        comparisons.append(MetricComparison(
            metric=metric, ranks=ranks, friedman_stat=stat, friedman_df=df,
            friedman_p=p, q_alpha=q, cd=cd, nemenyi=pairs, rope=rope, bayes=bayes))
    return ComparisonReport(comparisons=comparisons, subset=subset, alpha=alpha,
                            mc_samples=mc_samples, seed=seed)


# ---------------------------------------------------------------------------
# persistence

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def save_store(store: ResultStore, out_dir) -> None:
    """Persist a store as config + per-(dataset, classifier) CSVs + matrices."""
    out = Path(out_dir)
    (out / "folds").mkdir(parents=True, exist_ok=True)
    (out / "scores").mkdir(parents=True, exist_ok=True)
    (out / "config.json").write_text(
        json.dumps(store.config.to_dict(), indent=2, sort_keys=True) + "\n")

    meta = {
        "tool_version": __version__,
        "started_at": store.started_at,
        "finished_at": store.finished_at,
        "publishable": store.publishable,
        "failures": [f"{r.dataset}/{r.classifier}/fold{r.fold}: {r.error}"
                     for r in store.failures],
    }
    (out / "run_meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")

    metrics = store.config.metrics
    pairs = sorted({(k[0], k[1]) for k in store.records})
    for ds, clf in pairs:
        folds = sorted(k[2] for k in store.records if k[0] == ds and k[1] == clf)
        with open(out / "folds" / f"{ds}__{clf}.csv", "w") as fh:
            fh.write("fold,selected,n_test," + ",".join(metrics) + ",error\n")
            for fold in folds:
                r = store.records[(ds, clf, fold)]
                if r.error is not None:
                    fh.write(f"{fold},,,{',' * (len(metrics) - 1)},{r.error}\n")
                    continue
                vals = ",".join(_fmt(r.metric_values[m]) for m in metrics)
                fh.write(f"{fold},{r.selected.describe()},{len(r.labels)},{vals},\n")
        with open(out / "scores" / f"{ds}__{clf}.csv", "w") as fh:
            fh.write("fold,row,score,label\n")
            for fold in folds:
                r = store.records[(ds, clf, fold)]
                if r.error is not None:
                    continue
                for idx, score, label in zip(r.test_indices, r.scores, r.labels):
                    fh.write(f"{fold},{idx},{_fmt(score)},{label}\n")

    if store.publishable:
        (out / "matrices").mkdir(exist_ok=True)
        for metric in metrics:
            matrix = aggregate(store, metric)
            write_matrix_csv(matrix, out / "matrices" / f"{metric}.csv")


def write_matrix_csv(m: MetricMatrix, path) -> None:
    with open(path, "w") as fh:
        fh.write("classifier," + ",".join(m.datasets) + "\n")
        for i, clf in enumerate(m.classifiers):
            fh.write(clf + "," + ",".join(_fmt(v) for v in m.values[i]) + "\n")
