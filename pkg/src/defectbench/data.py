"""Loading, validation, and cleaning of tabular defect datasets.

The canonical in-memory form is :class:`Dataset`: a finite feature matrix
with ±1 labels (+1 = faulty). Loading may leave missing values (NaN) in the
matrix; :func:`clean_dataset` guarantees a fully finite result.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace

import numpy as np

MISSING_MARKERS = {"", "?"}

MIN_ROWS = 10


class DataError(ValueError):
    """Raised for malformed input files or datasets that violate invariants."""


@dataclass(frozen=True)
class Dataset:
    """Named feature matrix with ±1 labels.

    Invariants enforced at construction: no infinities in features, labels
    contain only +1/-1 with both classes present, n >= 10, p >= 1, unique
    feature names. NaN feature values are permitted only as not-yet-cleaned
    missing markers; cleaning removes them.
    """

    name: str
    features: np.ndarray
    feature_names: tuple[str, ...]
    labels: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=float)
        labels = np.asarray(self.labels, dtype=int)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        if feats.ndim != 2:
            raise DataError(f"{self.name}: features must be a 2-D matrix")
        n, p = feats.shape
        if n < MIN_ROWS:
            raise DataError(f"{self.name}: need at least {MIN_ROWS} rows, got {n}")
        if p < 1:
            raise DataError(f"{self.name}: need at least one feature")
        if len(self.feature_names) != p:
            raise DataError(f"{self.name}: {len(self.feature_names)} names for {p} columns")
        if len(set(self.feature_names)) != p:
            raise DataError(f"{self.name}: duplicate feature names")
        if np.isinf(feats).any():
            raise DataError(f"{self.name}: features contain infinities")
        if labels.shape != (n,):
            raise DataError(f"{self.name}: labels must be length-{n}")
        if not np.isin(labels, (-1, 1)).all():
            raise DataError(f"{self.name}: labels must be +1 or -1")
        if not ((labels == 1).any() and (labels == -1).any()):
            raise DataError(f"{self.name}: single-class labels")
        feats.setflags(write=False)
        labels.setflags(write=False)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]

    @property
    def n_positive(self) -> int:
        return int((self.labels == 1).sum())

    @property
    def minority_label(self) -> int:
        return 1 if self.n_positive * 2 <= self.n else -1

    @property
    def minority_fraction(self) -> float:
        n_min = min(self.n_positive, self.n - self.n_positive)
        return n_min / self.n

    @property
    def has_missing(self) -> bool:
        return bool(np.isnan(self.features).any())


@dataclass
class CleaningReport:
    """What :func:`clean_dataset` dropped, by category."""

    rows_dropped_missing: int = 0
    duplicate_rows_found: int = 0
    duplicates_removed: int = 0
    constant_features_removed: list[str] = field(default_factory=list)
    linear_combination_features_removed: list[str] = field(default_factory=list)


@dataclass
class CleaningPolicy:
    drop_missing_rows: bool = True
    dedup: bool = False
    lincomb_tol: float = 1e-8

    def __post_init__(self):
        if self.lincomb_tol <= 0:
            raise DataError("lincomb_tol must be positive")


@dataclass(frozen=True)
class ScalerParams:
    """Per-feature location/scale fitted on a training split.

    std is 1 wherever the training column was constant, so it is always
    strictly positive.
    """

    mean: np.ndarray
    std: np.ndarray


def load_csv_dataset(path, label_column: str, positive_label: str,
                     name: str | None = None) -> Dataset:
    """Load a header-row CSV into a Dataset.

    Cells equal to ``?`` or empty are treated as missing (NaN). Labels map
    to +1 where the raw value equals ``positive_label``, else -1. Row order
    is preserved.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        rows = list(reader)

    header = [h.strip() for h in header]
    if len(set(header)) != len(header):
        dupes = sorted({h for h in header if header.count(h) > 1})
        raise DataError(f"{path}: duplicate header names {dupes}")
    if label_column not in header:
        raise DataError(f"{path}: label column {label_column!r} not in header")
    label_idx = header.index(label_column)
    feature_names = tuple(h for i, h in enumerate(header) if i != label_idx)

    features = np.empty((len(rows), len(feature_names)))
    raw_labels = []
    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise DataError(f"{path}: row {r + 2} has {len(row)} cells, expected {len(header)}")
        raw_labels.append(row[label_idx].strip())
        c = 0
        for i, cell in enumerate(row):
            if i == label_idx:
                continue
            cell = cell.strip()
            if cell in MISSING_MARKERS:
                features[r, c] = np.nan
            else:
                try:
                    features[r, c] = float(cell)
                except ValueError:
                    raise DataError(
                        f"{path}: unparseable cell at row {r + 2}, "
                        f"column {header[i]!r}: {cell!r}"
                    ) from None
            c += 1

    if len(set(raw_labels)) < 2:
        raise DataError(f"{path}: single-class labels in column {label_column!r}")
    labels = np.where(np.array(raw_labels) == str(positive_label), 1, -1)
    if name is None:
        name = str(path).rsplit("/", 1)[-1].rsplit(".", 1)[0]
    return Dataset(name=name, features=features, feature_names=feature_names,
                   labels=labels, provenance=f"loaded from {path}")


def remove_linear_combinations(m: np.ndarray, tol: float) -> list[int]:
    """Return indices of a maximal keep-first set of linearly independent columns.

    A column is redundant when its residual after projection onto the
    already-retained columns has norm <= tol times its own norm. Zero
    columns are always redundant.
    """
    m = np.asarray(m, dtype=float)
    if not np.isfinite(m).all():
        raise DataError("matrix must be finite for linear-combination detection")
    if tol <= 0:
        raise DataError("tol must be positive")
    retained: list[int] = []
    basis: list[np.ndarray] = []  # orthonormal, spans retained columns
    for j in range(m.shape[1]):
        col = m[:, j]
        norm = np.linalg.norm(col)
        if norm == 0.0:
            continue
        resid = col.copy()
        for _ in range(2):  # re-orthogonalize once for numerical stability
            for q in basis:
                resid -= (q @ resid) * q
        if np.linalg.norm(resid) <= tol * norm:
            continue
        retained.append(j)
        basis.append(resid / np.linalg.norm(resid))
    return retained


def clean_dataset(d: Dataset, policy: CleaningPolicy | None = None) -> tuple[Dataset, CleaningReport]:
    """Apply the cleaning pipeline; returns a fully finite Dataset and a report.

    Order: drop missing-value rows (when flagged), count exact duplicate rows
    (remove only when dedup), drop zero-variance features, then drop linear
    combinations. Surviving cell values are never altered.
    """
    if policy is None:
        policy = CleaningPolicy()
    report = CleaningReport()
    feats, labels = d.features, d.labels

    missing_mask = np.isnan(feats).any(axis=1)
    if missing_mask.any():
        if not policy.drop_missing_rows:
            raise DataError(
                f"{d.name}: {int(missing_mask.sum())} rows have missing values "
                "and drop_missing_rows is disabled"
            )
        report.rows_dropped_missing = int(missing_mask.sum())
        feats, labels = feats[~missing_mask], labels[~missing_mask]
        _check_survivors(d.name, feats, labels, "missing-row removal")

    # duplicates are exact matches on (features, label)
    rows = np.column_stack([feats, labels])
    _, first_idx, counts = np.unique(rows, axis=0, return_index=True, return_counts=True)
    report.duplicate_rows_found = int((counts - 1).sum())
    if policy.dedup and report.duplicate_rows_found:
        keep = np.zeros(len(rows), dtype=bool)
        keep[first_idx] = True
        report.duplicates_removed = int((~keep).sum())
        feats, labels = feats[keep], labels[keep]
        _check_survivors(d.name, feats, labels, "duplicate removal")

    names = list(d.feature_names)
    constant = [j for j in range(feats.shape[1]) if np.ptp(feats[:, j]) == 0.0]
    if constant:
        report.constant_features_removed = [names[j] for j in constant]
        keep_cols = [j for j in range(feats.shape[1]) if j not in set(constant)]
        feats = feats[:, keep_cols]
        names = [names[j] for j in keep_cols]
        if not names:
            raise DataError(f"{d.name}: constant-feature removal left no features")

    retained = remove_linear_combinations(feats, policy.lincomb_tol)
    dropped = [j for j in range(feats.shape[1]) if j not in set(retained)]
    if dropped:
        report.linear_combination_features_removed = [names[j] for j in dropped]
        feats = feats[:, retained]
        names = [names[j] for j in retained]
        if not names:
            raise DataError(f"{d.name}: linear-combination removal left no features")

    cleaned = Dataset(name=d.name, features=feats, feature_names=tuple(names),
                      labels=labels, provenance=d.provenance + " | cleaned")
    return cleaned, report


def _check_survivors(name: str, feats: np.ndarray, labels: np.ndarray, step: str) -> None:
    if feats.shape[0] < MIN_ROWS:
        raise DataError(f"{name}: {step} left fewer than {MIN_ROWS} rows")
    if len(np.unique(labels)) < 2:
        raise DataError(f"{name}: {step} left a single class")


def standardize(train: Dataset | np.ndarray):
    """Fit per-column mean/std on training data.

    Returns ``(params, transform)`` where ``transform`` maps any matrix with
    the same column count into standardized space using the training
    parameters only. Constant columns get std 1 (so they map to zero).
    """
    feats = train.features if isinstance(train, Dataset) else np.asarray(train, dtype=float)
    if feats.size == 0:
        raise DataError("cannot standardize an empty matrix")
    mean = feats.mean(axis=0)
    std = feats.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    params = ScalerParams(mean=mean, std=std)

    def transform(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[1] != mean.shape[0]:
            raise DataError(
                f"column count mismatch: scaler fitted on {mean.shape[0]} "
                f"columns, got matrix with shape {x.shape}"
            )
        return (x - mean) / std

    return params, transform


def apply_scaler(params: ScalerParams, x: np.ndarray) -> np.ndarray:
    """Standardize ``x`` with previously fitted parameters."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[1] != params.mean.shape[0]:
        raise DataError(
            f"column count mismatch: scaler fitted on {params.mean.shape[0]} "
            f"columns, got matrix with shape {x.shape}"
        )
    return (x - params.mean) / params.std


def with_rows(d: Dataset, idx: np.ndarray, suffix: str = "") -> Dataset:
    """Row-subset view of a dataset (used for fold construction)."""
    return Dataset(name=d.name + suffix, features=d.features[idx],
                   feature_names=d.feature_names, labels=d.labels[idx],
                   provenance=d.provenance)
