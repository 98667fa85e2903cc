"""Class-imbalance correction and stratified fold construction.

Two oversamplers share the same skeleton: compute how many synthetic
minority rows are needed to hit the target ratio, allocate that budget over
minority donor points, then interpolate each synthetic point on the segment
between its donor and one of the donor's nearest minority neighbours.
The adaptive variant weights donors by how surrounded they are by majority
points; the reference variant spreads the budget uniformly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import DataError, Dataset, standardize


class SamplingError(ValueError):
    """Raised for invalid sampling or fold-construction requests."""


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of each instance to one of k folds, stratified by class."""

    k: int
    assignment: np.ndarray

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment != fold)


@dataclass(frozen=True)
class SamplingConfig:
    target_minority_ratio: float = 0.20
    k_neighbors: int = 5
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.target_minority_ratio <= 0.5:
            raise SamplingError("target_minority_ratio must be in (0, 0.5]")
        if self.k_neighbors < 1:
            raise SamplingError("k_neighbors must be >= 1")


def required_synthetic_count(n_minority: int, n_total: int, target_ratio: float) -> int:
    """Synthetic rows needed so the minority reaches target_ratio of the total.

    Solves (n_minority + G) / (n_total + G) = target_ratio, rounded half-up;
    zero when the data already meets the target.
    """
    if not 0 < n_minority < n_total:
        raise SamplingError("need 0 < n_minority < n_total")
    if n_minority / n_total >= target_ratio:
        return 0
    g = (target_ratio * n_total - n_minority) / (1.0 - target_ratio)
    return max(0, int(math.floor(g + 0.5)))


def adaptive_budgets(hardness: np.ndarray, total: int) -> np.ndarray:
    """Apportion ``total`` over donors proportionally to ``hardness``.

    Uses largest-remainder rounding; ties go to the lowest donor index.
    A zero hardness vector falls back to the uniform allocation.
    """
    hardness = np.asarray(hardness, dtype=float)
    if hardness.sum() <= 0.0:
        return uniform_budgets(total, len(hardness))
    share = hardness / hardness.sum() * total
    base = np.floor(share).astype(int)
    remainder = total - int(base.sum())
    if remainder:
        frac = share - base
        # stable: largest fractional part first, then lowest index
        order = np.lexsort((np.arange(len(frac)), -frac))
        base[order[:remainder]] += 1
    return base


def uniform_budgets(total: int, n_donors: int) -> np.ndarray:
    """Spread ``total`` as evenly as possible; remainder round-robins from donor 0."""
    base = np.full(n_donors, total // n_donors, dtype=int)
    base[: total % n_donors] += 1
    return base


def _neighbor_order(dist_row: np.ndarray) -> np.ndarray:
    # deterministic: break distance ties by index
    return np.lexsort((np.arange(len(dist_row)), dist_row))


def pairwise_sq_dists(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairwise squared Euclidean distances, |a| x |b|, without the 3-D blowup."""
    d2 = (a * a).sum(axis=1)[:, None] + (b * b).sum(axis=1)[None, :] - 2.0 * (a @ b.T)
    return np.maximum(d2, 0.0)


def _oversample(d: Dataset, cfg: SamplingConfig, adaptive: bool) -> Dataset:
    n_pos = d.n_positive
    n_min = min(n_pos, d.n - n_pos)
    if n_min == 0:
        raise SamplingError(f"{d.name}: no minority instances")
    total = required_synthetic_count(n_min, d.n, cfg.target_minority_ratio)
    if total == 0:
        return d

    minority_label = d.minority_label
    min_idx = np.flatnonzero(d.labels == minority_label)
    _, to_std = standardize(d.features)
    std_all = to_std(d.features)
    std_min = std_all[min_idx]

    if adaptive:
        # donor hardness: majority share among the k nearest neighbours in
        # the full standardized dataset
        k = cfg.k_neighbors
        d2_all = pairwise_sq_dists(std_min, std_all)
        hardness = np.empty(n_min)
        majority = d.labels != minority_label
        for i in range(n_min):
            order = _neighbor_order(d2_all[i])
            order = order[order != min_idx[i]][:k]
            hardness[i] = majority[order].sum() / k
        budgets = adaptive_budgets(hardness, total)
    else:
        budgets = uniform_budgets(total, n_min)

    # nearest minority neighbours of each donor (for interpolation partners)
    k_nn = min(cfg.k_neighbors, n_min - 1)
    partners: list[np.ndarray] = []
    if k_nn >= 1:
        d2_min = pairwise_sq_dists(std_min, std_min)
        for i in range(n_min):
            order = _neighbor_order(d2_min[i])
            partners.append(order[order != i][:k_nn])

    rng = np.random.default_rng(cfg.rng_seed)
    synthetic = np.empty((total, d.p))
    row = 0
    for i in range(n_min):
        for _ in range(budgets[i]):
            xi = d.features[min_idx[i]]
            if k_nn < 1:  # lone minority point: duplicate it
                synthetic[row] = xi
            else:
                z = partners[i][rng.integers(len(partners[i]))]
                lam = rng.uniform()
                synthetic[row] = xi + lam * (d.features[min_idx[z]] - xi)
            row += 1

    features = np.vstack([d.features, synthetic])
    labels = np.concatenate([d.labels, np.full(total, minority_label, dtype=int)])
    tag = "adasyn" if adaptive else "smote"
    return Dataset(name=d.name, features=features, feature_names=d.feature_names,
                   labels=labels, provenance=f"{d.provenance} | {tag}+{total}")


def adasyn(d: Dataset, cfg: SamplingConfig) -> Dataset:
    """Adaptive synthetic oversampling of the minority class.

    Donors surrounded by more majority points (among their k nearest
    neighbours over the whole standardized dataset) receive a larger share
    of the synthetic budget. Returns ``d`` unchanged when the minority
    ratio already meets the target. Deterministic given ``cfg.rng_seed``.
    """
    if d.has_missing:
        raise SamplingError(f"{d.name}: clean the dataset before oversampling")
    return _oversample(d, cfg, adaptive=True)


def smote(d: Dataset, cfg: SamplingConfig) -> Dataset:
    """Uniform-budget synthetic oversampling (reference variant)."""
    if d.has_missing:
        raise SamplingError(f"{d.name}: clean the dataset before oversampling")
    return _oversample(d, cfg, adaptive=False)


def stratified_folds(labels: np.ndarray, k: int, rng_seed: int) -> FoldPlan:
    """Assign instances to k folds with per-class counts differing by <= 1.

    Within each class the shuffle is driven solely by ``rng_seed``; the
    same seed always yields the same assignment.
    """
    labels = np.asarray(labels)
    if k < 2:
        raise SamplingError("need k >= 2 folds")
    rng = np.random.default_rng(rng_seed)
    assignment = np.empty(len(labels), dtype=int)
    for cls in (1, -1):
        idx = np.flatnonzero(labels == cls)
        if len(idx) < k:
            raise SamplingError(
                f"class {cls:+d} has {len(idx)} members, fewer than k={k}"
            )
        shuffled = rng.permutation(idx)
        assignment[shuffled] = np.arange(len(shuffled)) % k
    return FoldPlan(k=k, assignment=assignment)
