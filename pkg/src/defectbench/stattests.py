"""Statistical comparison of classifiers across datasets.

Works on a classifiers x datasets matrix of one metric. The frequentist
path is average ranks -> Friedman chi-square -> pairwise rank gaps against
a critical distance; the Bayesian path is a signed-rank test with a
Dirichlet-process prior that reports the posterior probability of each
classifier winning or of the pair being practically equivalent (difference
inside a rope interval).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaincc
from scipy.stats import norm, rankdata


class StatTestError(ValueError):
    """Raised for invalid comparison inputs."""


@dataclass
class MetricMatrix:
    """k classifiers x N datasets of one higher-is-better metric."""

    metric: str
    classifiers: list[str]
    datasets: list[str]
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        k, n = self.values.shape
        if len(self.classifiers) != k or len(self.datasets) != n:
            raise StatTestError("name lists must match the value matrix shape")
        if k < 2 or n < 2:
            raise StatTestError("need at least 2 classifiers and 2 datasets")
        if len(set(self.classifiers)) != k:
            raise StatTestError("duplicate classifier names")
        if len(set(self.datasets)) != n:
            raise StatTestError("duplicate dataset names")
        if not np.isfinite(self.values).all():
            raise StatTestError("metric matrix must be finite (no missing cells)")

    @property
    def k(self) -> int:
        return self.values.shape[0]

    @property
    def n_datasets(self) -> int:
        return self.values.shape[1]

    def row(self, classifier: str) -> np.ndarray:
        try:
            return self.values[self.classifiers.index(classifier)]
        except ValueError:
            raise StatTestError(f"unknown classifier {classifier!r}") from None


def subset_matrix(m: MetricMatrix, names: list[str]) -> MetricMatrix:
    """Submatrix restricted to ``names`` (the drop-the-bad-ones workflow)."""
    missing = [n for n in names if n not in m.classifiers]
    if missing:
        raise StatTestError(f"classifiers not in matrix: {missing}")
    idx = [m.classifiers.index(n) for n in names]
    return MetricMatrix(metric=m.metric, classifiers=list(names),
                        datasets=list(m.datasets), values=m.values[idx])


@dataclass
class RankTable:
    """Average rank per classifier (1 = best) over the matrix's datasets."""

    classifiers: list[str]
    avg_ranks: np.ndarray
    k: int
    n_datasets: int

    def rank_of(self, classifier: str) -> float:
        return float(self.avg_ranks[self.classifiers.index(classifier)])

    def best(self) -> str:
        return self.classifiers[int(np.argmin(self.avg_ranks))]


@dataclass(frozen=True)
class RopeBounds:
    """Interval of metric differences treated as practical equivalence."""

    lower: float
    upper: float

    def __post_init__(self):
        if not (np.isfinite(self.lower) and np.isfinite(self.upper)):
            raise StatTestError("rope bounds must be finite")
        if not self.lower < 0.0 < self.upper:
            raise StatTestError("rope must straddle zero")


DEFAULT_ROPES = {"auc": RopeBounds(-0.01, 0.01), "h": RopeBounds(-0.05, 0.05)}


def default_rope(metric: str) -> RopeBounds:
    try:
        return DEFAULT_ROPES[metric]
    except KeyError:
        raise StatTestError(f"no default rope for metric {metric!r}") from None


@dataclass
class PosteriorTriple:
    """Posterior masses for left-wins / practically-equivalent / right-wins."""

    p_left: float
    p_rope: float
    p_right: float
    verdict: str
    mc_samples: int
    seed: int


def average_ranks(m: MetricMatrix) -> RankTable:
    """Per-dataset ranks (1 = highest value, midranks for ties), averaged."""
    ranks = np.apply_along_axis(
        lambda col: rankdata(-col, method="average"), 0, m.values
    )
    return RankTable(classifiers=list(m.classifiers), avg_ranks=ranks.mean(axis=1),
                     k=m.k, n_datasets=m.n_datasets)


def friedman_test(m: MetricMatrix) -> tuple[float, int, float]:
    """Tie-corrected Friedman statistic, df = k-1, chi-square upper-tail p.

    Requires k >= 3; for two classifiers use wilcoxon_signed_rank instead.
    """
    k, n = m.k, m.n_datasets
    if k < 3:
        raise StatTestError(
            "Friedman chi-square approximation needs k >= 3; "
            "use wilcoxon_signed_rank for two classifiers"
        )
    ranks = np.apply_along_axis(
        lambda col: rankdata(-col, method="average"), 0, m.values
    )
    row_sums = ranks.sum(axis=1)
    num = (k - 1) * (np.sum(row_sums**2) - n**2 * k * (k + 1) ** 2 / 4.0)
    den = np.sum(ranks**2) - n * k * (k + 1) ** 2 / 4.0
    if den <= 0.0:  # every dataset ranked all classifiers identically
        return 0.0, k - 1, 1.0
    stat = float(num / den)
    p = float(gammaincc((k - 1) / 2.0, stat / 2.0))
    return stat, k - 1, p


# studentized-range 0.05 critical values at infinite df, divided by sqrt(2);
# regenerable via tests/test_stattests.py's quadrature oracle
_Q_ALPHA_05 = {
    2: 1.960, 3: 2.344, 4: 2.569, 5: 2.728, 6: 2.850, 7: 2.948, 8: 3.031,
    9: 3.102, 10: 3.164, 11: 3.219, 12: 3.268, 13: 3.313, 14: 3.354,
    15: 3.391, 16: 3.426, 17: 3.458, 18: 3.489, 19: 3.517, 20: 3.544,
}


def nemenyi_q(k: int, alpha: float = 0.05) -> float:
    """Critical value for the rank post-hoc test at the given classifier count."""
    if alpha != 0.05:
        raise StatTestError("only the alpha = 0.05 critical-value table is embedded")
    try:
        return _Q_ALPHA_05[k]
    except KeyError:
        raise StatTestError(f"k = {k} outside the embedded table range [2, 20]") from None


def critical_distance(k: int, n_datasets: int, q_alpha: float) -> float:
    """Minimum significant average-rank gap: q_alpha * sqrt(k (k+1) / (6 N))."""
    if k < 2 or n_datasets < 1:
        raise StatTestError("need k >= 2 and N >= 1")
    return float(q_alpha * np.sqrt(k * (k + 1) / (6.0 * n_datasets)))


def nemenyi_pairwise(ranks: RankTable, cd: float) -> list[tuple[str, str, float, bool]]:
    """(i, j, rank gap, significant) for every unordered pair; gap >= cd wins."""
    out = []
    for i in range(ranks.k):
        for j in range(i + 1, ranks.k):
            gap = float(abs(ranks.avg_ranks[i] - ranks.avg_ranks[j]))
            out.append((ranks.classifiers[i], ranks.classifiers[j], gap, gap >= cd))
    return out


@dataclass
class WilcoxonResult:
    statistic: float      # rank sum of positive differences
    p_value: float
    n_used: int           # differences remaining after zeros are dropped
    method: str           # "exact", "normal", or "degenerate"


def _signed_rank_parts(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise StatTestError("need two equal-length vectors")
    d = a - b
    d = d[d != 0.0]
    return d


def _exact_sf_counts(ranks2: np.ndarray) -> np.ndarray:
    """Distribution of the positive-rank sum over all sign assignments.

    ``ranks2`` are doubled midranks (integers). Returns counts[w] = number of
    sign patterns whose doubled positive-rank sum equals w.
    """
    total = int(ranks2.sum())
    counts = np.zeros(total + 1, dtype=float)
    counts[0] = 1.0
    for r in ranks2:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: total + 1 - r]
        counts = counts + shifted
    return counts


def wilcoxon_signed_rank(a, b) -> WilcoxonResult:
    """Two-sided paired signed-rank test.

    Zero differences are dropped. Exact enumeration of the sign-flip null
    for n <= 20, normal approximation with tie and continuity correction
    above. All-zero differences yield the degenerate p = 1 result.
    """
    d = _signed_rank_parts(a, b)
    n = len(d)
    if n == 0:
        return WilcoxonResult(statistic=0.0, p_value=1.0, n_used=0, method="degenerate")
    if n < 5:
        raise StatTestError(f"need >= 5 nonzero differences, got {n}")

    ranks = rankdata(np.abs(d), method="average")
    w_pos = float(ranks[d > 0].sum())

    if n <= 20:
        ranks2 = np.rint(ranks * 2.0).astype(int)
        counts = _exact_sf_counts(ranks2)
        total = 2.0 ** n
        w2 = int(round(w_pos * 2.0))
        p_le = counts[: w2 + 1].sum() / total
        p_ge = counts[w2:].sum() / total
        p = min(1.0, 2.0 * min(p_le, p_ge))
        return WilcoxonResult(statistic=w_pos, p_value=float(p), n_used=n, method="exact")

    mean = n * (n + 1) / 4.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    tie_term = float(np.sum(tie_counts**3 - tie_counts)) / 48.0
    var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term
    diff = w_pos - mean
    z = (diff - 0.5 * np.sign(diff)) / np.sqrt(var)
    p = min(1.0, 2.0 * float(norm.sf(abs(z))))
    return WilcoxonResult(statistic=w_pos, p_value=p, n_used=n, method="normal")


def bayesian_rope_test(a, b, rope: RopeBounds, mc_samples: int = 50000,
                       seed: int = 0) -> PosteriorTriple:
    """Bayesian signed-rank comparison of paired per-dataset results.

    Differences d = a - b are augmented with a pseudo-observation at zero
    (Dirichlet-process prior, strength 0.5). Each Monte Carlo draw samples
    weights over the observations and splits the weighted mass of pairwise
    signed-rank sums into below-rope / in-rope / above-rope; the reported
    probabilities are the frequencies with which each region holds the
    largest mass. Deterministic given ``seed``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or len(a) < 2:
        raise StatTestError("need two equal-length vectors with N >= 2")
    if mc_samples < 1000:
        raise StatTestError("mc_samples must be at least 1000")

    z = np.concatenate([[0.0], a - b])
    sums = z[:, None] + z[None, :]
    above = (sums > 2.0 * rope.upper) + 0.5 * (sums == 2.0 * rope.upper)
    below = (sums < 2.0 * rope.lower) + 0.5 * (sums == 2.0 * rope.lower)

    rng = np.random.default_rng(seed)
    weights = rng.dirichlet([0.5] + [1.0] * (len(z) - 1), size=mc_samples)
    p_right_mass = np.einsum("si,ij,sj->s", weights, above, weights)
    p_left_mass = np.einsum("si,ij,sj->s", weights, below, weights)
    p_rope_mass = 1.0 - p_right_mass - p_left_mass

    tri = np.stack([p_left_mass, p_rope_mass, p_right_mass], axis=1)
    winners = np.argmax(tri, axis=1)
    freq = np.bincount(winners, minlength=3) / mc_samples
    p_left, p_rope, p_right = (float(x) for x in freq)

    if p_right > 0.95:
        verdict = "right_wins"
    elif p_left > 0.95:
        verdict = "left_wins"
    elif p_rope > 0.95:
        verdict = "practically_equivalent"
    else:
        verdict = "inconclusive"
    return PosteriorTriple(p_left=p_left, p_rope=p_rope, p_right=p_right,
                           verdict=verdict, mc_samples=mc_samples, seed=seed)


def ingest_metric_matrix(path, metric: str = "auc") -> MetricMatrix:
    """Read a classifiers x datasets CSV (first header cell ``classifier``).

    Lines starting with ``#`` are ignored so report provenance headers can
    round-trip. Errors name the offending row/column.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise StatTestError(f"cannot open {path}: {exc}") from exc
    with fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise StatTestError(f"{path}: empty matrix file")
    header = [h.strip() for h in rows[0]]
    if not header or header[0] != "classifier":
        raise StatTestError(f"{path}: first header cell must be 'classifier'")
    datasets = header[1:]
    classifiers = []
    values = []
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise StatTestError(f"{path}: row {r} has {len(row)} cells, expected {len(header)}")
        classifiers.append(row[0].strip())
        parsed = []
        for c, cell in enumerate(row[1:]):
            cell = cell.strip()
            if not cell:
                raise StatTestError(f"{path}: blank cell at row {r}, column {datasets[c]!r}")
            try:
                parsed.append(float(cell))
            except ValueError:
                raise StatTestError(
                    f"{path}: non-numeric cell at row {r}, column {datasets[c]!r}: {cell!r}"
                ) from None
        values.append(parsed)
    try:
        return MetricMatrix(metric=metric, classifiers=classifiers,
                            datasets=datasets, values=np.array(values))
    except StatTestError as exc:
        raise StatTestError(f"{path}: {exc}") from None
