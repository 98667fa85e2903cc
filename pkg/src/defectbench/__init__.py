"""defectbench: benchmarking harness for software defect classifiers.

Covers the full evaluation protocol: dataset cleaning, minority
oversampling, nested cross-validated model selection, AUC and H-measure
scoring, and frequentist plus Bayesian comparison of classifiers across
datasets.
"""

__version__ = "0.1.0"

from .data import (CleaningPolicy, CleaningReport, DataError, Dataset,
                   ScalerParams, clean_dataset, load_csv_dataset,
                   remove_linear_combinations, standardize)
from .metrics import (CostWeighting, MetricError, RocCurve, auc, h_measure,
                      pearson_correlation, roc_convex_hull, roc_points)
from .sampling import (FoldPlan, SamplingConfig, SamplingError, adasyn,
                       required_synthetic_count, smote, stratified_folds)
from .stattests import (MetricMatrix, PosteriorTriple, RankTable, RopeBounds,
                        StatTestError, WilcoxonResult, average_ranks,
                        bayesian_rope_test, critical_distance, default_rope,
                        friedman_test, ingest_metric_matrix, nemenyi_pairwise,
                        nemenyi_q, subset_matrix, wilcoxon_signed_rank)

__all__ = [name for name in dir() if not name.startswith("_")]
