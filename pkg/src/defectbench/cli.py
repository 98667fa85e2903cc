"""Command-line front end.

Subcommands: run (execute an experiment config), ingest (validate a metric
matrix), ranks / friedman / cd (single-step analyses), compare (full
comparison report from matrices), report (full report from a run's result
store). Exit codes: 0 success, 1 task failures, 2 invalid config or input,
3 refusing to clobber an existing output directory.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .experiment import (ConfigError, ExperimentConfig, aggregate, compare,
                         run_experiment, save_store)
from .report import cd_line, friedman_line, inputs_hash, write_report_files
from .stattests import (MetricMatrix, RopeBounds, StatTestError, average_ranks,
                        critical_distance, friedman_test, ingest_metric_matrix,
                        nemenyi_q)

EXIT_OK = 0
EXIT_TASK_FAILURE = 1
EXIT_CONFIG = 2
EXIT_CLOBBER = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="defectbench",
        description="Benchmark defect classifiers and compare them statistically.",
    )
    parser.add_argument("--version", action="version", version=f"defectbench {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an experiment config")
    p_run.add_argument("config", help="path to the experiment config (JSON)")
    p_run.add_argument("--out", required=True, help="result store directory")
    p_run.add_argument("--force", action="store_true",
                       help="overwrite an existing store directory")
    p_run.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: machine parallelism, "
                            "capped by DEFECTBENCH_THREADS)")

    p_ing = sub.add_parser("ingest", help="validate a metric matrix CSV")
    p_ing.add_argument("matrix", nargs="+", help="matrix CSV path(s)")
    p_ing.add_argument("--metric", default=None,
                       help="metric name for the matrices (default: infer from filename)")

    p_ranks = sub.add_parser("ranks", help="average ranks of a metric matrix")
    p_ranks.add_argument("matrix")
    p_ranks.add_argument("--metric", default=None)

    p_fr = sub.add_parser("friedman", help="Friedman test on a metric matrix")
    p_fr.add_argument("matrix")
    p_fr.add_argument("--metric", default=None)

    p_cd = sub.add_parser("cd", help="critical distance for k classifiers over N datasets")
    p_cd.add_argument("--k", type=int, required=True)
    p_cd.add_argument("--n", type=int, required=True)
    p_cd.add_argument("--alpha", type=float, default=0.05)

    p_cmp = sub.add_parser("compare", help="full comparison report from metric matrices")
    p_cmp.add_argument("matrix", nargs="+", help="one matrix CSV per metric")
    p_cmp.add_argument("--metric", default=None,
                       help="comma-separated metric names matching the matrix order "
                            "(default: infer from filenames)")
    p_cmp.add_argument("--subset", default=None,
                       help="comma-separated classifier subset to re-rank")
    p_cmp.add_argument("--rope", default=None,
                       help="lo,hi rope override applied to every metric")
    p_cmp.add_argument("--alpha", type=float, default=0.05)
    p_cmp.add_argument("--mc", type=int, default=50000)
    p_cmp.add_argument("--seed", type=int, default=0)
    p_cmp.add_argument("--out", required=True, help="report output directory")
    p_cmp.add_argument("--no-figures", action="store_true",
                       help="skip rendering figure files")

    p_rep = sub.add_parser("report", help="aggregate a result store and compare")
    p_rep.add_argument("--store", required=True, help="result store directory from 'run'")
    p_rep.add_argument("--out", required=True)
    p_rep.add_argument("--subset", default=None)
    p_rep.add_argument("--alpha", type=float, default=0.05)
    p_rep.add_argument("--mc", type=int, default=50000)
    p_rep.add_argument("--seed", type=int, default=0)
    p_rep.add_argument("--no-figures", action="store_true")
    return parser


def _infer_metric(path: str) -> str:
    stem = Path(path).stem.lower()
    is_auc = "auc" in stem
    is_h = stem == "h" or stem.endswith("_h") or stem.startswith("h_") or "_h_" in stem
    if is_auc and not is_h:
        return "auc"
    if is_h and not is_auc:
        return "h"
    raise StatTestError(
        f"cannot infer metric from filename {path!r}; pass --metric explicitly")


def _load_matrices(paths: list[str], metric_arg: str | None) -> dict[str, MetricMatrix]:
    if metric_arg:
        metrics = [m.strip() for m in metric_arg.split(",")]
        if len(metrics) == 1:
            metrics = metrics * len(paths)
        if len(metrics) != len(paths):
            raise StatTestError(
                f"--metric lists {len(metrics)} names for {len(paths)} matrices")
    else:
        metrics = [_infer_metric(p) for p in paths]
    if len(set(metrics)) != len(metrics):
        raise StatTestError(f"duplicate metric names: {metrics}")
    return {m: ingest_metric_matrix(p, metric=m) for m, p in zip(metrics, paths)}


def _parse_rope(text: str) -> RopeBounds:
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise StatTestError(f"--rope expects 'lo,hi', got {text!r}") from None
    return RopeBounds(lo, hi)


def _cmd_run(args) -> int:
    try:
        cfg = ExperimentConfig.from_json(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(args.out)
    if out.exists() and any(out.iterdir()) and not args.force:
        print(f"refusing to overwrite existing store {out} (use --force)",
              file=sys.stderr)
        return EXIT_CLOBBER
    print(f"defectbench {__version__} | master_seed={cfg.master_seed} | "
          "task seeds derive from fnv1a64(dataset|classifier|fold) mixed with "
          "the master seed")
    store = run_experiment(cfg, threads=args.threads)
    save_store(store, out)
    if store.failures:
        print(f"{len(store.failures)} task(s) failed:", file=sys.stderr)
        for rec in store.failures:
            print(f"  {rec.dataset}/{rec.classifier}/fold{rec.fold}: {rec.error}",
                  file=sys.stderr)
        return EXIT_TASK_FAILURE
    print(f"store written to {out} "
          f"({len(store.records)} fold records, all succeeded)")
    return EXIT_OK


def _cmd_ingest(args) -> int:
    for path in args.matrix:
        metric = args.metric or _infer_metric(path)
        m = ingest_metric_matrix(path, metric=metric)
        print(f"{path}: metric={m.metric} k={m.k} classifiers, "
              f"N={m.n_datasets} datasets")
    return EXIT_OK


def _cmd_ranks(args) -> int:
    metric = args.metric or _infer_metric(args.matrix)
    m = ingest_metric_matrix(args.matrix, metric=metric)
    table = average_ranks(m)
    order = sorted(range(m.k), key=lambda i: table.avg_ranks[i])
    print("classifier,avg_rank")
    for i in order:
        print(f"{table.classifiers[i]},{table.avg_ranks[i]:.4f}")
    return EXIT_OK


def _cmd_friedman(args) -> int:
    metric = args.metric or _infer_metric(args.matrix)
    m = ingest_metric_matrix(args.matrix, metric=metric)
    stat, df, p = friedman_test(m)
    print(f"friedman({metric}): chi2={stat:.3f} df={df} p={p:.3e}")
    return EXIT_OK


def _cmd_cd(args) -> int:
    q = nemenyi_q(args.k, args.alpha)
    cd = critical_distance(args.k, args.n, q)
    print(f"cd(k={args.k},N={args.n})={cd:.2f} with q={q:.3f} at alpha={args.alpha}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    matrices = _load_matrices(args.matrix, args.metric)
    subset = [s.strip() for s in args.subset.split(",")] if args.subset else None
    ropes = None
    if args.rope:
        rope = _parse_rope(args.rope)
        ropes = {m: rope for m in matrices}
    report = compare(matrices, subset=subset, alpha=args.alpha,
                     ropes=ropes, mc_samples=args.mc, seed=args.seed)
    flag_text = f"subset={subset} rope={args.rope} alpha={args.alpha} " \
                f"mc={args.mc} seed={args.seed}"
    source_hash = inputs_hash(args.matrix, extra=flag_text)
    written = write_report_files(report, args.out, source_hash,
                                 figures=not args.no_figures)
    for comp in report.comparisons:
        print(friedman_line(comp))
        print(cd_line(comp))
    print(f"report files written to {args.out}: "
          + ", ".join(p.name for p in written))
    return EXIT_OK


def _cmd_report(args) -> int:
    store_dir = Path(args.store)
    if not (store_dir / "matrices").is_dir():
        print(f"{store_dir} has no aggregated matrices "
              "(missing or non-publishable store)", file=sys.stderr)
        return EXIT_CONFIG
    matrix_paths = sorted((store_dir / "matrices").glob("*.csv"))
    matrices = {p.stem: ingest_metric_matrix(p, metric=p.stem) for p in matrix_paths}
    subset = [s.strip() for s in args.subset.split(",")] if args.subset else None
    report = compare(matrices, subset=subset, alpha=args.alpha,
                     mc_samples=args.mc, seed=args.seed)
    flag_text = f"subset={subset} alpha={args.alpha} mc={args.mc} seed={args.seed}"
    source_hash = inputs_hash(matrix_paths, extra=flag_text)
    written = write_report_files(report, args.out, source_hash,
                                 figures=not args.no_figures)
    print(f"report files written to {args.out}: "
          + ", ".join(p.name for p in written))
    return EXIT_OK


_COMMANDS = {
    "run": _cmd_run,
    "ingest": _cmd_ingest,
    "ranks": _cmd_ranks,
    "friedman": _cmd_friedman,
    "cd": _cmd_cd,
    "compare": _cmd_compare,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (StatTestError, ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
