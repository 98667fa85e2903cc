"""Rendering of comparison results as markdown, CSV, and figure files.

Every emitted file carries a provenance header (tool version, input hash,
seeds) so reports are traceable and byte-stable across reruns.
"""

from __future__ import annotations

import hashlib
from pathlib import Path

from .experiment import ComparisonReport, MetricComparison


def inputs_hash(paths, extra: str = "") -> str:
    """SHA-256 over the input files' bytes plus any flag text."""
    h = hashlib.sha256()
    for p in paths:
        h.update(Path(p).read_bytes())
    h.update(extra.encode("utf-8"))
    return h.hexdigest()[:16]


def provenance_lines(report: ComparisonReport, source_hash: str) -> list[str]:
    lines = [
        f"tool_version={report.tool_version}",
        f"inputs_hash={source_hash}",
        f"seed={report.seed}",
        f"mc_samples={report.mc_samples}",
        f"alpha={report.alpha}",
    ]
    if report.subset:
        lines.append("subset=" + ",".join(report.subset))
    for comp in report.comparisons:
        lines.append(f"rope({comp.metric})=[{comp.rope.lower:g},{comp.rope.upper:g}]")
    return lines


def _md_table(header: list[str], rows: list[list[str]]) -> str:
    out = ["| " + " | ".join(header) + " |",
           "| " + " | ".join("---" for _ in header) + " |"]
    out += ["| " + " | ".join(row) + " |" for row in rows]
    return "\n".join(out)


def cd_line(comp: MetricComparison) -> str:
    return (f"cd(k={comp.ranks.k},N={comp.ranks.n_datasets})={comp.cd:.2f} "
            f"with q={comp.q_alpha:.3f}")


def friedman_line(comp: MetricComparison) -> str:
    p = f"{comp.friedman_p:.3e}" if comp.friedman_p >= 1e-12 else "<1e-12"
    return (f"friedman({comp.metric}): chi2={comp.friedman_stat:.3f} "
            f"df={comp.friedman_df} p={p}")


def render_markdown(report: ComparisonReport, source_hash: str) -> str:
    """Full comparison report: ranks, test lines, pairwise tables."""
    parts = ["# Classifier comparison report", ""]
    parts += [f"- {line}" for line in provenance_lines(report, source_hash)]
    parts.append("")

    # combined average-rank table, one column per metric
    classifiers = report.comparisons[0].ranks.classifiers
    header = ["classifier"] + [c.metric for c in report.comparisons]
    rows = []
    for name in classifiers:
        rows.append([name] + [f"{c.ranks.rank_of(name):.3f}" for c in report.comparisons])
    parts += ["## Average ranks", "", _md_table(header, rows), ""]

    for comp in report.comparisons:
        parts += [f"## {comp.metric}", ""]
        parts.append("- " + friedman_line(comp))
        parts.append("- " + cd_line(comp))
        parts.append(f"- rope=[{comp.rope.lower:g},{comp.rope.upper:g}]")
        parts.append("")
        rows = [[a, b, f"{gap:.3f}", "yes" if sig else "no"]
                for a, b, gap, sig in comp.nemenyi]
        parts += ["### Rank post-hoc pairs", "",
                  _md_table(["classifier 1", "classifier 2", "rank gap", "significant"], rows), ""]
        rows = []
        for a, b, t in comp.bayes:
            verdict = {"right_wins": b, "left_wins": a,
                       "practically_equivalent": "pe",
                       "inconclusive": "inconclusive"}[t.verdict]
            rows.append([a, b, f"{t.p_left:.3f}", f"{t.p_rope:.3f}",
                         f"{t.p_right:.3f}", verdict])
        parts += ["### Bayesian pairs", "",
                  _md_table(["classifier 1", "classifier 2", "p(2 wins)",
                             "p(rope)", "p(1 wins)", "verdict"], rows), ""]
    return "\n".join(parts)


def _write_csv(path: Path, provenance: list[str], header: str, rows: list[str]) -> None:
    with open(path, "w") as fh:
        for line in provenance:
            fh.write(f"# {line}\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def write_report_files(report: ComparisonReport, out_dir, source_hash: str,
                       figures: bool = True) -> list[Path]:
    """Write report.md plus per-metric CSVs (and figures); returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    prov = provenance_lines(report, source_hash)
    written = []

    md_path = out / "report.md"
    md_path.write_text(render_markdown(report, source_hash))
    written.append(md_path)

    classifiers = report.comparisons[0].ranks.classifiers
    rank_rows = []
    for name in classifiers:
        cells = [name] + [f"{c.ranks.rank_of(name):.17g}" for c in report.comparisons]
        rank_rows.append(",".join(cells))
    ranks_path = out / "ranks.csv"
    _write_csv(ranks_path, prov,
               "classifier," + ",".join(c.metric for c in report.comparisons), rank_rows)
    written.append(ranks_path)

    for comp in report.comparisons:
        nem_path = out / f"nemenyi_{comp.metric}.csv"
        _write_csv(nem_path, prov + [cd_line(comp), friedman_line(comp)],
                   "classifier_1,classifier_2,rank_gap,significant",
                   [f"{a},{b},{gap:.17g},{int(sig)}" for a, b, gap, sig in comp.nemenyi])
        written.append(nem_path)

        bayes_path = out / f"bayes_{comp.metric}.csv"
        _write_csv(bayes_path, prov,
                   "classifier_1,classifier_2,p_left,p_rope,p_right,verdict",
                   [f"{a},{b},{t.p_left:.17g},{t.p_rope:.17g},{t.p_right:.17g},{t.verdict}"
                    for a, b, t in comp.bayes])
        written.append(bayes_path)

        # critical-difference diagram as drawable coordinates
        coords_path = out / f"cd_diagram_{comp.metric}.csv"
        coord_rows = [f"rank,{name},{comp.ranks.rank_of(name):.17g}"
                      for name in classifiers]
        best = min(comp.ranks.avg_ranks)
        coord_rows.append(f"cd_bar,start,{best:.17g}")
        coord_rows.append(f"cd_bar,end,{best + comp.cd:.17g}")
        _write_csv(coords_path, prov + [cd_line(comp)], "element,label,position", coord_rows)
        written.append(coords_path)

    if figures:
        from .plotting import plot_critical_difference, plot_posteriors

        for comp in report.comparisons:
            fig_path = out / f"cd_diagram_{comp.metric}.png"
            plot_critical_difference(comp.ranks, comp.cd, fig_path,
                                     title=f"{comp.metric}: average ranks "
                                           f"(cd={comp.cd:.2f})")
            written.append(fig_path)
            post_path = out / f"bayes_posterior_{comp.metric}.png"
            plot_posteriors(comp.bayes, post_path,
                            title=f"{comp.metric}: Bayesian pairwise posteriors")
            written.append(post_path)
    return written
