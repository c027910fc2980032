"""Retrieval-quality metrics and tabular reports.

Precision and relative recall over judged runs, per-engine mean precision,
the per-result feature table, and a rank-correlation estimate of how much
each parameter mattered in an ordering.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import AllZero, EmptyRun, TooFewRows
from .rank import RankedResult
from .seo import FEATURE_NAMES

# a reported number is considered at odds with the computed one beyond
# print-rounding (absolute) or a factor of two (relative, for tiny values)
ABS_MISMATCH = 0.005
REL_MISMATCH = 2.0


@dataclass(frozen=True)
class JudgedRun:
    engine: str
    query: str
    total_retrieved: int
    evaluated: int
    more_relevant: int
    less_relevant: int
    irrelevant: int
    reported_precision: float | None = None
    reported_recall: float | None = None


def precision(run: JudgedRun) -> float:
    """Share of evaluated documents judged more relevant."""
    if run.evaluated <= 0:
        raise EmptyRun(f"{run.engine}/{run.query}: nothing evaluated")
    return run.more_relevant / run.evaluated


def relative_recall(relevant_counts: Mapping[str, float]) -> dict[str, float]:
    """Each engine's count over the sum across engines."""
    total = sum(relevant_counts.values())
    if total <= 0:
        raise AllZero("all engine counts are zero")
    return {engine: count / total for engine, count in relevant_counts.items()}


def mean_precision(per_query: Sequence[float]) -> float:
    if not per_query:
        raise EmptyRun("no per-query precisions")
    return sum(per_query) / len(per_query)


def values_disagree(computed: float, reported: float) -> bool:
    """True when a published number cannot be print-rounding of the computed one."""
    if abs(computed - reported) > ABS_MISMATCH:
        return True
    if reported != 0:
        ratio = computed / reported
        if ratio > REL_MISMATCH or ratio < 1.0 / REL_MISMATCH:
            return True
    return False


# --- judgments files and the evaluation report -------------------------------

JUDGMENTS_COLUMNS = (
    "engine",
    "query",
    "total_retrieved",
    "evaluated",
    "more",
    "less",
    "irrelevant",
)


def load_judgments(path: str | Path) -> list[JudgedRun]:
    """Read a judgments CSV.

    Required columns: engine,query,total_retrieved,evaluated,more,less,
    irrelevant. Optional trailing columns reported_precision and
    reported_recall carry previously published numbers to cross-check.
    """
    runs = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            missing = [c for c in JUDGMENTS_COLUMNS if row.get(c) in (None, "")]
            if missing:
                raise ValueError(f"judgments row missing {missing}: {row}")
            runs.append(
                JudgedRun(
                    engine=row["engine"].strip(),
                    query=row["query"].strip(),
                    total_retrieved=int(row["total_retrieved"].replace(",", "")),
                    evaluated=int(row["evaluated"]),
                    more_relevant=int(row["more"]),
                    less_relevant=int(row["less"]),
                    irrelevant=int(row["irrelevant"]),
                    reported_precision=_opt_float(row.get("reported_precision")),
                    reported_recall=_opt_float(row.get("reported_recall")),
                )
            )
    return runs


def _opt_float(raw: str | None) -> float | None:
    if raw is None or raw.strip() == "":
        return None
    return float(raw)


@dataclass(frozen=True)
class PrecisionCell:
    engine: str
    query: str
    computed: float
    reported: float | None
    disagrees: bool


@dataclass(frozen=True)
class RecallCell:
    engine: str
    query: str
    computed: float
    reported: float | None
    disagrees: bool


@dataclass
class EvalReport:
    precision_cells: list[PrecisionCell] = field(default_factory=list)
    recall_cells: list[RecallCell] = field(default_factory=list)
    mean_precision: dict[str, float] = field(default_factory=dict)
    mean_reported_precision: dict[str, float] = field(default_factory=dict)

    def cell(self, engine: str, query: str) -> PrecisionCell:
        for cell in self.precision_cells:
            if cell.engine == engine and cell.query == query:
                return cell
        raise KeyError((engine, query))

    def recall(self, engine: str, query: str) -> RecallCell:
        for cell in self.recall_cells:
            if cell.engine == engine and cell.query == query:
                return cell
        raise KeyError((engine, query))

    def as_dict(self) -> dict:
        return {
            "precision": [vars(c) for c in self.precision_cells],
            "relative_recall": [vars(c) for c in self.recall_cells],
            "mean_precision": self.mean_precision,
            "mean_reported_precision": self.mean_reported_precision,
        }


def evaluate_runs(runs: Sequence[JudgedRun]) -> EvalReport:
    """Full metric report over judged runs.

    Relative recall per query uses each run's total_retrieved count (the
    judge substitutes engine-reported totals when relevant counts are not
    comparable at engine scale). Published numbers, when present, are
    cross-checked and flagged where they disagree with their own inputs.
    """
    report = EvalReport()
    engines = list(dict.fromkeys(run.engine for run in runs))
    queries = list(dict.fromkeys(run.query for run in runs))

    for run in runs:
        computed = precision(run)
        disagrees = run.reported_precision is not None and values_disagree(
            computed, run.reported_precision
        )
        report.precision_cells.append(
            PrecisionCell(run.engine, run.query, computed, run.reported_precision, disagrees)
        )

    for query in queries:
        query_runs = [r for r in runs if r.query == query]
        counts = {r.engine: float(r.total_retrieved) for r in query_runs}
        recall = relative_recall(counts)
        for run in query_runs:
            computed = recall[run.engine]
            disagrees = run.reported_recall is not None and values_disagree(
                computed, run.reported_recall
            )
            report.recall_cells.append(
                RecallCell(run.engine, run.query, computed, run.reported_recall, disagrees)
            )

    for engine in engines:
        cells = [c for c in report.precision_cells if c.engine == engine]
        report.mean_precision[engine] = mean_precision([c.computed for c in cells])
        reported = [c.reported for c in cells if c.reported is not None]
        if len(reported) == len(cells):
            report.mean_reported_precision[engine] = mean_precision(reported)
    return report


# --- feature table ------------------------------------------------------------

TABLE_COLUMNS = ("rank", "website", *FEATURE_NAMES)


def serp_feature_table(ranked: Sequence[RankedResult]) -> list[dict[str, object]]:
    """One row per result in rank order: rank, website, nine parameters."""
    rows = []
    for result in ranked:
        row: dict[str, object] = {
            "rank": result.final_rank,
            "website": result.srr.display_link or result.srr.link,
        }
        row.update(zip(FEATURE_NAMES, result.features.as_tuple()))
        rows.append(row)
    return rows


def feature_table_csv(rows: Sequence[Mapping[str, object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TABLE_COLUMNS)
    for row in rows:
        writer.writerow([row[c] for c in TABLE_COLUMNS])
    return buf.getvalue()


def feature_table_json(rows: Sequence[Mapping[str, object]]) -> str:
    return json.dumps([{c: row[c] for c in TABLE_COLUMNS} for row in rows], indent=2) + "\n"


def load_feature_table(path: str | Path) -> list[dict[str, object]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        rows: list[dict[str, object]] = []
        for raw in reader:
            row: dict[str, object] = {"rank": int(raw["rank"]), "website": raw["website"]}
            for name in FEATURE_NAMES:
                row[name] = int(raw[name])
            rows.append(row)
    return rows


# --- parameter importance -------------------------------------------------------


def _midranks(values: Sequence[float]) -> list[float]:
    """Ranks 1..n with ties sharing their average rank."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Rank correlation with average ranks for ties (0 for constant input)."""
    rx, ry = _midranks(xs), _midranks(ys)
    n = len(rx)
    mx = sum(rx) / n
    my = sum(ry) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    if vx == 0 or vy == 0:
        return 0.0
    return cov / (vx * vy) ** 0.5


def parameter_importance(rows: Sequence[Mapping[str, object]]) -> dict[str, float]:
    """Per-parameter share (percent) of rank-order correlation strength.

    Correlates each parameter with the inverted rank (best = highest),
    takes absolute values, and normalizes them to sum to 100. Constant
    columns contribute nothing.
    """
    if len(rows) < 3:
        raise TooFewRows(f"need at least 3 rows, got {len(rows)}")
    inverted = [-float(row["rank"]) for row in rows]
    strength = {}
    for name in FEATURE_NAMES:
        column = [float(row[name]) for row in rows]
        strength[name] = abs(spearman(column, inverted))
    total = sum(strength.values())
    if total == 0:
        return {name: 0.0 for name in FEATURE_NAMES}
    return {name: 100.0 * value / total for name, value in strength.items()}


def format_number(value: float) -> str:
    """Up to nine significant digits, no exponent padding games."""
    return format(value, ".9g")


def importance_lines(importance: Mapping[str, float]) -> Iterable[str]:
    for name in FEATURE_NAMES:
        yield f"{name}: {format_number(importance[name])}%"
