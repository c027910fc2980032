from __future__ import annotations

import json

import pytest

import oracles
from iral.errors import AllZero, EmptyRun, TooFewRows
from iral.evaluate import (
    JudgedRun,
    evaluate_runs,
    feature_table_csv,
    feature_table_json,
    load_feature_table,
    load_judgments,
    mean_precision,
    parameter_importance,
    precision,
    relative_recall,
    serp_feature_table,
    spearman,
)
from iral.providers import SearchResultRecord
from iral.rank import RankedResult
from iral.seo import FEATURE_NAMES, SeoFeatureVector


def run_for(more, evaluated=50, engine="google", query="alcoholism"):
    return JudgedRun(
        engine=engine, query=query, total_retrieved=1000, evaluated=evaluated,
        more_relevant=more, less_relevant=evaluated - more, irrelevant=0,
    )


class TestPrecision:
    def test_published_cells(self):
        assert precision(run_for(22)) == pytest.approx(0.44)
        assert precision(run_for(24)) == pytest.approx(0.48)
        assert precision(run_for(12)) == pytest.approx(0.24)

    def test_zero_relevant(self):
        assert precision(run_for(0)) == 0.0

    def test_empty_run(self):
        with pytest.raises(EmptyRun):
            precision(run_for(0, evaluated=0))

    def test_monotone_in_relevant(self):
        values = [precision(run_for(m)) for m in range(0, 51)]
        assert values == sorted(values)


class TestRelativeRecall:
    def test_alcoholism_totals(self):
        recall = relative_recall({"google": 34_100_000, "bing": 33_100_000, "iral": 50})
        assert recall["google"] == pytest.approx(0.51, abs=0.005)
        assert recall["bing"] == pytest.approx(0.49, abs=0.005)
        assert recall["iral"] == pytest.approx(7.44e-7, rel=1e-3)
        assert sum(recall.values()) == pytest.approx(1.0, abs=1e-12)

    def test_local_computer_shop_totals(self):
        recall = relative_recall({"google": 266_000_000, "bing": 304_000_000, "iral": 50})
        assert round(recall["google"], 4) == 0.4667
        assert round(recall["bing"], 4) == 0.5333
        # the formula value; roughly ten times the published 0.000000008
        assert recall["iral"] == pytest.approx(8.77e-8, rel=1e-3)

    def test_two_equal_counts(self):
        assert relative_recall({"a": 5, "b": 5}) == {"a": 0.5, "b": 0.5}

    def test_all_zero_raises(self):
        with pytest.raises(AllZero):
            relative_recall({"a": 0, "b": 0})


class TestMeanPrecision:
    def test_google_row(self):
        assert mean_precision([0.44, 0.40]) == pytest.approx(0.42)

    def test_iral_row_rounds_toward_published(self):
        assert mean_precision([0.48, 0.37]) == pytest.approx(0.425)
        # sits exactly on the 0.005 boundary; allow for its float representation
        assert mean_precision([0.48, 0.37]) == pytest.approx(0.43, abs=0.005 + 1e-12)

    def test_singleton(self):
        assert mean_precision([0.37]) == 0.37

    def test_empty(self):
        with pytest.raises(EmptyRun):
            mean_precision([])


class TestJudgmentsReport:
    def test_fixture_report(self, fixtures_dir):
        runs = load_judgments(fixtures_dir / "judgments" / "tables11-13.csv")
        assert len(runs) == 6
        report = evaluate_runs(runs)

        assert report.cell("google", "alcoholism").computed == pytest.approx(0.44)
        assert report.cell("iral", "alcoholism").computed == pytest.approx(0.48)
        assert report.cell("bing", "local computer shop").computed == pytest.approx(0.24)
        assert not report.cell("google", "alcoholism").disagrees

        # the two published numbers that do not follow from their own counts
        assert report.cell("bing", "alcoholism").computed == pytest.approx(0.32)
        assert report.cell("bing", "alcoholism").disagrees
        assert report.cell("google", "local computer shop").computed == pytest.approx(0.38)
        assert report.cell("google", "local computer shop").disagrees

        assert report.mean_reported_precision["google"] == pytest.approx(0.42)
        assert report.mean_precision["google"] == pytest.approx(0.41)

        # recall column: published order-of-magnitude slip gets flagged
        assert report.recall("iral", "local computer shop").disagrees
        assert not report.recall("iral", "alcoholism").disagrees
        assert not report.recall("google", "alcoholism").disagrees

    def test_recall_rows_sum_to_one(self, fixtures_dir):
        report = evaluate_runs(load_judgments(fixtures_dir / "judgments" / "tables11-13.csv"))
        for query in ("alcoholism", "local computer shop"):
            total = sum(c.computed for c in report.recall_cells if c.query == query)
            assert total == pytest.approx(1.0, abs=1e-12)


def ranked_row(rank, website, **features):
    record = SearchResultRecord(
        title=website, link=f"http://{website}/", snippet="", display_link=website,
        provider="google", provider_rank=rank,
    )
    fv = SeoFeatureVector(**features)
    return RankedResult(srr=record, features=fv, normalized=(0.0,) * 9, score=0.0, final_rank=rank)


class TestFeatureTable:
    def test_empty_is_header_only(self):
        assert feature_table_csv(serp_feature_table([])) == (
            "rank,website," + ",".join(FEATURE_NAMES) + "\n"
        )

    def test_single_row_has_eleven_columns(self):
        rows = serp_feature_table([ranked_row(1, "a.com", links_present=7)])
        text = feature_table_csv(rows)
        header, data = text.strip().split("\n")
        assert len(header.split(",")) == 11
        assert len(data.split(",")) == 11
        assert data.startswith("1,a.com,")

    def test_json_and_csv_round_trip(self, tmp_path):
        rows = serp_feature_table(
            [ranked_row(1, "a.com", links_present=7), ranked_row(2, "b.com", title_match=1)]
        )
        path = tmp_path / "table.csv"
        path.write_text(feature_table_csv(rows))
        assert load_feature_table(path) == rows
        parsed = json.loads(feature_table_json(rows))
        assert parsed[0]["website"] == "a.com"


TABLE9_LINKS = [170, 78, 7, 7, 12, 79, 322, 20, 66, 241]


class TestParameterImportance:
    def test_perfect_monotone_column(self):
        rows = [
            {"rank": i + 1, "website": "w", **dict.fromkeys(FEATURE_NAMES, 0), "links_present": 10 - i}
            for i in range(10)
        ]
        importance = parameter_importance(rows)
        assert importance["links_present"] == pytest.approx(100.0)
        assert spearman([10 - i for i in range(10)], [-(i + 1) for i in range(10)]) == pytest.approx(1.0)

    def test_constant_column_is_zero(self):
        rows = [
            {"rank": i + 1, "website": "w", **dict.fromkeys(FEATURE_NAMES, 3), "links_present": 10 - i}
            for i in range(10)
        ]
        importance = parameter_importance(rows)
        assert importance["meta_content_tags"] == 0.0

    def test_published_links_column_against_oracle(self):
        inverted = [-(i + 1) for i in range(10)]
        assert spearman(TABLE9_LINKS, inverted) == pytest.approx(-0.2674784392192284, abs=1e-12)
        assert abs(spearman(TABLE9_LINKS, inverted)) == pytest.approx(
            abs(oracles.spearman_exact(TABLE9_LINKS, inverted)), abs=1e-12
        )

    def test_percentages_sum_to_hundred(self):
        rows = [
            {
                "rank": i + 1,
                "website": "w",
                **{name: (i * (j + 1)) % 5 for j, name in enumerate(FEATURE_NAMES)},
            }
            for i in range(10)
        ]
        importance = parameter_importance(rows)
        assert sum(importance.values()) == pytest.approx(100.0, abs=1e-9)

    def test_too_few_rows(self):
        with pytest.raises(TooFewRows):
            parameter_importance([{"rank": 1, "website": "w", **dict.fromkeys(FEATURE_NAMES, 0)}])
