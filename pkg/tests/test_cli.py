from __future__ import annotations

import json
import signal
import subprocess
import sys
import time

import pytest
import requests

from iral.cli import main


def run_cli(*argv):
    return main(list(argv))


class TestSearchCommand:
    def test_search_json_matches_service_shape(self, capsys, fixtures_dir):
        code = run_cli("--config", str(fixtures_dir / "config.offline.json"), "search", "alcoholism", "--json")
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["total"] == 16
        assert len(payload["results"]) == 10

    def test_search_human_output(self, capsys, fixtures_dir):
        code = run_cli("--config", str(fixtures_dir / "config.offline.json"), "search", "alcoholism")
        out = capsys.readouterr().out
        assert code == 0
        assert "16 results" in out
        assert "medicinenet" in out

    def test_blank_query_is_usage_error(self, capsys, fixtures_dir):
        code = run_cli("--config", str(fixtures_dir / "config.offline.json"), "search", "")
        assert code == 1
        assert "blank" in capsys.readouterr().err

    def test_unknown_subcommand_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            run_cli("frobnicate")
        assert exc.value.code == 1

    def test_runtime_failure_exit_code(self, capsys, tmp_path, fixtures_dir):
        config = tmp_path / "broken.json"
        config.write_text(json.dumps({
            "providers": [
                {"name": "google", "kind": "fixture", "endpoint_or_dir": str(tmp_path / "void")}
            ],
            "offline": True,
        }))
        code = run_cli("--config", str(config), "search", "alcoholism")
        assert code == 2


class TestEvalCommand:
    def test_report_lines_and_flags(self, capsys, fixtures_dir):
        code = run_cli("eval", "--judgments", str(fixtures_dir / "judgments" / "tables11-13.csv"))
        out = capsys.readouterr().out
        assert code == 0
        assert "0.44" in out
        assert "0.48" in out
        assert "0.24" in out
        assert out.count("DISAGREES") >= 3  # 0.31, 0.40 and the recall slip
        assert "0.42" in out

    def test_json_mode(self, capsys, fixtures_dir):
        code = run_cli("eval", "--judgments", str(fixtures_dir / "judgments" / "tables11-13.csv"), "--json")
        payload = json.loads(capsys.readouterr().out)
        assert code == 0
        flagged = {(c["engine"], c["query"]) for c in payload["precision"] if c["disagrees"]}
        assert ("bing", "alcoholism") in flagged
        assert ("google", "local computer shop") in flagged


class TestRankCommand:
    def test_offline_rank_produces_feature_table(self, capsys, fixtures_dir):
        code = run_cli(
            "rank",
            "--serps",
            str(fixtures_dir / "serp" / "google" / "alcoholism.json"),
            str(fixtures_dir / "serp" / "bing" / "alcoholism.json"),
            "--pages",
            str(fixtures_dir / "pages"),
            "--query",
            "alcoholism",
        )
        out = capsys.readouterr().out
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("rank,website,")
        assert len(lines) == 1 + 16


class TestImportanceCommand:
    def test_percentages_printed(self, capsys, tmp_path, fixtures_dir):
        run_cli(
            "rank",
            "--serps",
            str(fixtures_dir / "serp" / "google" / "alcoholism.json"),
            str(fixtures_dir / "serp" / "bing" / "alcoholism.json"),
            "--pages",
            str(fixtures_dir / "pages"),
            "--query",
            "alcoholism",
        )
        table = tmp_path / "table.csv"
        table.write_text(capsys.readouterr().out)
        code = run_cli("importance", "--table", str(table))
        out = capsys.readouterr().out
        assert code == 0
        lines = out.strip().split("\n")
        assert len(lines) == 9
        total = sum(float(line.split(":")[1].rstrip("%")) for line in lines)
        assert total == pytest.approx(100.0, abs=1e-6)


class TestAuditCommand:
    def test_local_file_report(self, capsys, tmp_path):
        page = tmp_path / "page.html"
        page.write_text(
            "<title>Seventy characters exactly padded out to pass the limit checker!!!!!</title>"
            '<meta name="revisit-after" content="12 days">'
            '<a href="http://x.example/a">a</a><a href="http://x.example/a">again</a>'
        )
        code = run_cli("audit", str(page), "--query", "padded")
        out = capsys.readouterr().out
        assert code == 0
        assert "exceeds 64 characters" in out
        assert "revisit-after: present: 12 days" in out
        assert "Found 2 urls from where 1 unique." in out
        assert "title_match: 1" in out

    def test_unfetchable_url_is_runtime_error(self, capsys):
        code = run_cli("audit", "http://127.0.0.1:9/nothing")
        assert code == 2


class TestServeCommand:
    def test_ephemeral_port_printed_and_serves(self, fixtures_dir):
        proc = subprocess.Popen(
            [sys.executable, "-m", "iral.cli",
             "--config", str(fixtures_dir / "config.offline.json"), "serve", "--port", "0"],
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
        )
        try:
            line = proc.stdout.readline().strip()
            assert line.startswith("listening on http://")
            url = line.split()[-1]
            deadline = time.time() + 5
            while time.time() < deadline:
                try:
                    assert requests.get(f"{url}/healthz", timeout=2).text == "ok"
                    break
                except requests.RequestException:
                    time.sleep(0.05)
            else:
                pytest.fail("server never answered")
            payload = requests.get(f"{url}/api/search?q=alcoholism&page=2", timeout=10).json()
            assert payload["total"] == 16
            assert len(payload["results"]) == 6
        finally:
            proc.send_signal(signal.SIGINT)
            try:
                proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                proc.kill()
