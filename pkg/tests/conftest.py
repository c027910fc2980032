from __future__ import annotations

import json
import time
from pathlib import Path

import pytest

from iral.config import AppConfig

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
SESSION_STARTED = time.monotonic()


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def google_alcoholism_body() -> bytes:
    return (FIXTURES / "serp" / "google" / "alcoholism.json").read_bytes()


@pytest.fixture(scope="session")
def bing_alcoholism_body() -> bytes:
    return (FIXTURES / "serp" / "bing" / "alcoholism.json").read_bytes()


@pytest.fixture()
def offline_config() -> AppConfig:
    return AppConfig.from_file(FIXTURES / "config.offline.json")


@pytest.fixture()
def degraded_config(tmp_path) -> AppConfig:
    """Offline config whose bing provider points at a directory with no fixtures."""
    raw = json.loads((FIXTURES / "config.offline.json").read_text())
    raw["providers"][1]["endpoint_or_dir"] = str(tmp_path / "empty")
    raw["pages_dir"] = str(FIXTURES / "pages")
    raw["synonyms_file"] = str(FIXTURES / "synonyms.json")
    raw["providers"][0]["endpoint_or_dir"] = str(FIXTURES / "serp" / "google")
    path = tmp_path / "config.json"
    path.write_text(json.dumps(raw))
    return AppConfig.from_file(path)
