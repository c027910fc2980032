"""Runtime configuration loaded from a JSON file.

The file names the providers to fan out to, ranking knobs and the offline
fixture locations. API keys never live in the file; each provider names an
environment variable instead. Relative paths resolve against the config
file's own directory.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

CONFIG_ENV_VAR = "IRAL_CONFIG"


@dataclass
class ProviderConfig:
    name: str
    kind: str  # google_like | bing_like | fixture
    endpoint_or_dir: str
    api_key_env_var: str | None = None
    daily_limit: int = 100

    @property
    def api_key(self) -> str | None:
        if not self.api_key_env_var:
            return None
        return os.environ.get(self.api_key_env_var)


@dataclass
class AppConfig:
    providers: list[ProviderConfig] = field(default_factory=list)
    weights: tuple[float, ...] = (1.0,) * 9
    damping: float = 0.85
    tolerance: float = 1e-9
    max_iter: int = 200
    formula_variant: str = "appendix3"
    fetch_concurrency: int = 8
    offline: bool = True
    pages_dir: str | None = None
    page_timeout: float = 10.0
    synonyms_file: str | None = None
    synonyms_endpoint: str | None = None
    synonyms_response_path: str = "synonyms"
    quota_file: str | None = None
    static_dir: str | None = None

    @classmethod
    def from_file(cls, path: str | Path) -> "AppConfig":
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        base = path.parent

        def respath(value: str | None) -> str | None:
            if value is None:
                return None
            p = Path(value)
            return str(p if p.is_absolute() else base / p)

        providers = [
            ProviderConfig(
                name=entry["name"],
                kind=entry["kind"],
                endpoint_or_dir=(
                    respath(entry["endpoint_or_dir"])
                    if entry["kind"] == "fixture"
                    else entry["endpoint_or_dir"]
                ),
                api_key_env_var=entry.get("api_key_env_var"),
                daily_limit=int(entry.get("daily_limit", 100)),
            )
            for entry in raw.get("providers", [])
        ]
        return cls(
            providers=providers,
            weights=tuple(float(w) for w in raw.get("weights", (1.0,) * 9)),
            damping=float(raw.get("damping", 0.85)),
            tolerance=float(raw.get("tolerance", 1e-9)),
            max_iter=int(raw.get("max_iter", 200)),
            formula_variant=raw.get("formula_variant", "appendix3"),
            fetch_concurrency=int(raw.get("fetch_concurrency", 8)),
            offline=bool(raw.get("offline", True)),
            pages_dir=respath(raw.get("pages_dir")),
            page_timeout=float(raw.get("page_timeout", 10.0)),
            synonyms_file=respath(raw.get("synonyms_file")),
            synonyms_endpoint=raw.get("synonyms_endpoint"),
            synonyms_response_path=raw.get("synonyms_response_path", "synonyms"),
            quota_file=respath(raw.get("quota_file")),
            static_dir=respath(raw.get("static_dir")),
        )

    @classmethod
    def from_env(cls, explicit_path: str | None = None) -> "AppConfig":
        path = explicit_path or os.environ.get(CONFIG_ENV_VAR)
        if path:
            return cls.from_file(path)
        return cls()
