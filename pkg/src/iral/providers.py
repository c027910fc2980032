"""Search providers: wire-format parsing, quota accounting and fetching.

Two JSON wire shapes are understood. The google-like shape is a top-level
``items`` array with ``title``/``link``/``htmlSnippet``/``displayLink``
fields; the bing-like shape nests ``SearchResponse.Web.Results`` with
``Title``/``Url``/``Description``/``DisplayUrl``. A fixture provider reads
the same shapes from local files so everything runs offline.
"""

from __future__ import annotations

import json
import logging
import re
import threading
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from html.parser import HTMLParser
from pathlib import Path
from typing import Callable, Protocol
from urllib.parse import urlsplit

import requests

from .errors import MalformedResponse, ProviderUnavailable, QuotaExceeded

logger = logging.getLogger(__name__)

MAX_RESULTS_PER_PROVIDER = 40
DEFAULT_DAILY_LIMIT = 100


@dataclass(frozen=True)
class SearchResultRecord:
    """One provider hit."""

    title: str
    link: str
    snippet: str
    display_link: str
    provider: str
    provider_rank: int


# --- snippet cleaning ------------------------------------------------------

_ENTITY_NAMES = {"amp": "&", "lt": "<", "gt": ">", "quot": '"', "apos": "'"}


class _SnippetStripper(HTMLParser):
    """Drops tags; decodes the five XML entities plus numeric references."""

    def __init__(self) -> None:
        super().__init__(convert_charrefs=False)
        self.parts: list[str] = []

    def handle_data(self, data: str) -> None:
        self.parts.append(data)

    def handle_entityref(self, name: str) -> None:
        self.parts.append(_ENTITY_NAMES.get(name, f"&{name};"))

    def handle_charref(self, name: str) -> None:
        try:
            code = int(name[1:], 16) if name.startswith(("x", "X")) else int(name)
            self.parts.append(chr(code))
        except (ValueError, OverflowError):
            self.parts.append(f"&#{name};")


def strip_html(text: str) -> str:
    """Remove HTML tags and decode basic entities, collapsing whitespace."""
    parser = _SnippetStripper()
    parser.feed(text)
    parser.close()
    return re.sub(r"\s+", " ", "".join(parser.parts)).strip()


# --- wire-format parsing ---------------------------------------------------


def _is_absolute_http(url: str) -> bool:
    try:
        parts = urlsplit(url)
    except ValueError:
        return False
    return parts.scheme in ("http", "https") and bool(parts.netloc)


def _decode_json(body: bytes) -> object:
    try:
        return json.loads(body)
    except (ValueError, UnicodeDecodeError) as exc:
        raise MalformedResponse(f"response body is not JSON: {exc}") from exc


def parse_google_like(body: bytes, provider: str = "google") -> list[SearchResultRecord]:
    """Parse a google-like JSON body into ranked result records.

    A missing ``items`` array means zero results. Entries without a usable
    absolute link are skipped; ranks count accepted records from 1.
    """
    data = _decode_json(body)
    if not isinstance(data, dict) or "items" not in data:
        return []
    items = data["items"]
    if not isinstance(items, list):
        raise MalformedResponse("'items' is present but not an array")
    records = []
    for item in items:
        if not isinstance(item, dict):
            continue
        link = str(item.get("link", ""))
        if not _is_absolute_http(link):
            continue
        records.append(
            SearchResultRecord(
                title=str(item.get("title", "")),
                link=link,
                snippet=strip_html(str(item.get("htmlSnippet", ""))),
                display_link=str(item.get("displayLink", "")),
                provider=provider,
                provider_rank=len(records) + 1,
            )
        )
    return records


def parse_bing_like(body: bytes, provider: str = "bing") -> list[SearchResultRecord]:
    """Parse a bing-like JSON body (SearchResponse.Web.Results)."""
    data = _decode_json(body)
    results: object = data
    for key in ("SearchResponse", "Web", "Results"):
        if not isinstance(results, dict) or key not in results:
            return []
        results = results[key]
    if not isinstance(results, list):
        raise MalformedResponse("'Results' is present but not an array")
    records = []
    for item in results:
        if not isinstance(item, dict):
            continue
        link = str(item.get("Url", ""))
        if not _is_absolute_http(link):
            continue
        records.append(
            SearchResultRecord(
                title=str(item.get("Title", "")),
                link=link,
                snippet=strip_html(str(item.get("Description", ""))),
                display_link=str(item.get("DisplayUrl", "")),
                provider=provider,
                provider_rank=len(records) + 1,
            )
        )
    return records


def sniff_parse(body: bytes, provider: str) -> list[SearchResultRecord]:
    """Parse either wire shape, deciding by top-level structure."""
    data = _decode_json(body)
    if isinstance(data, dict) and "SearchResponse" in data:
        return parse_bing_like(body, provider=provider)
    return parse_google_like(body, provider=provider)


# --- quota accounting ------------------------------------------------------


@dataclass
class ProviderQuota:
    limit_per_day: int = DEFAULT_DAILY_LIMIT
    used_today: int = 0
    day: date = field(default_factory=lambda: datetime.now(timezone.utc).date())


class QuotaLedger:
    """Per-provider daily request counters, optionally persisted to JSON.

    The check-and-increment is atomic under an internal lock; counters
    reset when the UTC day rolls over. With no path the ledger lives in
    memory only.
    """

    def __init__(
        self,
        path: str | Path | None = None,
        today: Callable[[], date] | None = None,
    ):
        self._path = Path(path) if path else None
        self._today = today or (lambda: datetime.now(timezone.utc).date())
        self._lock = threading.Lock()
        self._state: dict[str, ProviderQuota] = {}
        if self._path and self._path.exists():
            self._load()

    def _load(self) -> None:
        try:
            raw = json.loads(self._path.read_text(encoding="utf-8"))
        except (ValueError, OSError):
            logger.warning("quota file %s unreadable; starting fresh", self._path)
            return
        for name, entry in raw.items():
            try:
                self._state[name] = ProviderQuota(
                    limit_per_day=int(entry["limit"]),
                    used_today=int(entry["used"]),
                    day=date.fromisoformat(entry["day"]),
                )
            except (KeyError, TypeError, ValueError):
                continue

    def _save(self) -> None:
        if not self._path:
            return
        payload = {
            name: {"limit": q.limit_per_day, "used": q.used_today, "day": q.day.isoformat()}
            for name, q in self._state.items()
        }
        self._path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self._path.with_suffix(".tmp")
        tmp.write_text(json.dumps(payload, indent=2), encoding="utf-8")
        tmp.replace(self._path)

    def consume(self, provider: str, limit: int = DEFAULT_DAILY_LIMIT) -> None:
        """Take one request from today's budget or raise QuotaExceeded."""
        with self._lock:
            today = self._today()
            quota = self._state.get(provider)
            if quota is None or quota.day != today:
                quota = ProviderQuota(limit_per_day=limit, day=today)
                self._state[provider] = quota
            quota.limit_per_day = limit
            if quota.used_today >= quota.limit_per_day:
                raise QuotaExceeded(f"{provider}: {quota.used_today}/{quota.limit_per_day} today")
            quota.used_today += 1
            self._save()

    def used_today(self, provider: str) -> int:
        with self._lock:
            quota = self._state.get(provider)
            if quota is None or quota.day != self._today():
                return 0
            return quota.used_today


# --- providers -------------------------------------------------------------


class ProviderHandle(Protocol):
    """A named search provider that can fetch and parse one query."""

    name: str
    daily_limit: int

    def fetch(self, query: str) -> bytes: ...

    def parse(self, body: bytes) -> list[SearchResultRecord]: ...


class HttpProvider:
    """Remote JSON search API, google-like or bing-like."""

    def __init__(
        self,
        name: str,
        kind: str,
        endpoint: str,
        api_key: str | None = None,
        daily_limit: int = DEFAULT_DAILY_LIMIT,
        timeout: float = 10.0,
        session: requests.Session | None = None,
    ):
        if kind not in ("google_like", "bing_like"):
            raise ValueError(f"unknown provider kind: {kind}")
        self.name = name
        self.kind = kind
        self.endpoint = endpoint
        self.api_key = api_key
        self.daily_limit = daily_limit
        self.timeout = timeout
        self._session = session or requests.Session()

    def _params(self, query: str) -> dict[str, str]:
        if self.kind == "google_like":
            params = {"q": query, "num": "10", "alt": "json"}
            if self.api_key:
                params["key"] = self.api_key
        else:
            params = {"Query": query, "Sources": "web", "Web.Count": str(MAX_RESULTS_PER_PROVIDER)}
            if self.api_key:
                params["AppId"] = self.api_key
        return params

    def fetch(self, query: str) -> bytes:
        try:
            resp = self._session.get(self.endpoint, params=self._params(query), timeout=self.timeout)
        except requests.RequestException as exc:
            raise ProviderUnavailable(f"{self.name}: {exc}") from exc
        if not 200 <= resp.status_code < 300:
            raise ProviderUnavailable(f"{self.name}: HTTP {resp.status_code}")
        return resp.content

    def parse(self, body: bytes) -> list[SearchResultRecord]:
        if self.kind == "google_like":
            return parse_google_like(body, provider=self.name)
        return parse_bing_like(body, provider=self.name)


class FixtureProvider:
    """Offline provider reading wire-shaped JSON files from a directory.

    The file for a query is ``<dir>/<slug>.json`` where the slug is the
    lowercased query with whitespace runs replaced by underscores.
    """

    def __init__(self, name: str, directory: str | Path, daily_limit: int = DEFAULT_DAILY_LIMIT):
        self.name = name
        self.directory = Path(directory)
        self.daily_limit = daily_limit

    @staticmethod
    def slug(query: str) -> str:
        return re.sub(r"\s+", "_", query.strip().lower())

    def fetch(self, query: str) -> bytes:
        path = self.directory / f"{self.slug(query)}.json"
        try:
            return path.read_bytes()
        except OSError as exc:
            raise ProviderUnavailable(f"{self.name}: no fixture for {query!r} ({path})") from exc

    def parse(self, body: bytes) -> list[SearchResultRecord]:
        return sniff_parse(body, provider=self.name)


def fetch_serp(
    provider: ProviderHandle,
    query: str,
    quota: QuotaLedger,
) -> list[SearchResultRecord]:
    """Issue one provider request for the base query and parse the results.

    Counts against the provider's daily quota before the request goes out;
    at most MAX_RESULTS_PER_PROVIDER records come back.
    """
    quota.consume(provider.name, provider.daily_limit)
    body = provider.fetch(query)
    return provider.parse(body)[:MAX_RESULTS_PER_PROVIDER]
