"""On-page feature extraction and the page audit report.

A tolerant tag-soup scan (stdlib HTMLParser never rejects input) collects
titles, meta tags, images and link targets; from those we measure the nine
ranking parameters for a query and build a full audit of the optimization
tags a page carries.
"""

from __future__ import annotations

import fnmatch
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from email.utils import parsedate_to_datetime
from html.parser import HTMLParser
from pathlib import Path
from typing import Protocol, Sequence

import requests

from .errors import UndecodableContent
from .merge import normalize_url
from .providers import SearchResultRecord
from .query import ExpandedQuery
from .text import count_term, count_terms, tokenize

logger = logging.getLogger(__name__)

TITLE_LENGTH_LIMIT = 64

FEATURE_NAMES = (
    "title_match",
    "meta_description_hits",
    "meta_keyword_hits",
    "snippet_hits",
    "meta_expires_fresh",
    "meta_content_tags",
    "img_alt_count",
    "sitemap_present",
    "links_present",
)

# title_match, meta_expires_fresh and sitemap_present are yes/no columns
BINARY_FEATURES = frozenset({0, 4, 7})


@dataclass(frozen=True)
class SeoFeatureVector:
    title_match: int = 0
    meta_description_hits: int = 0
    meta_keyword_hits: int = 0
    snippet_hits: int = 0
    meta_expires_fresh: int = 0
    meta_content_tags: int = 0
    img_alt_count: int = 0
    sitemap_present: int = 0
    links_present: int = 0

    def as_tuple(self) -> tuple[int, ...]:
        return (
            self.title_match,
            self.meta_description_hits,
            self.meta_keyword_hits,
            self.snippet_hits,
            self.meta_expires_fresh,
            self.meta_content_tags,
            self.img_alt_count,
            self.sitemap_present,
            self.links_present,
        )


ZERO_FEATURES = SeoFeatureVector()


@dataclass
class MetaTag:
    present: bool = False
    value: str = ""


@dataclass
class AuditReport:
    url: str
    title: str
    title_length: int
    title_too_long: bool
    tags: dict[str, MetaTag]
    img_total: int
    img_with_alt: int
    breadcrumb: int
    sitemap_refs: list[str]
    link_counts: list[tuple[str, int]]
    links_total: int
    links_unique: int
    advisories: list[str] = field(default_factory=list)


# --- decoding and scanning ---------------------------------------------------

_CHARSET_META = re.compile(
    rb"""<meta[^>]+?(?:charset\s*=\s*["']?\s*([a-zA-Z0-9_\-]+))""", re.IGNORECASE
)


def decode_html(data: bytes | str) -> str:
    """Decode page bytes using a declared meta charset, falling back to UTF-8."""
    if isinstance(data, str):
        return data
    if data.startswith(b"\xef\xbb\xbf"):
        data = data[3:]
    match = _CHARSET_META.search(data[:4096])
    if match:
        charset = match.group(1).decode("ascii", "replace")
        try:
            return data.decode(charset)
        except (LookupError, UnicodeDecodeError):
            logger.debug("declared charset %r failed; trying utf-8", charset)
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise UndecodableContent(str(exc)) from exc


class _PageScan(HTMLParser):
    """Single pass over tag soup collecting everything the features need."""

    _SKIP_TEXT = {"script", "style"}

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.title_parts: list[str] = []
        self.metas: list[dict[str, str | None]] = []
        self.img_alts: list[str | None] = []
        self.anchors: list[dict[str, str]] = []  # href, text
        self.link_tags: list[dict[str, str]] = []
        self.text_parts: list[str] = []
        self.breadcrumb = False
        self._in_title = False
        self._skip_depth = 0
        self._open_anchors: list[dict[str, str]] = []

    def handle_starttag(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        attr_map = {k.lower(): v for k, v in attrs}
        marker = " ".join(
            str(attr_map.get(key) or "") for key in ("class", "id", "aria-label")
        ).lower()
        if "breadcrumb" in marker:
            self.breadcrumb = True
        if tag == "title":
            self._in_title = True
        elif tag == "meta":
            self.metas.append(attr_map)
        elif tag == "img":
            self.img_alts.append(attr_map.get("alt"))
        elif tag == "a":
            anchor = {"href": (attr_map.get("href") or "").strip(), "text": ""}
            self.anchors.append(anchor)
            self._open_anchors.append(anchor)
        elif tag == "link":
            self.link_tags.append(
                {
                    "href": (attr_map.get("href") or "").strip(),
                    "rel": (attr_map.get("rel") or "").lower(),
                    "title": (attr_map.get("title") or "").lower(),
                }
            )
        elif tag in self._SKIP_TEXT:
            self._skip_depth += 1

    def handle_endtag(self, tag: str) -> None:
        if tag == "title":
            self._in_title = False
        elif tag == "a" and self._open_anchors:
            self._open_anchors.pop()
        elif tag in self._SKIP_TEXT and self._skip_depth:
            self._skip_depth -= 1

    def handle_data(self, data: str) -> None:
        if self._skip_depth:
            return
        if self._in_title:
            self.title_parts.append(data)
        else:
            self.text_parts.append(data)
        for anchor in self._open_anchors:
            anchor["text"] += data

    @property
    def title(self) -> str:
        return re.sub(r"\s+", " ", "".join(self.title_parts)).strip()

    def meta_values(self, name: str) -> list[str]:
        """Content values of meta tags whose name or http-equiv matches."""
        values = []
        for meta in self.metas:
            key = (meta.get("name") or meta.get("http-equiv") or "").strip().lower()
            if key == name and meta.get("content") is not None:
                values.append(str(meta["content"]))
        return values

    def hrefs(self) -> list[str]:
        out = [a["href"] for a in self.anchors if a["href"]]
        out += [l["href"] for l in self.link_tags if l["href"]]
        return [h for h in out if not h.startswith("#")]


def scan_page(data: bytes | str) -> _PageScan:
    scan = _PageScan()
    scan.feed(decode_html(data))
    scan.close()
    return scan


def extract_text(data: bytes | str) -> str:
    """Visible text of a page (script/style excluded), for relevance scoring."""
    scan = scan_page(data)
    return " ".join([scan.title, *scan.text_parts])


# --- feature measurement -----------------------------------------------------


def _expires_fresh(values: Sequence[str], now: datetime) -> int:
    for value in values:
        value = value.strip()
        if not value:
            continue
        if value.lower() == "never":
            return 1
        try:
            expiry = parsedate_to_datetime(value)
        except (TypeError, ValueError):
            continue
        if expiry.tzinfo is None:
            expiry = expiry.replace(tzinfo=timezone.utc)
        if expiry >= now:
            return 1
    return 0


def _last_path_segment(href: str) -> str:
    path = href.split("#", 1)[0].split("?", 1)[0]
    return path.rstrip("/").rsplit("/", 1)[-1].lower()


def _sitemap_present(scan: _PageScan) -> int:
    for href in scan.hrefs():
        if fnmatch.fnmatch(_last_path_segment(href), "sitemap*.xml"):
            return 1
    for anchor in scan.anchors:
        if "sitemap" in tokenize(anchor["text"]):
            return 1
    for link in scan.link_tags:
        if "sitemap" in link["rel"] or "sitemap" in link["title"]:
            return 1
    return 0


def count_links(scan: _PageScan) -> tuple[int, int]:
    """(total, distinct) URL references from anchor and link hrefs."""
    hrefs = scan.hrefs()
    return len(hrefs), len(set(hrefs))


def extract_features(
    html: bytes | str,
    srr: SearchResultRecord,
    q: ExpandedQuery,
    now: datetime | None = None,
) -> SeoFeatureVector:
    """Measure the nine ranking parameters of one result page.

    Term counting is case-insensitive and whole-word; multi-word terms
    match as contiguous token runs. ``now`` anchors the expires check
    (defaults to the current UTC time).
    """
    now = now or datetime.now(timezone.utc)
    scan = scan_page(html)
    terms = q.match_terms
    title_tokens = tokenize(scan.title)
    description = tokenize(" ".join(scan.meta_values("description")))
    keywords = tokenize(" ".join(scan.meta_values("keywords")))
    return SeoFeatureVector(
        title_match=int(any(count_term(title_tokens, t) for t in terms)),
        meta_description_hits=count_terms(description, terms),
        meta_keyword_hits=count_terms(keywords, terms),
        snippet_hits=count_terms(tokenize(srr.snippet), terms),
        meta_expires_fresh=_expires_fresh(scan.meta_values("expires"), now),
        meta_content_tags=sum(1 for m in scan.metas if "content" in m),
        img_alt_count=sum(1 for alt in scan.img_alts if alt and alt.strip()),
        sitemap_present=_sitemap_present(scan),
        links_present=count_links(scan)[1],
    )


_AUDIT_TAGS = (
    "keywords",
    "description",
    "expires",
    "revisit-after",
    "robots",
    "distribution",
    "author",
    "copyright",
    "language",
)


def audit_page(html: bytes | str, url: str, now: datetime | None = None) -> AuditReport:
    """Catalog every optimization-relevant tag on a page."""
    now = now or datetime.now(timezone.utc)
    scan = scan_page(html)
    tags: dict[str, MetaTag] = {}
    for name in _AUDIT_TAGS:
        values = scan.meta_values(name)
        tags[name] = MetaTag(present=bool(values), value="; ".join(values))

    # charset can ride on content-type or a bare charset attribute
    content_type = scan.meta_values("content-type")
    charset_attrs = [str(m["charset"]) for m in scan.metas if m.get("charset")]
    tags["content-type"] = MetaTag(
        present=bool(content_type or charset_attrs),
        value="; ".join([*content_type, *charset_attrs]),
    )

    hrefs = scan.hrefs()
    counts: dict[str, int] = {}
    for href in hrefs:
        counts[href] = counts.get(href, 0) + 1
    link_counts = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    sitemap_refs = [
        h for h in dict.fromkeys(hrefs) if fnmatch.fnmatch(_last_path_segment(h), "sitemap*")
    ]

    title = scan.title
    advisories = []
    if len(title) > TITLE_LENGTH_LIMIT:
        advisories.append(f"title exceeds {TITLE_LENGTH_LIMIT} characters ({len(title)})")
    if not tags["description"].present:
        advisories.append("missing meta description")

    return AuditReport(
        url=url,
        title=title,
        title_length=len(title),
        title_too_long=len(title) > TITLE_LENGTH_LIMIT,
        tags=tags,
        img_total=len(scan.img_alts),
        img_with_alt=sum(1 for alt in scan.img_alts if alt and alt.strip()),
        breadcrumb=int(scan.breadcrumb),
        sitemap_refs=sitemap_refs,
        link_counts=link_counts,
        links_total=len(hrefs),
        links_unique=len(counts),
        advisories=advisories,
    )


# --- page retrieval ----------------------------------------------------------


class PageSource(Protocol):
    """Fetches one page body; returns None (or raises) when unavailable."""

    def get(self, url: str) -> bytes | None: ...


class FixturePages:
    """Pages stored as <dir>/<fnv1a64-hex-of-canonical-url>.html."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def path_for(self, url: str) -> Path:
        return self.directory / f"{normalize_url(url).hash:016x}.html"

    def get(self, url: str) -> bytes | None:
        try:
            return self.path_for(url).read_bytes()
        except OSError:
            return None


class HttpPages:
    """Live page fetcher with a per-request timeout."""

    def __init__(self, timeout: float = 10.0, session: requests.Session | None = None):
        self.timeout = timeout
        self._session = session or requests.Session()

    def get(self, url: str) -> bytes | None:
        try:
            resp = self._session.get(url, timeout=self.timeout)
        except requests.RequestException:
            return None
        if not 200 <= resp.status_code < 300:
            return None
        return resp.content


def fetch_pages(
    records: Sequence[SearchResultRecord],
    fetcher: PageSource,
    concurrency: int = 8,
) -> dict[str, bytes]:
    """Fetch result pages with bounded parallelism.

    Failures are isolated per URL: a page that cannot be fetched is simply
    absent from the returned map.
    """
    pages: dict[str, bytes] = {}
    if not records:
        return pages

    def grab(url: str) -> tuple[str, bytes | None]:
        try:
            return url, fetcher.get(url)
        except Exception:
            logger.warning("page fetch failed for %s", url)
            return url, None

    links = list(dict.fromkeys(r.link for r in records))
    with ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool:
        for url, body in pool.map(grab, links):
            if body is not None:
                pages[url] = body
    return pages
