"""URL canonicalization and duplicate removal for the merged result list.

Provider lists are interleaved round-robin (first provider fills slot 0,
the next slot 1, and so on, each stepping by the provider count), then
scanned in that order keeping the first record per canonical-URL hash.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence
from urllib.parse import urlsplit

from .errors import InvalidUrl
from .providers import SearchResultRecord

RESULT_BUDGET = 50

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a hash."""
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


@dataclass(frozen=True)
class CanonicalUrl:
    canonical: str
    hash: int


def normalize_url(url: str) -> CanonicalUrl:
    """Reduce an absolute http/https URL to its canonical form.

    Scheme and host are lowercased, one leading "www." label and the
    scheme's default port are dropped, as are the fragment and a single
    trailing slash on the path. Path case and the query string survive:
    a different query string is a different page.
    """
    parts = urlsplit(url)
    scheme = parts.scheme.lower()
    if scheme not in ("http", "https"):
        raise InvalidUrl(f"not an absolute http/https URL: {url!r}")
    host = (parts.hostname or "").lower()
    if not host:
        raise InvalidUrl(f"URL has no host: {url!r}")
    if host.startswith("www.") and len(host) > 4:
        host = host[4:]
    try:
        port = parts.port
    except ValueError as exc:
        raise InvalidUrl(f"bad port in URL: {url!r}") from exc
    default_port = 80 if scheme == "http" else 443
    netloc = host if port in (None, default_port) else f"{host}:{port}"
    path = parts.path
    if path.endswith("/"):
        path = path[:-1]
    canonical = f"{scheme}://{netloc}{path}"
    if parts.query:
        canonical += f"?{parts.query}"
    return CanonicalUrl(canonical=canonical, hash=fnv1a64(canonical.encode("utf-8")))


def interleave(lists: Sequence[Sequence[SearchResultRecord]]) -> list[SearchResultRecord]:
    """Round-robin merge preserving each provider's internal order."""
    merged: list[SearchResultRecord] = []
    for i in range(max((len(lst) for lst in lists), default=0)):
        for lst in lists:
            if i < len(lst):
                merged.append(lst[i])
    return merged


def merge_dedupe(
    lists: Sequence[Sequence[SearchResultRecord]],
    limit: int = RESULT_BUDGET,
) -> list[SearchResultRecord]:
    """Interleave provider lists and drop duplicate pages.

    Lists must already be in provider-priority order. The first record
    seen for a canonical-URL hash wins; output is capped at ``limit``.
    Records whose link cannot be canonicalized are dropped.
    """
    merged: list[SearchResultRecord] = []
    seen: set[int] = set()
    for record in interleave(lists):
        try:
            canon = normalize_url(record.link)
        except InvalidUrl:
            continue
        if canon.hash in seen:
            continue
        seen.add(canon.hash)
        merged.append(record)
        if len(merged) >= limit:
            break
    return merged
