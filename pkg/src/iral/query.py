"""Query classification and synonym expansion.

Queries of one or two words are head terms and get expanded with synonyms
from a knowledge base; three or more words make a tail term, which is never
expanded. Knowledge-base trouble degrades to "no synonyms" instead of
failing the search.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Protocol

import requests

from .errors import EmptyQuery
from .text import tokenize

logger = logging.getLogger(__name__)

HEAD_MAX_TOKENS = 2


class QueryClass(Enum):
    HEAD = "head"
    TAIL = "tail"


@dataclass(frozen=True)
class Query:
    raw: str
    tokens: tuple[str, ...]
    klass: QueryClass

    @property
    def is_head(self) -> bool:
        return self.klass is QueryClass.HEAD


@dataclass(frozen=True)
class ExpandedQuery:
    base: Query
    synonyms: frozenset[str] = field(default_factory=frozenset)

    @property
    def match_terms(self) -> frozenset[str]:
        return frozenset(self.base.tokens) | self.synonyms


def classify_query(raw: str) -> Query:
    """Tokenize a raw query and classify it as head or tail.

    Raises EmptyQuery when the input is blank or contains no word
    characters once punctuation is stripped.
    """
    if not raw or not raw.strip():
        raise EmptyQuery("query is blank")
    tokens = tokenize(raw)
    if not tokens:
        raise EmptyQuery("query has no word tokens")
    klass = QueryClass.HEAD if len(tokens) <= HEAD_MAX_TOKENS else QueryClass.TAIL
    return Query(raw=raw, tokens=tuple(tokens), klass=klass)


class SynonymSource(Protocol):
    """Anything that can look up synonyms for a single term."""

    def synonyms_for(self, term: str) -> list[str]: ...


class JsonFileSynonyms:
    """Synonyms from a local JSON map {term: [synonym, ...]}, lowercase keys."""

    def __init__(self, path: str | Path):
        self._path = Path(path)
        self._map: dict[str, list[str]] | None = None

    def _load(self) -> dict[str, list[str]]:
        if self._map is None:
            with open(self._path, encoding="utf-8") as fh:
                raw = json.load(fh)
            self._map = {str(k).lower(): [str(v) for v in vs] for k, vs in raw.items()}
        return self._map

    def synonyms_for(self, term: str) -> list[str]:
        return self._load().get(term.lower(), [])


class HttpDictionarySynonyms:
    """Synonyms from an HTTP dictionary API.

    The endpoint is a format string with a {term} placeholder; the response
    is JSON and ``response_path`` walks dotted keys down to a list of
    synonym strings.
    """

    def __init__(
        self,
        endpoint: str,
        response_path: str = "synonyms",
        timeout: float = 5.0,
        fetch_json: Callable[[str], object] | None = None,
    ):
        self.endpoint = endpoint
        self.response_path = response_path
        self.timeout = timeout
        self._fetch_json = fetch_json or self._default_fetch

    def _default_fetch(self, url: str) -> object:
        resp = requests.get(url, timeout=self.timeout)
        resp.raise_for_status()
        return resp.json()

    def synonyms_for(self, term: str) -> list[str]:
        data = self._fetch_json(self.endpoint.format(term=requests.utils.quote(term)))
        for key in self.response_path.split("."):
            if not isinstance(data, dict) or key not in data:
                return []
            data = data[key]
        if not isinstance(data, list):
            return []
        return [str(s) for s in data]


def expand_query(q: Query, kb: SynonymSource | None) -> ExpandedQuery:
    """Attach knowledge-base synonyms to a head query.

    Tail queries always come back with an empty synonym set, as does any
    query when the knowledge base is missing or failing; a broken KB is
    logged and swallowed so the search itself still runs.
    """
    if not q.is_head or kb is None:
        return ExpandedQuery(base=q)
    synonyms: set[str] = set()
    for token in q.tokens:
        try:
            found = kb.synonyms_for(token)
        except Exception:
            logger.warning("synonym lookup failed for %r; continuing without", token)
            continue
        for entry in found:
            entry = entry.strip().lower()
            if entry and entry not in q.tokens:
                synonyms.add(entry)
    return ExpandedQuery(base=q, synonyms=frozenset(synonyms))
