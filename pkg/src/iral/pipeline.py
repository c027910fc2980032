"""End-to-end search pipeline: classify, expand, fan out, merge, measure, rank.

One SearchEngine instance owns the providers, knowledge base, page source
and quota ledger built from an AppConfig; each search request runs through
it independently, so concurrent requests only share the quota ledger.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .config import AppConfig
from .errors import AllProvidersFailed, EmptyQuery, PageOutOfRange, UndecodableContent
from .merge import merge_dedupe
from .providers import (
    FixtureProvider,
    HttpProvider,
    ProviderHandle,
    QuotaLedger,
    SearchResultRecord,
    fetch_serp,
)
from .query import (
    ExpandedQuery,
    HttpDictionarySynonyms,
    JsonFileSynonyms,
    SynonymSource,
    classify_query,
    expand_query,
)
from .rank import RankedResult, WeightVector, rank_results
from .seo import FixturePages, HttpPages, PageSource, SeoFeatureVector, extract_features, fetch_pages

logger = logging.getLogger(__name__)

PAGE_SIZE = 10
MAX_PAGES = 5


@dataclass
class PipelineResult:
    query: ExpandedQuery
    merged: list[SearchResultRecord]
    ranked: list[RankedResult]
    degraded: list[str] = field(default_factory=list)


def build_providers(config: AppConfig) -> list[ProviderHandle]:
    providers: list[ProviderHandle] = []
    for entry in config.providers:
        if entry.kind == "fixture":
            providers.append(
                FixtureProvider(entry.name, entry.endpoint_or_dir, daily_limit=entry.daily_limit)
            )
        else:
            providers.append(
                HttpProvider(
                    entry.name,
                    entry.kind,
                    entry.endpoint_or_dir,
                    api_key=entry.api_key,
                    daily_limit=entry.daily_limit,
                )
            )
    return providers


def build_synonym_source(config: AppConfig) -> SynonymSource | None:
    if config.synonyms_file:
        return JsonFileSynonyms(config.synonyms_file)
    if config.synonyms_endpoint:
        return HttpDictionarySynonyms(
            config.synonyms_endpoint, response_path=config.synonyms_response_path
        )
    return None


def build_page_source(config: AppConfig) -> PageSource | None:
    if config.pages_dir:
        return FixturePages(config.pages_dir)
    if not config.offline:
        return HttpPages(timeout=config.page_timeout)
    return None


class SearchEngine:
    """The whole query-to-ranked-results flow behind one object."""

    def __init__(
        self,
        config: AppConfig | None = None,
        providers: list[ProviderHandle] | None = None,
        kb: SynonymSource | None = None,
        pages: PageSource | None = None,
        quota: QuotaLedger | None = None,
    ):
        self.config = config or AppConfig()
        self.providers = providers if providers is not None else build_providers(self.config)
        self.kb = kb if kb is not None else build_synonym_source(self.config)
        self.pages = pages if pages is not None else build_page_source(self.config)
        self.quota = quota or QuotaLedger(self.config.quota_file)
        self.weights = WeightVector(self.config.weights)
        self.priority = {p.name: i for i, p in enumerate(self.providers)}

    def run(self, raw_query: str) -> PipelineResult:
        """Execute the full pipeline for one raw query string.

        Providers are queried concurrently with the base query (synonyms
        never go upstream; they only widen feature matching). Failures
        degrade the response rather than abort it, unless every provider
        fails.
        """
        expanded = expand_query(classify_query(raw_query), self.kb)
        base_text = expanded.base.raw.strip()

        lists: dict[str, list[SearchResultRecord]] = {}
        degraded: list[str] = []
        if not self.providers:
            raise AllProvidersFailed("no providers configured")
        with ThreadPoolExecutor(max_workers=len(self.providers)) as pool:
            futures = {
                pool.submit(fetch_serp, provider, base_text, self.quota): provider
                for provider in self.providers
            }
            for future, provider in futures.items():
                try:
                    lists[provider.name] = future.result()
                except Exception as exc:
                    logger.warning("provider %s failed: %s", provider.name, exc)
                    degraded.append(provider.name)
        if len(degraded) == len(self.providers):
            raise AllProvidersFailed("every provider failed; no results to merge")
        degraded.sort(key=lambda name: self.priority.get(name, 0))

        ordered = [lists[p.name] for p in self.providers if p.name in lists]
        merged = merge_dedupe(ordered)

        features: dict[str, SeoFeatureVector] = {}
        flagged: list[str] = []
        if self.pages is not None and merged:
            bodies = fetch_pages(merged, self.pages, concurrency=self.config.fetch_concurrency)
            for record in merged:
                body = bodies.get(record.link)
                if body is None:
                    flagged.append(record.link)
                    continue
                try:
                    features[record.link] = extract_features(body, record, expanded)
                except UndecodableContent:
                    flagged.append(record.link)
        else:
            flagged = [r.link for r in merged]

        ranked = rank_results(
            merged,
            features,
            self.weights,
            provider_priority=self.priority,
            flagged_links=flagged,
        )
        return PipelineResult(query=expanded, merged=merged, ranked=ranked, degraded=degraded)

    def search(self, raw_query: str, page: int = 1) -> dict:
        """One result page as a JSON-ready mapping.

        Pages run 1..5 with ten results each; a page past the available
        results is empty rather than an error.
        """
        if not isinstance(page, int) or page < 1 or page > MAX_PAGES:
            raise PageOutOfRange(f"page must be 1..{MAX_PAGES}, got {page}")
        if raw_query is None or not raw_query.strip():
            raise EmptyQuery("query is blank")
        outcome = self.run(raw_query)
        start = PAGE_SIZE * (page - 1)
        window = outcome.ranked[start : start + PAGE_SIZE]
        return {
            "query": raw_query,
            "page": page,
            "page_size": PAGE_SIZE,
            "total": len(outcome.ranked),
            "results": [
                {
                    "title": r.srr.title,
                    "link": r.srr.link,
                    "snippet": r.srr.snippet,
                    "display_link": r.srr.display_link,
                    "score": round(r.score, 9),
                    "rank": r.final_rank,
                }
                for r in window
            ],
            "degraded": outcome.degraded,
        }
