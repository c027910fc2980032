"""iral: a meta-search engine that re-ranks aggregated results by on-page
optimization features, with link-graph and relevance calculators plus a
retrieval-evaluation harness."""

from .config import AppConfig
from .merge import CanonicalUrl, fnv1a64, merge_dedupe, normalize_url
from .pipeline import PipelineResult, SearchEngine
from .providers import (
    FixtureProvider,
    HttpProvider,
    QuotaLedger,
    SearchResultRecord,
    fetch_serp,
    parse_bing_like,
    parse_google_like,
)
from .query import ExpandedQuery, Query, QueryClass, classify_query, expand_query
from .rank import (
    LinkGraph,
    RankedResult,
    RelevanceBreakdown,
    WeightVector,
    combined_rank,
    normalize_features,
    pagerank,
    pagerank_single_pass,
    rank_results,
    relevance,
    score,
)
from .seo import AuditReport, SeoFeatureVector, audit_page, extract_features, fetch_pages

__version__ = "0.1.0"

__all__ = [
    "AppConfig",
    "AuditReport",
    "CanonicalUrl",
    "ExpandedQuery",
    "FixtureProvider",
    "HttpProvider",
    "LinkGraph",
    "PipelineResult",
    "Query",
    "QueryClass",
    "QuotaLedger",
    "RankedResult",
    "RelevanceBreakdown",
    "SearchEngine",
    "SearchResultRecord",
    "SeoFeatureVector",
    "WeightVector",
    "audit_page",
    "classify_query",
    "combined_rank",
    "expand_query",
    "extract_features",
    "fetch_pages",
    "fetch_serp",
    "fnv1a64",
    "merge_dedupe",
    "normalize_features",
    "normalize_url",
    "pagerank",
    "pagerank_single_pass",
    "parse_bing_like",
    "parse_google_like",
    "rank_results",
    "relevance",
    "score",
]
