"""Scoring and ordering of merged results.

Three calculators live here: the equal-weight feature score that orders
the merged list, a classical damped link-graph rank, and the CW/PW content
relevance measure with its relevance-modulated rank combination.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ZeroWeights
from .merge import normalize_url
from .providers import SearchResultRecord
from .query import ExpandedQuery
from .seo import BINARY_FEATURES, ZERO_FEATURES, SeoFeatureVector
from .text import STOP_WORDS, count_term, tokenize

logger = logging.getLogger(__name__)

N_FEATURES = 9
DEFAULT_DAMPING = 0.85
DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_ITER = 200


@dataclass(frozen=True)
class WeightVector:
    """Per-parameter weights; uniform by default."""

    weights: tuple[float, ...] = (1.0,) * N_FEATURES

    def __post_init__(self) -> None:
        if len(self.weights) != N_FEATURES:
            raise ValueError(f"expected {N_FEATURES} weights, got {len(self.weights)}")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")

    @property
    def total(self) -> float:
        return sum(self.weights)


def normalize_features(vectors: Sequence[SeoFeatureVector]) -> list[tuple[float, ...]]:
    """Scale raw feature vectors into [0,1] per parameter.

    Yes/no parameters pass through. Counts are min-max scaled over the
    given set; a constant column degenerates to 1 for nonzero values and
    0 otherwise.
    """
    if not vectors:
        return []
    rows = [v.as_tuple() for v in vectors]
    lo = [min(row[i] for row in rows) for i in range(N_FEATURES)]
    hi = [max(row[i] for row in rows) for i in range(N_FEATURES)]
    normalized = []
    for row in rows:
        out = []
        for i, value in enumerate(row):
            if i in BINARY_FEATURES:
                out.append(float(value))
            elif hi[i] == lo[i]:
                out.append(1.0 if value > 0 else 0.0)
            else:
                out.append((value - lo[i]) / (hi[i] - lo[i]))
        normalized.append(tuple(out))
    return normalized


def score(normalized: Sequence[float], w: WeightVector | None = None) -> float:
    """Weighted sum of normalized parameters, scaled into [0,1]."""
    w = w or WeightVector()
    if len(normalized) != len(w.weights):
        raise ValueError("feature/weight length mismatch")
    total = w.total
    if total == 0:
        raise ZeroWeights("all weights are zero")
    return sum(v * wi for v, wi in zip(normalized, w.weights)) / total


@dataclass(frozen=True)
class RankedResult:
    srr: SearchResultRecord
    features: SeoFeatureVector
    normalized: tuple[float, ...]
    score: float
    final_rank: int
    flagged: bool = False  # page body was missing or undecodable


def rank_results(
    merged: Sequence[SearchResultRecord],
    features: Mapping[str, SeoFeatureVector],
    w: WeightVector | None = None,
    provider_priority: Mapping[str, int] | None = None,
    flagged_links: Iterable[str] = (),
) -> list[RankedResult]:
    """Order deduped results by descending feature score.

    ``features`` maps each record's link to its measured vector; records
    without an entry rank with an all-zero vector. Ties break on
    (provider_rank, provider priority, canonical URL), which keeps the
    round-robin merge order for identical scores.
    """
    if not merged:
        return []
    w = w or WeightVector()
    if provider_priority is None:
        provider_priority = {}
        for record in merged:
            provider_priority.setdefault(record.provider, len(provider_priority))
    flagged = set(flagged_links)

    vectors = [features.get(r.link, ZERO_FEATURES) for r in merged]
    normalized = normalize_features(vectors)
    scored = [score(row, w) for row in normalized]

    order = sorted(
        range(len(merged)),
        key=lambda i: (
            -scored[i],
            merged[i].provider_rank,
            provider_priority.get(merged[i].provider, len(provider_priority)),
            normalize_url(merged[i].link).canonical,
        ),
    )
    return [
        RankedResult(
            srr=merged[i],
            features=vectors[i],
            normalized=normalized[i],
            score=scored[i],
            final_rank=position + 1,
            flagged=merged[i].link in flagged or merged[i].link not in features,
        )
        for position, i in enumerate(order)
    ]


# --- link-graph rank ---------------------------------------------------------


@dataclass
class LinkGraph:
    """Directed page graph for the damped rank calculation."""

    nodes: set[str] = field(default_factory=set)
    edges: set[tuple[str, str]] = field(default_factory=set)
    damping: float = DEFAULT_DAMPING

    def add_edge(self, src: str, dst: str) -> None:
        self.nodes.add(src)
        self.nodes.add(dst)
        self.edges.add((src, dst))

    def add_node(self, node: str) -> None:
        self.nodes.add(node)

    def out_degree(self, node: str) -> int:
        return sum(1 for s, _ in self.edges if s == node)

    def in_neighbors(self, node: str) -> list[str]:
        return sorted(s for s, d in self.edges if d == node)

    @property
    def n(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class PageRankResult:
    scores: dict[str, float]
    iterations: int
    converged: bool
    residual: float


def _rank_terms(g: LinkGraph, variant: str) -> tuple[float, float]:
    """(base term, sum coefficient) for the chosen update formula."""
    if variant == "appendix3":
        return 1.0 - g.damping, g.damping
    if variant == "section336":
        # alternate damping placement: base/n teleport, (1-d) on the sum
        return g.damping / g.n, 1.0 - g.damping
    raise ValueError(f"unknown formula variant: {variant}")


def pagerank(
    g: LinkGraph,
    tol: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_MAX_ITER,
    variant: str = "appendix3",
) -> PageRankResult:
    """Fixed-point iteration of PR(p) = base + c * sum(PR(q)/out(q)).

    Updates are synchronous from uniform base values; iteration stops when
    the largest per-node change drops below ``tol``. Dangling nodes keep
    their rank mass to themselves, so totals need not sum to one. When the
    loop hits ``max_iter`` first, the last iterate comes back with
    ``converged=False``.
    """
    if not g.nodes:
        raise ValueError("graph has no nodes")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    base, coeff = _rank_terms(g, variant)
    nodes = sorted(g.nodes)
    out_deg = {n: g.out_degree(n) for n in nodes}
    incoming: dict[str, list[str]] = {n: [] for n in nodes}
    for src, dst in g.edges:
        incoming[dst].append(src)

    scores = {n: base for n in nodes}
    residual = float("inf")
    iterations = 0
    for iterations in range(1, max_iter + 1):
        new_scores = {
            n: base + coeff * sum(scores[q] / out_deg[q] for q in incoming[n])
            for n in nodes
        }
        residual = max(abs(new_scores[n] - scores[n]) for n in nodes)
        scores = new_scores
        if residual < tol:
            return PageRankResult(scores, iterations, True, residual)
    logger.warning("rank iteration stopped at %d without converging", max_iter)
    return PageRankResult(scores, iterations, False, residual)


def pagerank_single_pass(
    g: LinkGraph,
    order: Sequence[str] | None = None,
    variant: str = "appendix3",
) -> dict[str, float]:
    """One sequential update sweep, the desk-check evaluation style.

    Nodes update in the given order against the *current* values, so a
    node later in the order already sees its predecessors' fresh scores.
    """
    base, coeff = _rank_terms(g, variant)
    nodes = list(order) if order is not None else sorted(g.nodes)
    if set(nodes) != g.nodes:
        raise ValueError("order must cover exactly the graph's nodes")
    out_deg = {n: g.out_degree(n) for n in g.nodes}
    scores = {n: base for n in g.nodes}
    for node in nodes:
        scores[node] = base + coeff * sum(
            scores[q] / out_deg[q] for q in g.in_neighbors(node)
        )
    return scores


# --- content relevance -------------------------------------------------------


@dataclass(frozen=True)
class RelevanceBreakdown:
    cw: float
    pw: float
    x: int
    z: int
    c: int
    d: int


def _query_substrings(tokens: Sequence[str]) -> list[tuple[str, ...]]:
    """All contiguous substrings of the non-stop query tokens."""
    meaningful = [t for t in tokens if t not in STOP_WORDS]
    subs = []
    for i in range(len(meaningful)):
        for j in range(i + 1, len(meaningful) + 1):
            subs.append(tuple(meaningful[i:j]))
    return sorted(set(subs))


def relevance(page_text: str, q: ExpandedQuery) -> RelevanceBreakdown:
    """Content weight and probability weight of a page for a query.

    Every contiguous run of the query's non-stop tokens is counted in the
    page; CW is the share of those occurrences claimed by the longest runs
    that occur at all, and PW is the fraction of distinct non-stop query
    terms present.
    """
    page_tokens = tokenize(page_text)
    substrings = _query_substrings(q.base.tokens)
    freq = {s: count_term(page_tokens, " ".join(s)) for s in substrings}

    z = sum(freq.values())
    occurring = [s for s in substrings if freq[s] > 0]
    max_len = max((len(s) for s in occurring), default=0)
    x = sum(freq[s] for s in occurring if len(s) == max_len)
    cw = x / z if z else 0.0

    terms = sorted({t for t in q.base.tokens if t not in STOP_WORDS})
    d = len(terms)
    c = sum(1 for t in terms if count_term(page_tokens, t) > 0)
    pw = c / d if d else 0.0
    return RelevanceBreakdown(cw=cw, pw=pw, x=x, z=z, c=c, d=d)


def combined_rank(
    page: str,
    g: LinkGraph,
    rel: RelevanceBreakdown,
    pr: PageRankResult | None = None,
) -> float:
    """Relevance-modulated link rank for one page.

    The in-link mass (converged rank of each backlink over its out-degree)
    is scaled by R = (CW + PW) / 2 inside the damped update; with no
    backlinks the score is the bare base term.
    """
    base = 1.0 - g.damping
    if pr is None:
        pr = pagerank(g)
    mass = sum(pr.scores[q] / g.out_degree(q) for q in g.in_neighbors(page))
    r = (rel.cw + rel.pw) / 2.0
    return base + g.damping * r * mass
