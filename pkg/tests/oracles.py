"""Independent brute-force computations used to derive expected test values.

Nothing here may import from the package modules it checks: counting is
done with regexes or raw string scanning, arithmetic with fractions, so a
bug in the production path cannot hide in its own oracle.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence


def words(text: str) -> list[str]:
    """Lowercase word tokens via regex (production code tokenizes by hand)."""
    return re.findall(r"[^\s!-/:-@\[-`{-~]+", text.lower())


def occurrences(text: str, term: str) -> int:
    """Count whole-word (or contiguous-phrase) occurrences of term in text."""
    haystack = words(text)
    needle = words(term)
    if not needle:
        return 0
    count = 0
    for i in range(len(haystack) - len(needle) + 1):
        if haystack[i : i + len(needle)] == needle:
            count += 1
    return count


def href_walk(html: str) -> list[str]:
    """Regex-free href collector: raw character scanning only.

    Finds href attributes inside tags without any HTML parser or regex,
    returning values in document order (fragments-only targets skipped).
    """
    found = []
    i = 0
    lower = html.lower()
    while True:
        tag_start = lower.find("<", i)
        if tag_start < 0:
            break
        tag_end = lower.find(">", tag_start)
        if tag_end < 0:
            break
        tag = html[tag_start + 1 : tag_end]
        marker = tag.lower().find("href")
        if marker >= 0:
            rest = tag[marker + 4 :].lstrip()
            if rest.startswith("="):
                rest = rest[1:].lstrip()
                if rest[:1] in {'"', "'"}:
                    quote = rest[0]
                    value = rest[1 : rest.find(quote, 1)] if rest.find(quote, 1) > 0 else ""
                else:
                    cut = len(rest)
                    for j, ch in enumerate(rest):
                        if ch.isspace():
                            cut = j
                            break
                    value = rest[:cut]
                value = value.strip()
                if value and not value.startswith("#"):
                    found.append(value)
        i = tag_end + 1
    return found


def minmax_normalize(rows: Sequence[Sequence[int]], binary_axes: set[int]) -> list[list[Fraction]]:
    """Exact min-max scaling with Fractions; binaries pass through."""
    n = len(rows[0])
    lo = [min(r[i] for r in rows) for i in range(n)]
    hi = [max(r[i] for r in rows) for i in range(n)]
    out = []
    for row in rows:
        scaled = []
        for i, v in enumerate(row):
            if i in binary_axes:
                scaled.append(Fraction(v))
            elif hi[i] == lo[i]:
                scaled.append(Fraction(1) if v > 0 else Fraction(0))
            else:
                scaled.append(Fraction(v - lo[i], hi[i] - lo[i]))
        out.append(scaled)
    return out


def uniform_score(scaled: Sequence[Fraction]) -> Fraction:
    return sum(scaled, Fraction(0)) / len(scaled)


def midranks(values: Sequence[float]) -> list[Fraction]:
    """1-based ranks with ties averaged, by explicit tie-group walking."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks: list[Fraction] = [Fraction(0)] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        shared = Fraction(sum(range(i + 1, j + 2)), j - i + 1)
        for k in range(i, j + 1):
            ranks[order[k]] = shared
        i = j + 1
    return ranks


def spearman_exact(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation of midranks, in exact arithmetic until the root."""
    rx, ry = midranks(xs), midranks(ys)
    n = len(rx)
    mx = sum(rx) / n
    my = sum(ry) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    if vx == 0 or vy == 0:
        return 0.0
    return float(cov) / (float(vx) * float(vy)) ** 0.5
