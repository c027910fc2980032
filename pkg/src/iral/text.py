"""Tokenization and term counting shared by query handling, feature
extraction and the relevance calculator.

One tokenizer rules them all: split on Unicode whitespace, strip leading
and trailing ASCII punctuation, lowercase. Tokens that are nothing but
punctuation disappear.
"""

from __future__ import annotations

import string

_PUNCT = string.punctuation

# Compact English stop list; frozen so relevance scores are stable.
STOP_WORDS = frozenset(
    """
    a about an and are as at be by for from has he her his how i in is it
    its of on or she that the their them they this to was we were what
    when where which who will with you your
    """.split()
)


def tokenize(text: str) -> list[str]:
    """Split text into lowercase word tokens.

    Splits on any Unicode whitespace, strips ASCII punctuation from both
    ends of each piece and lowercases. Pieces that strip to nothing are
    dropped.
    """
    tokens = []
    for piece in text.split():
        token = piece.strip(_PUNCT).lower()
        if token:
            tokens.append(token)
    return tokens


def count_term(tokens: list[str], term: str) -> int:
    """Occurrences of a term in a token sequence.

    A single-word term counts token equality; a multi-word term counts
    contiguous (possibly overlapping) runs of its tokens.
    """
    needle = tokenize(term)
    if not needle or len(needle) > len(tokens):
        return 0
    if len(needle) == 1:
        return tokens.count(needle[0])
    n = len(needle)
    return sum(1 for i in range(len(tokens) - n + 1) if tokens[i : i + n] == needle)


def count_terms(tokens: list[str], terms: set[str] | frozenset[str]) -> int:
    """Total occurrences of every term in a match set, summed."""
    return sum(count_term(tokens, term) for term in sorted(terms))
