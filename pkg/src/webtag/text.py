"""Shared text preprocessing: whitespace tokenization plus the three filters
(stoplist, non-alphabetic removal, length-2 removal) used across the toolkit.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable

from .porter import stem
from .stopwords import SMART_STOPLIST

# A TokenBag is a Counter mapping surviving lowercase tokens to counts.
TokenBag = Counter


def candidate_token(raw: str, stoplist: frozenset[str] = SMART_STOPLIST) -> str | None:
    """Lowercase a whitespace token and apply the three filters.

    Returns the surviving token, or None if it is dropped (non-alphabetic
    character, length <= 2, or stoplist member).
    """
    token = raw.lower()
    if len(token) <= 2 or not token.isalpha() or token in stoplist:
        return None
    return token


def preprocess(text: str, stoplist: frozenset[str] = SMART_STOPLIST) -> TokenBag:
    """Tokenize on whitespace and count the tokens that survive filtering."""
    bag: TokenBag = Counter()
    for raw in text.split():
        token = candidate_token(raw, stoplist)
        if token is not None:
            bag[token] += 1
    return bag


def stem_counts(bag: TokenBag) -> Counter:
    """Aggregate a token bag's counts under Porter stemming."""
    out: Counter = Counter()
    for token, count in bag.items():
        out[stem(token)] += count
    return out


def phrase_tokens(phrase: str, stoplist: frozenset[str] = SMART_STOPLIST) -> list[str]:
    """Usable tokens of a keyword phrase, in order, with multiplicity."""
    tokens = []
    for raw in phrase.split():
        token = candidate_token(raw, stoplist)
        if token is not None:
            tokens.append(token)
    return tokens


def phrase_stems(phrase: str, stoplist: frozenset[str] = SMART_STOPLIST) -> list[str]:
    """Stemmed usable tokens of a keyword phrase."""
    return [stem(t) for t in phrase_tokens(phrase, stoplist)]


def stem_key(phrase: str) -> tuple[str, ...]:
    """Per-word stem signature used to merge surface variants of a phrase.

    Applies no filtering: every whitespace word contributes its stem, so
    distinct catalog phrases differing only in inflection collide.
    """
    return tuple(stem(w) for w in phrase.lower().split())


def join_counts(bags: Iterable[TokenBag]) -> TokenBag:
    """Pointwise sum of several token bags."""
    total: TokenBag = Counter()
    for bag in bags:
        total.update(bag)
    return total
