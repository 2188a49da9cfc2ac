"""Evaluation metrics and experiment harness.

Two recall notions are kept separate on purpose: the binary hit-rate
(a document counts as labeled correctly when at least one top-k prediction
exactly matches a ground-truth keyword) used by the abstraction experiments,
and averaged set precision/recall used by the extraction experiments.
"Exact match" means equality of normalized phrases: lowercased, whitespace
collapsed and, by default, per-word stemmed.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .corpus import Corpus, TopicCatalog
from .denoise import cluster_two, distance_matrix, prune
from .extractors import KeywordCloud, RankedKeywords, catalog_extract
from .porter import stem
from .search import SearchIndex
from .stopwords import SMART_STOPLIST
from .text import TokenBag, preprocess

log = logging.getLogger(__name__)

_PUNCT = "".join(chr(c) for c in range(33, 127) if not chr(c).isalnum())


@dataclass(frozen=True)
class MatchNormalizer:
    stemming: bool = True
    lowercase: bool = True
    collapse_whitespace: bool = True

    def phrase(self, text: str) -> str:
        """Normalized form of a keyword phrase; idempotent."""
        words = text.split() if self.collapse_whitespace else [text]
        if self.lowercase:
            words = [w.lower() for w in words]
        if self.stemming:
            words = [stem(w) for w in words]
        return " ".join(words)

    def phrase_set(self, phrases: Iterable[str]) -> set[str]:
        return {self.phrase(p) for p in phrases}

    def text_tokens(self, text: str) -> list[str]:
        """Token sequence of running text with boundary punctuation stripped."""
        tokens = []
        for raw in text.split():
            word = raw.strip(_PUNCT)
            if not word:
                continue
            if self.lowercase:
                word = word.lower()
            if self.stemming:
                word = stem(word)
            tokens.append(word)
        return tokens


def _usable(
    predictions: Mapping[str, RankedKeywords], gold: Mapping[str, set[str]]
) -> tuple[list[str], list[str]]:
    usable, excluded = [], []
    for doc_id in predictions:
        if doc_id not in gold:
            continue
        if gold[doc_id]:
            usable.append(doc_id)
        else:
            excluded.append(doc_id)
    if excluded:
        log.warning("excluding %d documents with empty gold sets", len(excluded))
    if not usable:
        raise ValueError("no documents with nonempty gold keyword sets")
    return usable, excluded


def hit_rate_recall_at_k(
    predictions: Mapping[str, RankedKeywords],
    gold: Mapping[str, set[str]],
    k: int,
    normalizer: MatchNormalizer = MatchNormalizer(),
) -> float:
    """Fraction of documents whose top-k contains at least one gold keyword."""
    if k < 1:
        raise ValueError("k must be >= 1")
    usable, _ = _usable(predictions, gold)
    hits = 0
    for doc_id in usable:
        top = normalizer.phrase_set(predictions[doc_id].top(k))
        truth = normalizer.phrase_set(gold[doc_id])
        if top & truth:
            hits += 1
    return hits / len(usable)


def set_precision_recall_at_k(
    predictions: Mapping[str, RankedKeywords],
    gold: Mapping[str, set[str]],
    k: int,
    normalizer: MatchNormalizer = MatchNormalizer(),
) -> tuple[float, float]:
    """Per-document |top-k ∩ gold| / k and / |gold|, averaged over documents."""
    if k < 1:
        raise ValueError("k must be >= 1")
    usable, _ = _usable(predictions, gold)
    precision_sum = 0.0
    recall_sum = 0.0
    for doc_id in usable:
        top = normalizer.phrase_set(predictions[doc_id].top(k))
        truth = normalizer.phrase_set(gold[doc_id])
        matched = len(top & truth)
        precision_sum += matched / k
        recall_sum += matched / len(truth)
    return precision_sum / len(usable), recall_sum / len(usable)


def jaccard(
    a: Iterable[str],
    b: Iterable[str],
    normalizer: MatchNormalizer = MatchNormalizer(),
) -> float:
    """Intersection-over-union of two keyword sets under normalization."""
    na = normalizer.phrase_set(a)
    nb = normalizer.phrase_set(b)
    union = na | nb
    if not union:
        raise ValueError("both keyword sets are empty")
    return len(na & nb) / len(union)


@dataclass(frozen=True)
class CoverageReport:
    total_keywords: int
    in_titles: int
    in_abstracts: int

    @property
    def title_pct(self) -> float:
        return 100.0 * self.in_titles / self.total_keywords

    @property
    def abstract_pct(self) -> float:
        return 100.0 * self.in_abstracts / self.total_keywords

    def to_dict(self) -> dict:
        return {
            "total_keywords": self.total_keywords,
            "in_titles": self.in_titles,
            "in_abstracts": self.in_abstracts,
            "title_pct": self.title_pct,
            "abstract_pct": self.abstract_pct,
        }


def _contains_phrase(tokens: list[str], phrase_tokens: list[str]) -> bool:
    if not phrase_tokens or len(phrase_tokens) > len(tokens):
        return False
    for start in range(len(tokens) - len(phrase_tokens) + 1):
        if tokens[start : start + len(phrase_tokens)] == phrase_tokens:
            return True
    return False


def keyword_coverage_analysis(
    corpus: Corpus, normalizer: MatchNormalizer = MatchNormalizer()
) -> CoverageReport:
    """Count gold keywords appearing as phrase substrings of titles/abstracts."""
    total = in_titles = in_abstracts = 0
    for doc in corpus:
        if not doc.gold_keywords:
            continue
        title_tokens = normalizer.text_tokens(doc.title)
        abstract_tokens = normalizer.text_tokens(doc.abstract)
        for keyword in sorted(doc.gold_keywords):
            total += 1
            kw_tokens = normalizer.text_tokens(keyword)
            if _contains_phrase(title_tokens, kw_tokens):
                in_titles += 1
            if _contains_phrase(abstract_tokens, kw_tokens):
                in_abstracts += 1
    if total == 0:
        raise ValueError("corpus has no gold keywords")
    return CoverageReport(
        total_keywords=total, in_titles=in_titles, in_abstracts=in_abstracts
    )


@dataclass
class TimingReport:
    """Wall-clock seconds per pipeline stage, ingestion excluded."""

    context_stages: dict[str, float] = field(default_factory=dict)
    fulltext_stages: dict[str, float] = field(default_factory=dict)

    @property
    def context_total(self) -> float:
        return sum(self.context_stages.values())

    @property
    def fulltext_total(self) -> float:
        return sum(self.fulltext_stages.values())

    @property
    def speedup(self) -> float:
        if self.context_total == 0.0:
            return float("inf")
        return self.fulltext_total / self.context_total

    def to_dict(self) -> dict:
        return {
            "context_stages": self.context_stages,
            "fulltext_stages": self.fulltext_stages,
            "context_total": self.context_total,
            "fulltext_total": self.fulltext_total,
            "fulltext_over_context_ratio": self.speedup,
        }


def _denoise_cloud(index: SearchIndex, cloud: KeywordCloud, linkage: str, seed: int):
    if len(cloud) < 2:
        return cloud
    matrix = distance_matrix(index, cloud)
    clustering = cluster_two(matrix, linkage)
    return prune(cloud, clustering, seed)


def timing_run(
    index: SearchIndex,
    corpus: Corpus,
    catalog: TopicCatalog,
    n: int = 20,
    cloud_k: int = 10,
    linkage: str = "average",
    seed: int = 0,
    stoplist: frozenset[str] = SMART_STOPLIST,
) -> TimingReport:
    """Time the expanded-context tagging pipeline against the full-text one.

    Stages: expand / generate / denoise for the context pipeline; generate /
    denoise on the full document text for the baseline. Bag preparation for
    the full-text baseline counts as preprocessing and is excluded.
    """
    from .context import UnexpandableTextError, expand

    report = TimingReport(
        context_stages={"expand": 0.0, "generate": 0.0, "denoise": 0.0},
        fulltext_stages={"generate": 0.0, "denoise": 0.0},
    )

    fulltext_bags: list[TokenBag] = []
    for doc in corpus:
        text = doc.full_text if doc.full_text else f"{doc.title} {doc.abstract}"
        fulltext_bags.append(preprocess(text, stoplist))

    for doc in corpus:
        start = time.perf_counter()
        try:
            ctx = expand(index, doc.title, n)
            bag = ctx.bag
        except UnexpandableTextError:
            bag = TokenBag()
        report.context_stages["expand"] += time.perf_counter() - start

        start = time.perf_counter()
        cloud = catalog_extract(bag, catalog, cloud_k, stoplist) if bag else KeywordCloud(entries={})
        report.context_stages["generate"] += time.perf_counter() - start

        start = time.perf_counter()
        _denoise_cloud(index, cloud, linkage, seed)
        report.context_stages["denoise"] += time.perf_counter() - start

    for bag in fulltext_bags:
        start = time.perf_counter()
        cloud = catalog_extract(bag, catalog, cloud_k, stoplist) if bag else KeywordCloud(entries={})
        report.fulltext_stages["generate"] += time.perf_counter() - start

        start = time.perf_counter()
        _denoise_cloud(index, cloud, linkage, seed)
        report.fulltext_stages["denoise"] += time.perf_counter() - start

    return report
