"""Keyword extraction: graph-ranking (TextRank-style), degree/frequency
phrase scoring (RAKE-style), and catalog matching against a token bag's
frequency distribution, plus the context-augmentation wrapper.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from typing import Mapping

from .context import expand
from .corpus import Document, TopicCatalog
from .search import SearchIndex
from .stopwords import SMART_STOPLIST
from .text import TokenBag, candidate_token, phrase_stems, preprocess, stem_counts

log = logging.getLogger(__name__)

VARIANTS = ("abstract", "context", "both")
_VARIANT_LABELS = {
    "abstract": "abstract-only",
    "context": "context-only",
    "both": "abstract+context",
}

DEFAULT_WINDOW = 2
DEFAULT_DAMPING = 0.85
DEFAULT_EPSILON = 1e-6
DEFAULT_MAX_ITERS = 100
DEFAULT_PHRASE_DELIMS = frozenset(".,;:!?()")


@dataclass(frozen=True)
class RankedKeywords:
    items: tuple[tuple[str, float], ...]
    source: str
    flag: str | None = None

    def phrases(self) -> list[str]:
        return [phrase for phrase, _ in self.items]

    def top(self, k: int) -> list[str]:
        return [phrase for phrase, _ in self.items[:k]]


@dataclass(frozen=True)
class KeywordCloud:
    entries: Mapping[str, float]

    def __post_init__(self):
        for phrase, weight in self.entries.items():
            if weight <= 0:
                raise ValueError(f"cloud weight for {phrase!r} must be positive")
            if phrase != " ".join(phrase.lower().split()):
                raise ValueError(f"cloud phrase {phrase!r} is not normalized")

    def __len__(self) -> int:
        return len(self.entries)

    def labels(self) -> tuple[str, ...]:
        return tuple(self.entries)


class CooccurrenceGraph:
    """Undirected weighted word co-occurrence graph (no self-loops)."""

    def __init__(self):
        self.adj: dict[str, dict[str, float]] = {}

    def add_node(self, node: str) -> None:
        self.adj.setdefault(node, {})

    def add_edge(self, u: str, v: str, weight: float = 1.0) -> None:
        if u == v:
            return
        self.add_node(u)
        self.add_node(v)
        self.adj[u][v] = self.adj[u].get(v, 0.0) + weight
        self.adj[v][u] = self.adj[v].get(u, 0.0) + weight

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(self.adj)

    def weight_sum(self, node: str) -> float:
        return sum(self.adj[node].values())


def _candidate_sequence(text: str, stoplist: frozenset[str]) -> list[str | None]:
    """Whitespace tokens mapped to surviving candidates (None when dropped)."""
    return [candidate_token(tok, stoplist) for tok in text.split()]


def build_cooccurrence_graph(
    text: str, window: int = DEFAULT_WINDOW, stoplist: frozenset[str] = SMART_STOPLIST
) -> CooccurrenceGraph:
    """Connect candidate words within `window` positions of the original
    token sequence; dropped tokens still occupy positions."""
    if window < 2:
        raise ValueError("window must be >= 2")
    sequence = _candidate_sequence(text, stoplist)
    graph = CooccurrenceGraph()
    for i, u in enumerate(sequence):
        if u is None:
            continue
        graph.add_node(u)
        for j in range(i + 1, min(i + window, len(sequence))):
            v = sequence[j]
            if v is not None:
                graph.add_edge(u, v, 1.0)
    return graph


def rank_graph(
    graph: CooccurrenceGraph,
    damping: float = DEFAULT_DAMPING,
    max_iters: int = DEFAULT_MAX_ITERS,
    epsilon: float = DEFAULT_EPSILON,
) -> dict[str, float]:
    """Damped iterative node ranking until the max score change < epsilon."""
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must be in (0, 1)")
    nodes = graph.nodes
    scores = {v: 1.0 for v in nodes}
    out_weight = {v: graph.weight_sum(v) for v in nodes}
    for _ in range(max_iters):
        new_scores = {}
        delta = 0.0
        for v in nodes:
            incoming = 0.0
            for u, w in graph.adj[v].items():
                incoming += w / out_weight[u] * scores[u]
            new_scores[v] = (1.0 - damping) + damping * incoming
            delta = max(delta, abs(new_scores[v] - scores[v]))
        scores = new_scores
        if delta < epsilon:
            break
    return scores


def _merge_adjacent(
    sequence: list[str | None], selected: set[str], scores: dict[str, float]
) -> list[tuple[str, float]]:
    """Collapse maximal runs of selected words into multi-word keywords."""
    phrases: dict[str, float] = {}
    run: list[str] = []

    def flush():
        if run:
            phrase = " ".join(run)
            if phrase not in phrases:
                phrases[phrase] = sum(scores[w] for w in run)
            run.clear()

    for token in sequence:
        if token is not None and token in selected:
            if run and run[-1] == token:
                # an identical adjacent occurrence restarts the run instead
                # of producing a degenerate self-repeating phrase
                flush()
            run.append(token)
        else:
            flush()
    flush()
    return sorted(phrases.items(), key=lambda item: (-item[1], item[0]))


def textrank_extract(
    text: str,
    window: int = DEFAULT_WINDOW,
    damping: float = DEFAULT_DAMPING,
    max_iters: int = DEFAULT_MAX_ITERS,
    epsilon: float = DEFAULT_EPSILON,
    k: int = 10,
    stoplist: frozenset[str] = SMART_STOPLIST,
) -> RankedKeywords:
    """Graph-rank candidate words, keep the top third, merge adjacent
    selections into phrases, and return the top-k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    sequence = _candidate_sequence(text, stoplist)
    n_candidates = sum(1 for tok in sequence if tok is not None)
    flag = None
    if n_candidates < 2:
        flag = "fewer than two candidate tokens"

    graph = build_cooccurrence_graph(text, window, stoplist)
    if not graph.nodes:
        return RankedKeywords(items=(), source="textrank", flag=flag)

    scores = rank_graph(graph, damping, max_iters, epsilon)
    keep = max(1, math.ceil(len(graph.nodes) / 3))
    top_words = sorted(scores.items(), key=lambda item: (-item[1], item[0]))[:keep]
    selected = {word for word, _ in top_words}
    merged = _merge_adjacent(sequence, selected, scores)
    return RankedKeywords(items=tuple(merged[:k]), source="textrank", flag=flag)


def rake_extract(
    text: str,
    stoplist: frozenset[str] = SMART_STOPLIST,
    phrase_delims: frozenset[str] = DEFAULT_PHRASE_DELIMS,
    k: int = 10,
) -> RankedKeywords:
    """Split at stopwords/delimiters into candidate phrases and score each as
    the sum of member deg(w)/freq(w)."""
    if not stoplist:
        raise ValueError("stoplist must be nonempty")
    if k < 1:
        raise ValueError("k must be >= 1")
    delim_re = re.compile("[" + re.escape("".join(sorted(phrase_delims))) + "]")

    candidates: list[tuple[str, ...]] = []
    current: list[str] = []

    def flush():
        if current:
            candidates.append(tuple(current))
            current.clear()

    for token in text.split():
        pieces = delim_re.split(token)
        for i, piece in enumerate(pieces):
            if i > 0:
                flush()
            word = piece.lower()
            if not word:
                continue
            if word in stoplist:
                flush()
            else:
                current.append(word)
    flush()

    if not candidates:
        return RankedKeywords(items=(), source="rake", flag="no candidate phrases")

    freq: dict[str, int] = {}
    deg: dict[str, int] = {}
    for cand in candidates:
        for word in cand:
            freq[word] = freq.get(word, 0) + 1
            deg[word] = deg.get(word, 0) + len(cand)

    scored: dict[str, float] = {}
    for cand in candidates:
        phrase = " ".join(cand)
        if phrase not in scored:
            scored[phrase] = sum(deg[w] / freq[w] for w in cand)
    ranked = sorted(scored.items(), key=lambda item: (-item[1], item[0]))
    return RankedKeywords(items=tuple(ranked[:k]), source="rake")


def catalog_extract(
    bag: TokenBag,
    catalog: TopicCatalog,
    k: int = 10,
    stoplist: frozenset[str] = SMART_STOPLIST,
) -> KeywordCloud:
    """Score catalog phrases by mean stemmed-token count in the bag.

    Conjunctive matching: a phrase with any zero-count token is excluded.
    """
    if len(catalog) == 0:
        raise ValueError("catalog must be nonempty")
    if k < 1:
        raise ValueError("k must be >= 1")
    if not bag:
        log.warning("catalog_extract: empty token bag yields an empty cloud")
        return KeywordCloud(entries={})

    counts = stem_counts(bag)
    scored: list[tuple[str, float]] = []
    for phrase in catalog:
        stems = phrase_stems(phrase, stoplist)
        if not stems:
            continue
        token_counts = [counts.get(s, 0) for s in stems]
        if any(c == 0 for c in token_counts):
            continue
        scored.append((phrase, sum(token_counts) / len(stems)))
    scored.sort(key=lambda item: (-item[1], item[0]))
    return KeywordCloud(entries=dict(scored[:k]))


def cloud_to_ranked(cloud: KeywordCloud, source: str) -> RankedKeywords:
    items = sorted(cloud.entries.items(), key=lambda item: (-item[1], item[0]))
    return RankedKeywords(items=tuple(items), source=source)


def assemble_variant_text(
    doc: Document, index: SearchIndex, variant: str, n: int
) -> str:
    """Input text per content variant: abstract, context titles, or both."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    parts = []
    if variant in ("abstract", "both"):
        if doc.abstract:
            parts.append(doc.abstract)
    if variant in ("context", "both"):
        ctx = expand(index, doc.title, n)
        if ctx.titles_used:
            parts.append(ctx.text())
    return " ".join(parts)


def augmented_extract(
    doc: Document,
    index: SearchIndex,
    method: str,
    variant: str,
    n: int,
    k: int,
    catalog: TopicCatalog | None = None,
    stoplist: frozenset[str] = SMART_STOPLIST,
    window: int = DEFAULT_WINDOW,
    damping: float = DEFAULT_DAMPING,
) -> RankedKeywords:
    """Run the chosen extractor on the variant-assembled document text."""
    text = assemble_variant_text(doc, index, variant, n)
    label = _VARIANT_LABELS[variant]
    if method == "textrank":
        result = textrank_extract(
            text, window=window, damping=damping, k=k, stoplist=stoplist
        )
    elif method == "rake":
        result = rake_extract(text, stoplist=stoplist, k=k)
    elif method == "catalog":
        if catalog is None:
            raise ValueError("catalog extractor needs a topic catalog")
        cloud = catalog_extract(preprocess(text, stoplist), catalog, k, stoplist)
        result = cloud_to_ranked(cloud, source="catalog")
    else:
        raise ValueError(f"unknown extractor {method!r}")
    return RankedKeywords(
        items=result.items, source=f"{result.source.split(':')[0]}:{label}", flag=result.flag
    )
