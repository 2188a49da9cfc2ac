"""Local search engine emulation: TF-IDF cosine retrieval over document
titles/abstracts, plus document-frequency hit counts for the distance metric.

Index terms are stemmed; idf = ln(M/df) with raw term-frequency weights.
Phrase hit semantics is conjunctive containment: a document "hits" a phrase
when it contains every stemmed token of the phrase.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Corpus
from .porter import stem
from .stopwords import SMART_STOPLIST
from .text import phrase_stems, preprocess


class SearchError(ValueError):
    pass


class NoUsableTermsError(SearchError):
    """Query or phrase preprocesses to an empty token bag."""


DEFAULT_FIELDS = ("title", "abstract")


@dataclass(frozen=True)
class SearchHit:
    doc_id: str
    title: str
    score: float
    rank: int


@dataclass(frozen=True)
class SearchIndex:
    postings: dict[str, dict[str, int]]  # stemmed term -> doc id -> tf
    doc_norms: dict[str, float]
    total_docs: int
    titles: dict[str, str]
    fields: tuple[str, ...] = DEFAULT_FIELDS
    stoplist: frozenset[str] = field(default_factory=lambda: SMART_STOPLIST)

    def idf(self, term: str) -> float:
        df = len(self.postings.get(term, ()))
        if df == 0:
            return 0.0
        return math.log(self.total_docs / df)

    def posting_ids(self, term: str) -> set[str]:
        return set(self.postings.get(term, ()))


def _document_text(doc, fields: tuple[str, ...]) -> str:
    parts = []
    for name in fields:
        value = getattr(doc, name, None)
        if value:
            parts.append(value)
    return " ".join(parts)


def build_index(
    corpus: Corpus,
    fields: tuple[str, ...] = DEFAULT_FIELDS,
    stoplist: frozenset[str] = SMART_STOPLIST,
) -> SearchIndex:
    """Build a deterministic TF-IDF index over the selected text fields."""
    if len(corpus) == 0:
        raise SearchError("cannot index an empty corpus")

    postings: dict[str, dict[str, int]] = {}
    titles: dict[str, str] = {}
    for doc in corpus:
        titles[doc.id] = doc.title
        bag = preprocess(_document_text(doc, fields), stoplist)
        for token, count in bag.items():
            term = stem(token)
            postings.setdefault(term, {})
            postings[term][doc.id] = postings[term].get(doc.id, 0) + count

    total = len(corpus)
    norms = {doc.id: 0.0 for doc in corpus}
    for term, entry in postings.items():
        idf = math.log(total / len(entry))
        for doc_id, tf in entry.items():
            norms[doc_id] += (tf * idf) ** 2
    doc_norms = {doc_id: math.sqrt(value) for doc_id, value in norms.items()}

    return SearchIndex(
        postings=postings,
        doc_norms=doc_norms,
        total_docs=total,
        titles=titles,
        fields=tuple(fields),
        stoplist=stoplist,
    )


def _query_weights(index: SearchIndex, query: str) -> dict[str, float]:
    bag = preprocess(query, index.stoplist)
    if not bag:
        raise NoUsableTermsError(f"no usable query terms in {query!r}")
    counts: dict[str, int] = {}
    for token, count in bag.items():
        term = stem(token)
        counts[term] = counts.get(term, 0) + count
    return {
        term: tf * index.idf(term)
        for term, tf in counts.items()
        if term in index.postings
    }


def search(index: SearchIndex, query: str, n: int) -> list[SearchHit]:
    """Rank documents by TF-IDF cosine similarity against the query.

    Returns at most n hits; zero-score documents are never returned. Ties
    break by ascending document id. Raises NoUsableTermsError when the query
    preprocesses to an empty bag.
    """
    if n < 1:
        raise SearchError("n must be >= 1")
    weights = _query_weights(index, query)
    if not weights:
        return []
    qnorm = math.sqrt(sum(w * w for w in weights.values()))
    if qnorm == 0.0:
        return []

    scores: dict[str, float] = {}
    for term, qw in weights.items():
        idf = index.idf(term)
        for doc_id, tf in index.postings[term].items():
            scores[doc_id] = scores.get(doc_id, 0.0) + qw * tf * idf

    ranked = []
    for doc_id, dot in scores.items():
        dnorm = index.doc_norms[doc_id]
        if dnorm == 0.0 or dot == 0.0:
            continue
        ranked.append((doc_id, dot / (qnorm * dnorm)))
    ranked.sort(key=lambda item: (-item[1], item[0]))

    return [
        SearchHit(doc_id=doc_id, title=index.titles[doc_id], score=score, rank=i + 1)
        for i, (doc_id, score) in enumerate(ranked[:n])
    ]


def hit_count(index: SearchIndex, phrase: str) -> int:
    """Documents containing every stemmed token of the phrase."""
    stems = phrase_stems(phrase, index.stoplist)
    if not stems:
        raise NoUsableTermsError(f"no usable tokens in phrase {phrase!r}")
    ids = index.posting_ids(stems[0])
    for term in stems[1:]:
        ids &= index.posting_ids(term)
        if not ids:
            return 0
    return len(ids)


def cohit_count(index: SearchIndex, a: str, b: str) -> int:
    """Documents containing all tokens of phrase a and all tokens of b."""
    stems_a = phrase_stems(a, index.stoplist)
    stems_b = phrase_stems(b, index.stoplist)
    if not stems_a or not stems_b:
        raise NoUsableTermsError("both phrases need at least one usable token")
    ids: set[str] | None = None
    for term in stems_a + stems_b:
        term_ids = index.posting_ids(term)
        ids = term_ids if ids is None else ids & term_ids
        if not ids:
            return 0
    return len(ids) if ids is not None else 0


def save_index(index: SearchIndex, path: str | Path) -> None:
    """Persist the index as JSON lines: header, documents, then postings."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        header = {
            "kind": "webtag-index",
            "version": 1,
            "total_docs": index.total_docs,
            "fields": list(index.fields),
            "stoplist": sorted(index.stoplist),
        }
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for doc_id in sorted(index.titles):
            record = {
                "doc": doc_id,
                "title": index.titles[doc_id],
                "norm": index.doc_norms[doc_id],
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")
        for term in sorted(index.postings):
            entry = index.postings[term]
            record = {"term": term, "ids": [[i, entry[i]] for i in sorted(entry)]}
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def load_index(path: str | Path) -> SearchIndex:
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        if header.get("kind") != "webtag-index":
            raise SearchError(f"{path} is not a webtag index file")
        titles: dict[str, str] = {}
        doc_norms: dict[str, float] = {}
        postings: dict[str, dict[str, int]] = {}
        for line in fh:
            record = json.loads(line)
            if "doc" in record:
                titles[record["doc"]] = record["title"]
                doc_norms[record["doc"]] = record["norm"]
            else:
                postings[record["term"]] = {i: tf for i, tf in record["ids"]}
    return SearchIndex(
        postings=postings,
        doc_norms=doc_norms,
        total_docs=header["total_docs"],
        titles=titles,
        fields=tuple(header["fields"]),
        stoplist=frozenset(header["stoplist"]),
    )
