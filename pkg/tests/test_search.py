import math
import random

import numpy as np
import pytest

from webtag.corpus import Corpus, Document
from webtag.porter import stem
from webtag.search import (
    NoUsableTermsError,
    SearchError,
    build_index,
    cohit_count,
    hit_count,
    load_index,
    save_index,
    search,
)
from webtag.text import preprocess


def make_corpus(titles, abstracts=None):
    abstracts = abstracts or [""] * len(titles)
    docs = tuple(
        Document(id=f"d{i:02d}", title=t, abstract=a)
        for i, (t, a) in enumerate(zip(titles, abstracts))
    )
    return Corpus(documents=docs)


TITLES_10 = [
    "graph mining algorithms for social networks",
    "social network analysis with spectral methods",
    "text mining and keyword extraction pipelines",
    "spectral clustering of large graphs",
    "ranking web pages with link analysis",
    "keyword extraction from scientific abstracts",
    "mining frequent patterns in transaction data",
    "link prediction in evolving graphs",
    "topic models for short noisy text",
    "web search ranking with click signals",
]


def dense_cosine_ranking(corpus, fields, query):
    """Independent dense TF-IDF cosine over the whole corpus."""
    doc_bags = []
    for doc in corpus:
        text = " ".join(getattr(doc, f) or "" for f in fields)
        stems = {}
        for tok, cnt in preprocess(text).items():
            stems[stem(tok)] = stems.get(stem(tok), 0) + cnt
        doc_bags.append(stems)
    vocab = sorted({t for bag in doc_bags for t in bag})
    index_of = {t: i for i, t in enumerate(vocab)}
    m = len(doc_bags)
    counts = np.zeros((m, len(vocab)))
    for i, bag in enumerate(doc_bags):
        for t, c in bag.items():
            counts[i, index_of[t]] = c
    df = np.count_nonzero(counts > 0, axis=0)
    idf = np.log(m / df)
    tfidf = counts * idf

    qstems = {}
    for tok, cnt in preprocess(query).items():
        qstems[stem(tok)] = qstems.get(stem(tok), 0) + cnt
    qvec = np.zeros(len(vocab))
    for t, c in qstems.items():
        if t in index_of:
            qvec[index_of[t]] = c * idf[index_of[t]]
    qnorm = np.linalg.norm(qvec)
    results = []
    for i, doc in enumerate(corpus):
        dnorm = np.linalg.norm(tfidf[i])
        if qnorm == 0 or dnorm == 0:
            continue
        score = float(tfidf[i] @ qvec / (qnorm * dnorm))
        if score > 0:
            results.append((doc.id, score))
    results.sort(key=lambda r: (-r[1], r[0]))
    return results


class TestBuildIndex:
    def test_single_document(self):
        index = build_index(make_corpus(["graph mining"]))
        assert index.total_docs == 1

    def test_empty_corpus_rejected(self):
        with pytest.raises(SearchError):
            build_index(Corpus(documents=()))

    def test_empty_preprocessed_title_still_counted(self):
        index = build_index(make_corpus(["of the 2", "graph mining"]))
        assert index.total_docs == 2
        assert "d00" not in {d for e in index.postings.values() for d in e}

    def test_document_frequency_matches_scan(self):
        rng = random.Random(5)
        vocab = ["mining", "graph", "text", "ranking", "web", "cluster"]
        titles = [" ".join(rng.choices(vocab, k=4)) for _ in range(50)]
        corpus = make_corpus(titles)
        index = build_index(corpus, fields=("title",))
        df = len(index.postings.get(stem("mining"), {}))
        scan = sum(1 for t in titles if "mining" in preprocess(t))
        assert index.total_docs == 50
        assert df == scan

    def test_deterministic_build(self):
        corpus = make_corpus(TITLES_10)
        a = build_index(corpus)
        b = build_index(corpus)
        assert a.postings == b.postings
        assert a.doc_norms == b.doc_norms


class TestSearch:
    def test_self_retrieval(self):
        corpus = make_corpus(TITLES_10)
        index = build_index(corpus, fields=("title",))
        hits = search(index, "mining frequent patterns in transaction data", 3)
        assert hits[0].doc_id == "d06"
        assert hits[0].rank == 1

    def test_no_shared_terms_empty(self):
        index = build_index(make_corpus(TITLES_10), fields=("title",))
        assert search(index, "zygote blastula", 5) == []

    def test_unusable_query_raises(self):
        index = build_index(make_corpus(TITLES_10), fields=("title",))
        with pytest.raises(NoUsableTermsError):
            search(index, "the of 42", 5)

    def test_matches_dense_oracle(self):
        corpus = make_corpus(TITLES_10)
        index = build_index(corpus, fields=("title",))
        for query in ["graph mining", "spectral graphs", "keyword text mining", "web ranking"]:
            hits = search(index, query, 10)
            oracle = dense_cosine_ranking(corpus, ("title",), query)
            assert [h.doc_id for h in hits] == [d for d, _ in oracle]
            for hit, (_, score) in zip(hits, oracle):
                assert hit.score == pytest.approx(score, abs=1e-12)

    def test_ranks_consecutive_and_sorted(self):
        index = build_index(make_corpus(TITLES_10), fields=("title",))
        hits = search(index, "graph mining text", 10)
        assert [h.rank for h in hits] == list(range(1, len(hits) + 1))
        scores = [h.score for h in hits]
        assert scores == sorted(scores, reverse=True)

    def test_at_most_n(self):
        index = build_index(make_corpus(TITLES_10), fields=("title",))
        assert len(search(index, "mining graphs text web", 2)) == 2


class TestHitCounts:
    def test_absent_term_zero(self):
        index = build_index(make_corpus(TITLES_10), fields=("title",))
        assert hit_count(index, "zygote") == 0

    def test_term_in_every_document(self):
        corpus = make_corpus([f"mining topic{c}" for c in "abcdefg"])
        index = build_index(corpus, fields=("title",))
        assert hit_count(index, "mining") == 7

    def test_phrase_count_matches_scan(self):
        corpus = make_corpus(TITLES_10)
        index = build_index(corpus, fields=("title",))
        expected = 0
        for t in TITLES_10:
            stems = {stem(tok) for tok in preprocess(t)}
            if {"data", "mine"} <= stems:
                expected += 1
        assert hit_count(index, "data mining") == expected

    def test_unusable_phrase_raises(self):
        index = build_index(make_corpus(TITLES_10), fields=("title",))
        with pytest.raises(NoUsableTermsError):
            hit_count(index, "of the")

    def test_cohit_self_equals_hit(self):
        index = build_index(make_corpus(TITLES_10), fields=("title",))
        for phrase in ["graph", "mining", "link analysis"]:
            assert cohit_count(index, phrase, phrase) == hit_count(index, phrase)

    def test_cohit_disjoint_vocabulary(self):
        corpus = make_corpus(["apples bananas", "carrots daikon"])
        index = build_index(corpus, fields=("title",))
        assert cohit_count(index, "apples", "carrots") == 0

    def test_cohit_matches_scan(self):
        rng = random.Random(11)
        vocab = ["mining", "graph", "text", "ranking", "web"]
        titles = [" ".join(rng.choices(vocab, k=3)) for _ in range(20)]
        corpus = make_corpus(titles)
        index = build_index(corpus, fields=("title",))
        expected = 0
        for t in titles:
            stems = {stem(tok) for tok in preprocess(t)}
            if {"graph", "web"} <= stems:
                expected += 1
        assert cohit_count(index, "graph", "web") == expected

    def test_cohit_bounds_random_pairs(self, ngd_index):
        rng = random.Random(3)
        vocab = sorted(ngd_index.postings)
        for _ in range(200):
            a = rng.choice(vocab)
            b = rng.choice(vocab)
            joint = cohit_count(ngd_index, a, b)
            assert joint <= min(hit_count(ngd_index, a), hit_count(ngd_index, b))
            assert min(hit_count(ngd_index, a), hit_count(ngd_index, b)) <= ngd_index.total_docs


class TestPersistence:
    def test_round_trip_lossless(self, tmp_path):
        corpus = make_corpus(TITLES_10, abstracts=[f"notes {t}" for t in TITLES_10])
        index = build_index(corpus)
        path = tmp_path / "index.jsonl"
        save_index(index, path)
        loaded = load_index(path)
        assert loaded.postings == index.postings
        assert loaded.doc_norms == index.doc_norms
        assert loaded.titles == index.titles
        assert loaded.total_docs == index.total_docs
        assert loaded.stoplist == index.stoplist
        assert loaded.fields == index.fields

    def test_loaded_index_searches_identically(self, tmp_path):
        corpus = make_corpus(TITLES_10)
        index = build_index(corpus, fields=("title",))
        path = tmp_path / "index.jsonl"
        save_index(index, path)
        loaded = load_index(path)
        a = search(index, "graph mining", 5)
        b = search(loaded, "graph mining", 5)
        assert [(h.doc_id, h.rank) for h in a] == [(h.doc_id, h.rank) for h in b]
        for ha, hb in zip(a, b):
            assert math.isclose(ha.score, hb.score, rel_tol=0, abs_tol=1e-12)
