import json
import random

import pytest

from webtag.corpus import (
    CorpusError,
    TopicCatalogRaw,
    ingest_corpus,
    load_topic_catalog,
    normalize_catalog,
)
from webtag.porter import stem
from webtag.stopwords import SMART_STOPLIST
from webtag.text import join_counts, preprocess

# Porter outputs frozen from hand application of the 1980 rules (the rule
# set's own worked examples plus the words this suite leans on). Values are
# fixpoints: where a single pass leaves a reducible output (agreed -> agre),
# the expected value is the stable form (agr).
PORTER_PAIRS = [
    ("caresses", "caress"), ("ponies", "poni"), ("ties", "ti"),
    ("caress", "caress"), ("cats", "cat"), ("feed", "feed"),
    ("agreed", "agr"), ("plastered", "plaster"), ("bled", "bled"),
    ("motoring", "motor"), ("sing", "sing"), ("conflated", "conflat"),
    ("troubled", "troubl"), ("sized", "size"), ("hopping", "hop"),
    ("tanned", "tan"), ("falling", "fall"), ("hissing", "hiss"),
    ("fizzed", "fizz"), ("failing", "fail"), ("filing", "file"),
    ("happy", "happi"), ("sky", "sky"), ("relational", "relat"),
    ("conditional", "condit"), ("rational", "ration"),
    ("valenci", "valenc"), ("hesitanci", "hesit"),
    ("digitizer", "digit"), ("conformabli", "conform"),
    ("radicalli", "radic"), ("differentli", "differ"),
    ("vileli", "vile"), ("analogousli", "analog"),
    ("vietnamization", "vietnam"), ("predication", "predic"),
    ("operator", "oper"), ("feudalism", "feudal"),
    ("decisiveness", "deci"), ("hopefulness", "hope"),
    ("callousness", "callou"), ("formaliti", "formal"),
    ("sensitiviti", "sensit"), ("sensibiliti", "sensibl"),
    ("triplicate", "triplic"), ("formative", "form"),
    ("formalize", "formal"), ("electriciti", "electr"),
    ("electrical", "electr"), ("hopeful", "hope"),
    ("goodness", "good"), ("revival", "reviv"),
    ("allowance", "allow"), ("inference", "infer"),
    ("airliner", "airlin"), ("gyroscopic", "gyroscop"),
    ("adjustable", "adjust"), ("defensible", "defen"),
    ("irritant", "irrit"), ("replacement", "replac"),
    ("adjustment", "adjust"), ("dependent", "depend"),
    ("adoption", "adopt"), ("communism", "commun"),
    ("activate", "activ"), ("angulariti", "angular"),
    ("homologous", "homolog"), ("effective", "effect"),
    ("bowdlerize", "bowdler"), ("probate", "probat"),
    ("rate", "rate"), ("cease", "cea"), ("controll", "control"),
    ("roll", "roll"), ("clustering", "cluster"), ("web", "web"),
    ("categories", "categori"), ("mining", "mine"),
    ("expansion", "expan"), ("sparse", "spar"), ("pairwise", "pairwi"),
]

WORDS = [
    "mining", "graph", "web", "the", "of", "clustering", "data", "a",
    "networks", "x", "ab", "web's", "2004", "semi-supervised", "Pages",
]


def write_jsonl(path, records):
    path.write_text(
        "".join(json.dumps(r) + "\n" for r in records), encoding="utf-8"
    )


class TestIngest:
    def test_three_records_in_order(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(
            path,
            [
                {"id": "b", "title": "second doc"},
                {"id": "a", "title": "first doc"},
                {"id": "c", "title": "third doc"},
            ],
        )
        corpus = ingest_corpus(path)
        assert [d.id for d in corpus] == ["b", "a", "c"]

    def test_missing_title_names_line(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [{"id": "a", "title": "ok"}, {"id": "b"}])
        with pytest.raises(CorpusError, match=":2:"):
            ingest_corpus(path)

    def test_duplicate_id_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [{"id": "a", "title": "x"}, {"id": "a", "title": "y"}])
        with pytest.raises(CorpusError, match="duplicate"):
            ingest_corpus(path)

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(CorpusError):
            ingest_corpus(tmp_path / "missing.jsonl")

    def test_kdd_scale_fixture(self, tmp_path):
        path = tmp_path / "kdd08.jsonl"
        write_jsonl(
            path,
            [
                {"id": f"p{i}", "title": f"paper number {i} on mining", "keywords": ["mining"]}
                for i in range(118)
            ],
        )
        assert len(ingest_corpus(path)) == 118

    def test_keywords_become_gold_set(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [{"id": "a", "title": "t", "keywords": ["x y", "x y", "z"]}])
        corpus = ingest_corpus(path)
        assert corpus.by_id("a").gold_keywords == frozenset({"x y", "z"})


class TestPreprocess:
    def test_three_filters(self):
        assert dict(preprocess("The Web's decay 2004")) == {"decay": 1}

    def test_empty_text(self):
        assert preprocess("") == {}

    def test_case_folded_multiplicity(self):
        assert dict(preprocess("mining mining Mining")) == {"mining": 3}

    def test_output_invariants_random_text(self):
        rng = random.Random(7)
        for _ in range(200):
            text = " ".join(rng.choices(WORDS, k=rng.randint(0, 30)))
            bag = preprocess(text)
            for token in bag:
                assert len(token) >= 3
                assert token.isalpha()
                assert token not in SMART_STOPLIST
                assert bag[token] >= 1

    def test_concatenation_additivity(self):
        rng = random.Random(13)
        for _ in range(100):
            a = " ".join(rng.choices(WORDS, k=rng.randint(0, 15)))
            b = " ".join(rng.choices(WORDS, k=rng.randint(0, 15)))
            combined = preprocess(a + " " + b)
            assert combined == join_counts([preprocess(a), preprocess(b)])


class TestStem:
    @pytest.mark.parametrize("word,expected", PORTER_PAIRS)
    def test_frozen_pairs(self, word, expected):
        assert stem(word) == expected

    def test_idempotent_on_pairs(self):
        for word, _ in PORTER_PAIRS:
            assert stem(stem(word)) == stem(word)

    def test_idempotent_on_random_strings(self):
        rng = random.Random(101)
        letters = "abcdefghijklmnopqrstuvwxyz"
        for _ in range(3000):
            word = "".join(rng.choices(letters, k=rng.randint(1, 14)))
            assert stem(stem(word)) == stem(word)

    def test_idempotent_over_fixture_vocabulary(self, demo_corpus_path):
        corpus = ingest_corpus(demo_corpus_path)
        vocab = set()
        for doc in corpus:
            vocab |= set(preprocess(doc.title + " " + doc.abstract))
        assert vocab
        for token in vocab:
            assert stem(stem(token)) == stem(token)


class TestCatalog:
    def test_verbatim_load(self, tmp_path):
        path = tmp_path / "topics.txt"
        path.write_text("web mining\nmining of web data\n", encoding="utf-8")
        raw = load_topic_catalog(path)
        assert [p for p, _ in raw.entries] == ["web mining", "mining of web data"]

    def test_empty_file(self, tmp_path):
        path = tmp_path / "topics.txt"
        path.write_text("", encoding="utf-8")
        assert len(load_topic_catalog(path)) == 0

    def test_catalog_scale_777(self, tmp_path):
        path = tmp_path / "topics.txt"
        path.write_text(
            "".join(f"topic number {i}\n" for i in range(777)), encoding="utf-8"
        )
        assert len(load_topic_catalog(path)) == 777

    def test_source_labels(self, tmp_path):
        path = tmp_path / "topics.txt"
        path.write_text("web mining\tWIC 2013\n", encoding="utf-8")
        assert load_topic_catalog(path).entries == (("web mining", "WIC 2013"),)

    def test_case_duplicate_merged(self):
        raw = TopicCatalogRaw(entries=(("Web Mining", ""), ("web mining", "")))
        assert normalize_catalog(raw).topics == ("web mining",)

    def test_stem_duplicate_merged_first_seen_kept(self):
        raw = TopicCatalogRaw(entries=(("web mining", ""), ("web minings", "")))
        assert normalize_catalog(raw).topics == ("web mining",)

    def test_distinct_topics_sorted(self):
        raw = TopicCatalogRaw(entries=(("web mining", ""), ("text mining", "")))
        assert normalize_catalog(raw).topics == ("text mining", "web mining")

    def test_idempotent_and_no_growth(self):
        phrases = ["Web Mining", "graph  kernels", "web minings", "Graph Kernels", "topic models"]
        raw = TopicCatalogRaw(entries=tuple((p, "") for p in phrases))
        once = normalize_catalog(raw)
        twice = normalize_catalog(TopicCatalogRaw(entries=tuple((t, "") for t in once.topics)))
        assert once.topics == twice.topics
        assert len(once) <= len(raw)

    def test_whitespace_collapsed(self):
        raw = TopicCatalogRaw(entries=(("graph   kernels", ""),))
        assert normalize_catalog(raw).topics == ("graph kernels",)
