"""Shared fixture corpora: deterministic synthetic collections sized to the
scenarios the suite exercises (hit-count distances, augmentation lift,
timing)."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from webtag.corpus import Corpus, Document, TopicCatalog
from webtag.search import build_index

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def _letters(i: int) -> str:
    """Encode an integer as a lowercase-alphabetic token suffix."""
    return "".join(chr(ord("a") + int(d)) for d in str(i))


@pytest.fixture(scope="session")
def ngd_corpus():
    """1024 documents realizing f(alpha)=64, f(beta)=32, joint=16, plus a
    token present in every document and a vocabulary pool for random pairs."""
    rng = random.Random(1234)
    pool = [f"word{_letters(i)}" for i in range(40)]
    docs = []
    for i in range(1024):
        tokens = ["common", f"filler{_letters(i)}"]
        if i < 64:
            tokens.append("alpha")
        if i < 16 or 64 <= i < 80:
            tokens.append("beta")
        tokens.extend(rng.sample(pool, 3))
        docs.append(Document(id=f"n{i:04d}", title=" ".join(tokens)))
    return Corpus(documents=tuple(docs), name="ngd1024")


@pytest.fixture(scope="session")
def ngd_index(ngd_corpus):
    return build_index(ngd_corpus, fields=("title",))


LIFT_GOLDS = (
    "spectral clustering",
    "entity linking",
    "query expansion",
    "relevance feedback",
    "anomaly detection",
    "graph partitioning",
    "keyword extraction",
    "passage retrieval",
    "sensor fusion",
    "concept mining",
    "session replay",
    "schema matching",
)

LIFT_MARKERS = (
    "quasar", "nebula", "pulsar", "meteor", "comet", "aurora",
    "eclipse", "zenith", "topaz", "quartz", "garnet", "basalt",
)

_HELPER_TEMPLATES = (
    "{gold} methods for {marker} collections",
    "robust {gold} in {marker} collections",
    "{gold} benchmarks on {marker} collections",
    "evaluating {gold} across {marker} collections",
)

_LIFT_ABSTRACTS = (
    "we report careful measurements and practical lessons from production deployments",
    "detailed results and practical notes from several field deployments are reported",
    "we compare practical settings and summarize lessons from three deployments",
)


@pytest.fixture(scope="session")
def lift_corpus():
    """Targets whose gold keywords are absent from their abstracts but
    present, adjacent, in four related helper titles each."""
    docs = []
    for i, (gold, marker) in enumerate(zip(LIFT_GOLDS, LIFT_MARKERS)):
        docs.append(
            Document(
                id=f"t{i:02d}",
                title=f"a study of {marker} workloads",
                abstract=_LIFT_ABSTRACTS[i % len(_LIFT_ABSTRACTS)],
                gold_keywords=frozenset({gold}),
            )
        )
        for j, template in enumerate(_HELPER_TEMPLATES):
            docs.append(
                Document(
                    id=f"h{i:02d}{j}",
                    title=template.format(gold=gold, marker=marker),
                )
            )
    return Corpus(documents=tuple(docs), name="lift")


@pytest.fixture(scope="session")
def lift_index(lift_corpus):
    return build_index(lift_corpus, fields=("title", "abstract"))


@pytest.fixture(scope="session")
def lift_catalog():
    decoys = ("ontology alignment", "sarcasm recognition", "cache eviction")
    return TopicCatalog(topics=tuple(sorted(LIFT_GOLDS + decoys)))


_TIMING_TOPICS = (
    "graph mining", "spectral clustering", "keyword extraction",
    "entity linking", "query expansion", "relevance feedback",
    "anomaly detection", "topic drift", "citation graphs",
    "opinion summarization", "sensor fusion", "ontology alignment",
    "dialogue modeling", "knowledge distillation", "graph partitioning",
    "stream sketching", "vector quantization", "schema matching",
    "intent discovery", "event segmentation",
)


@pytest.fixture(scope="session")
def timing_corpus():
    """50 documents with short titles and long full texts."""
    rng = random.Random(99)
    filler = [f"term{_letters(i)}" for i in range(120)]
    docs = []
    for i in range(50):
        topic_a, topic_b = rng.sample(_TIMING_TOPICS, 2)
        title = f"report on {topic_a} and {topic_b} deployments"
        words = []
        for _ in range(250):
            words.extend(rng.sample(filler, 4))
            words.extend(rng.choice(_TIMING_TOPICS).split())
        full_text = " ".join(words)
        docs.append(
            Document(
                id=f"m{i:02d}",
                title=title,
                abstract=f"notes about {topic_a} in practice",
                full_text=full_text,
                gold_keywords=frozenset({topic_a}),
            )
        )
    return Corpus(documents=tuple(docs), name="timing50")


@pytest.fixture(scope="session")
def timing_catalog():
    return TopicCatalog(topics=tuple(sorted(_TIMING_TOPICS)))


@pytest.fixture(scope="session")
def timing_index(timing_corpus):
    return build_index(timing_corpus, fields=("title", "abstract"))


@pytest.fixture()
def demo_corpus_path():
    return DATA_DIR / "demo" / "corpus.jsonl"


@pytest.fixture()
def demo_catalog_path():
    return DATA_DIR / "demo" / "topics.txt"


@pytest.fixture()
def coverage_fixture_path():
    return DATA_DIR / "fixtures" / "coverage30.jsonl"


@pytest.fixture()
def coverage_manifest_path():
    return DATA_DIR / "fixtures" / "coverage30_manifest.json"
