"""Corpus and topic-catalog ingestion.

Corpora are JSON Lines files, one document per line, with fields `id`,
`title`, `abstract`, `full_text` and `keywords`. Topic catalogs are plain
text, one phrase per line with an optional tab-separated source label.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .text import stem_key


class CorpusError(ValueError):
    """Raised for unreadable or malformed corpus/catalog files."""


@dataclass(frozen=True)
class Document:
    id: str
    title: str
    abstract: str = ""
    full_text: str | None = None
    gold_keywords: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.id:
            raise CorpusError("document id must be nonempty")
        if not self.title.strip():
            raise CorpusError(f"document {self.id!r}: title must be nonempty")


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    name: str = ""

    def __post_init__(self):
        seen = set()
        for doc in self.documents:
            if doc.id in seen:
                raise CorpusError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def by_id(self, doc_id: str) -> Document:
        for doc in self.documents:
            if doc.id == doc_id:
                return doc
        raise KeyError(doc_id)


def ingest_corpus(path: str | Path) -> Corpus:
    """Load a JSON Lines corpus, preserving file order."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise CorpusError(f"cannot read corpus file {path}: {exc}") from exc

    documents = []
    ids = set()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"{path}:{lineno}: invalid JSON record: {exc}") from exc
        if not isinstance(record, dict):
            raise CorpusError(f"{path}:{lineno}: record must be a JSON object")
        if "id" not in record or not str(record.get("id", "")):
            raise CorpusError(f"{path}:{lineno}: record missing 'id'")
        if not str(record.get("title", "")).strip():
            raise CorpusError(f"{path}:{lineno}: record missing 'title'")
        doc_id = str(record["id"])
        if doc_id in ids:
            raise CorpusError(f"{path}:{lineno}: duplicate document id {doc_id!r}")
        ids.add(doc_id)
        keywords = record.get("keywords") or []
        documents.append(
            Document(
                id=doc_id,
                title=str(record["title"]),
                abstract=str(record.get("abstract") or ""),
                full_text=record.get("full_text"),
                gold_keywords=frozenset(str(k) for k in keywords),
            )
        )
    return Corpus(documents=tuple(documents), name=path.stem)


@dataclass(frozen=True)
class TopicCatalogRaw:
    """Verbatim catalog entries: (phrase, source label) pairs, duplicates kept."""

    entries: tuple[tuple[str, str], ...]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class TopicCatalog:
    """Deduplicated, normalized topic phrases, lexicographically sorted."""

    topics: tuple[str, ...]

    def __post_init__(self):
        keys = set()
        for topic in self.topics:
            if not topic:
                raise CorpusError("catalog topics must be nonempty")
            key = stem_key(topic)
            if key in keys:
                raise CorpusError(f"catalog topic {topic!r} duplicates another under stemming")
            keys.add(key)

    def __len__(self) -> int:
        return len(self.topics)

    def __iter__(self):
        return iter(self.topics)


def load_topic_catalog(path: str | Path) -> TopicCatalogRaw:
    """Load raw topic phrases verbatim, one per line."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise CorpusError(f"cannot read catalog file {path}: {exc}") from exc
    entries = []
    for line in lines:
        if not line.strip():
            continue
        phrase, _, label = line.partition("\t")
        entries.append((phrase.strip(), label.strip()))
    return TopicCatalogRaw(entries=tuple(entries))


def normalize_catalog(raw: TopicCatalogRaw) -> TopicCatalog:
    """Lowercase and collapse whitespace, then merge stem-equal duplicates.

    The first-seen surface form of each stem signature is kept; output is
    sorted lexicographically.
    """
    kept: dict[tuple[str, ...], str] = {}
    for phrase, _ in raw.entries:
        normalized = " ".join(phrase.lower().split())
        if not normalized:
            continue
        key = stem_key(normalized)
        if key not in kept:
            kept[key] = normalized
    return TopicCatalog(topics=tuple(sorted(kept.values())))
