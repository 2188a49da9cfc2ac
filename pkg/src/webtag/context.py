"""Context expansion: build the bag-of-words context for a short text from
the titles of its top-n search hits.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .corpus import TopicCatalog
from .search import NoUsableTermsError, SearchIndex, search
from .text import TokenBag, preprocess


class UnexpandableTextError(ValueError):
    """The short text has no usable query terms."""


@dataclass(frozen=True)
class WebContext:
    query: str
    n_requested: int
    titles_used: tuple[str, ...]
    bag: TokenBag
    flag: str | None = None  # set when expansion degenerated

    @property
    def total_tokens(self) -> int:
        return sum(self.bag.values())

    def text(self) -> str:
        """The concatenated title text the bag was built from."""
        return " ".join(self.titles_used)


def _title_key(title: str) -> str:
    return " ".join(title.casefold().split())


def expand(index: SearchIndex, short_text: str, n: int) -> WebContext:
    """Expand a short text into the context of its top-n retrieved titles.

    Duplicate titles (case-folded, whitespace-collapsed) are dropped. Zero
    hits yield a valid but flagged empty context; a query with no usable
    terms raises UnexpandableTextError.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not short_text.strip():
        raise UnexpandableTextError("unexpandable short text: empty input")
    try:
        hits = search(index, short_text, n)
    except NoUsableTermsError as exc:
        raise UnexpandableTextError(
            f"unexpandable short text: {exc}"
        ) from exc

    titles = []
    seen = set()
    for hit in hits:
        key = _title_key(hit.title)
        if key in seen:
            continue
        seen.add(key)
        titles.append(hit.title)

    bag = preprocess(" ".join(titles), index.stoplist)
    flag = None if titles else "no hits"
    return WebContext(
        query=short_text,
        n_requested=n,
        titles_used=tuple(titles),
        bag=bag,
        flag=flag,
    )


def expand_topic_catalog(
    index: SearchIndex, catalog: TopicCatalog, n: int
) -> dict[str, WebContext]:
    """Expand every catalog topic; failed topics get flagged empty contexts."""
    if len(catalog) == 0:
        raise ValueError("catalog must be nonempty")
    contexts: dict[str, WebContext] = {}
    for topic in catalog:
        try:
            contexts[topic] = expand(index, topic, n)
        except UnexpandableTextError:
            contexts[topic] = WebContext(
                query=topic,
                n_requested=n,
                titles_used=(),
                bag=Counter(),
                flag="no usable query terms",
            )
    return contexts
