"""webtag: keyword assignment for low-text documents.

Expands short texts (titles, abstracts) into a search-derived context, then
either ranks topics from a catalog against that context or extracts keywords
from the augmented text, with a hit-count-distance clustering de-noiser and
an evaluation harness.
"""

__version__ = "0.1.0"

from .context import WebContext, expand, expand_topic_catalog
from .corpus import (
    Corpus,
    Document,
    TopicCatalog,
    TopicCatalogRaw,
    ingest_corpus,
    load_topic_catalog,
    normalize_catalog,
)
from .denoise import (
    NGD_CAP,
    DistanceMatrix,
    TwoClustering,
    cluster_two,
    distance_matrix,
    ngd,
    prune,
)
from .evaluate import (
    MatchNormalizer,
    hit_rate_recall_at_k,
    jaccard,
    keyword_coverage_analysis,
    set_precision_recall_at_k,
    timing_run,
)
from .extractors import (
    CooccurrenceGraph,
    KeywordCloud,
    RankedKeywords,
    augmented_extract,
    catalog_extract,
    rake_extract,
    textrank_extract,
)
from .porter import stem
from .ranker import VectorSpaceModel, embed, fit_model, rank_topics
from .search import (
    SearchHit,
    SearchIndex,
    build_index,
    cohit_count,
    hit_count,
    load_index,
    save_index,
    search,
)
from .stopwords import SMART_STOPLIST, load_stoplist
from .text import TokenBag, preprocess

__all__ = [
    "Corpus",
    "CooccurrenceGraph",
    "Document",
    "DistanceMatrix",
    "KeywordCloud",
    "MatchNormalizer",
    "NGD_CAP",
    "RankedKeywords",
    "SMART_STOPLIST",
    "SearchHit",
    "SearchIndex",
    "TokenBag",
    "TopicCatalog",
    "TopicCatalogRaw",
    "TwoClustering",
    "VectorSpaceModel",
    "WebContext",
    "augmented_extract",
    "build_index",
    "catalog_extract",
    "cluster_two",
    "cohit_count",
    "distance_matrix",
    "embed",
    "expand",
    "expand_topic_catalog",
    "fit_model",
    "hit_count",
    "hit_rate_recall_at_k",
    "ingest_corpus",
    "jaccard",
    "keyword_coverage_analysis",
    "load_index",
    "load_stoplist",
    "load_topic_catalog",
    "ngd",
    "normalize_catalog",
    "preprocess",
    "prune",
    "rake_extract",
    "rank_topics",
    "save_index",
    "search",
    "set_precision_recall_at_k",
    "stem",
    "textrank_extract",
    "timing_run",
]
