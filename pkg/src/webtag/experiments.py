"""End-to-end experiment drivers producing plot-ready metric rows."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .context import UnexpandableTextError, expand, expand_topic_catalog
from .corpus import Corpus, TopicCatalog
from .denoise import cluster_two, distance_matrix, prune
from .evaluate import (
    MatchNormalizer,
    hit_rate_recall_at_k,
    jaccard,
    set_precision_recall_at_k,
)
from .extractors import RankedKeywords, augmented_extract, catalog_extract
from .ranker import ModelError, fit_model, rank_topics
from .search import SearchIndex
from .stopwords import SMART_STOPLIST

DENOISE_VARIANTS = ("unpruned", "single", "complete", "average")


@dataclass
class EvalReport:
    task: str
    config: dict
    rows: list[dict] = field(default_factory=list)
    per_doc: list[dict] = field(default_factory=list)
    excluded: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "config": self.config,
            "rows": self.rows,
            "per_doc": self.per_doc,
            "excluded_docs": self.excluded,
        }


def _gold_map(corpus: Corpus) -> dict[str, set[str]]:
    return {doc.id: set(doc.gold_keywords) for doc in corpus}


def _extract_predictions(
    index: SearchIndex,
    corpus: Corpus,
    method: str,
    variant: str,
    n: int,
    k_pool: int,
    catalog: TopicCatalog | None,
    stoplist: frozenset[str],
) -> dict[str, RankedKeywords]:
    predictions = {}
    for doc in corpus:
        try:
            predictions[doc.id] = augmented_extract(
                doc, index, method, variant, n=n, k=k_pool,
                catalog=catalog, stoplist=stoplist,
            )
        except UnexpandableTextError as exc:
            predictions[doc.id] = RankedKeywords(
                items=(), source=f"{method}:{variant}", flag=str(exc)
            )
    return predictions


def run_extraction_experiment(
    index: SearchIndex,
    corpus: Corpus,
    catalog: TopicCatalog | None,
    methods: Sequence[str],
    variants: Sequence[str],
    k_grid: Sequence[int],
    n: int = 20,
    normalizer: MatchNormalizer = MatchNormalizer(),
    stoplist: frozenset[str] = SMART_STOPLIST,
) -> EvalReport:
    """Set precision/recall@k for each extractor and content variant."""
    gold = _gold_map(corpus)
    report = EvalReport(
        task="extract",
        config={
            "methods": list(methods),
            "variants": list(variants),
            "k_grid": list(k_grid),
            "n": n,
            "stemming": normalizer.stemming,
        },
        excluded=[doc.id for doc in corpus if not doc.gold_keywords],
    )
    k_pool = max(k_grid)
    for method in methods:
        for variant in variants:
            predictions = _extract_predictions(
                index, corpus, method, variant, n, k_pool, catalog, stoplist
            )
            for doc_id, ranked in predictions.items():
                report.per_doc.append(
                    {
                        "doc": doc_id,
                        "method": method,
                        "variant": variant,
                        "predictions": ranked.top(k_pool),
                        "gold": sorted(gold[doc_id]),
                        "flag": ranked.flag,
                    }
                )
            for k in k_grid:
                precision, recall = set_precision_recall_at_k(
                    predictions, gold, k, normalizer
                )
                jaccards = [
                    jaccard(set(predictions[d].top(k)), gold[d], normalizer)
                    for d in predictions
                    if gold[d]
                ]
                mean_jaccard = sum(jaccards) / len(jaccards)
                for metric, value in (
                    ("precision", precision),
                    ("recall", recall),
                    ("jaccard", mean_jaccard),
                ):
                    report.rows.append(
                        {
                            "method": method,
                            "variant": variant,
                            "k": k,
                            "metric": metric,
                            "value": value,
                        }
                    )
    return report


def run_abstraction_experiment(
    index: SearchIndex,
    corpus: Corpus,
    catalog: TopicCatalog,
    kinds: Sequence[str],
    k_grid: Sequence[int],
    n: int = 20,
    normalizer: MatchNormalizer = MatchNormalizer(),
    lsi_rank: int = 2,
    lda_topics: int = 50,
    lda_iterations: int = 500,
    seed: int = 0,
) -> EvalReport:
    """Hit-rate recall@k for catalog-topic ranking under each model kind."""
    contexts = expand_topic_catalog(index, catalog, n)
    gold = _gold_map(corpus)
    report = EvalReport(
        task="abstract",
        config={
            "models": list(kinds),
            "k_grid": list(k_grid),
            "n": n,
            "lsi_rank": lsi_rank,
            "lda_topics": lda_topics,
            "lda_iterations": lda_iterations,
            "seed": seed,
            "stemming": normalizer.stemming,
        },
        excluded=[doc.id for doc in corpus if not doc.gold_keywords],
    )
    k_pool = max(k_grid)
    for kind in kinds:
        model = fit_model(
            contexts,
            kind,
            rank=lsi_rank,
            n_topics=lda_topics,
            iterations=lda_iterations,
            seed=seed,
        )
        predictions: dict[str, RankedKeywords] = {}
        for doc in corpus:
            try:
                ctx = expand(index, doc.title, n)
                ranking = rank_topics(model, ctx, doc_id=doc.id)
                items = ranking.items[:k_pool]
            except (UnexpandableTextError, ModelError) as exc:
                predictions[doc.id] = RankedKeywords(
                    items=(), source=f"{kind}:title-context", flag=str(exc)
                )
                continue
            predictions[doc.id] = RankedKeywords(
                items=items, source=f"{kind}:title-context"
            )
        for doc_id, ranked in predictions.items():
            report.per_doc.append(
                {
                    "doc": doc_id,
                    "model": kind,
                    "predictions": ranked.top(k_pool),
                    "gold": sorted(gold[doc_id]),
                    "flag": ranked.flag,
                }
            )
        for k in k_grid:
            rate = hit_rate_recall_at_k(predictions, gold, k, normalizer)
            report.rows.append(
                {
                    "method": kind,
                    "variant": "title-context",
                    "k": k,
                    "metric": "hit_rate_recall",
                    "value": rate,
                }
            )
    return report


def run_denoise_experiment(
    index: SearchIndex,
    corpus: Corpus,
    catalog: TopicCatalog,
    linkages: Sequence[str] = DENOISE_VARIANTS,
    cloud_k: int = 10,
    n: int = 20,
    seed: int = 0,
    normalizer: MatchNormalizer = MatchNormalizer(),
    stoplist: frozenset[str] = SMART_STOPLIST,
) -> EvalReport:
    """Mean Jaccard of (optionally de-noised) keyword clouds against gold,
    per clustering linkage, with the unpruned cloud as its own row."""
    gold = {doc.id: set(doc.gold_keywords) for doc in corpus if doc.gold_keywords}
    report = EvalReport(
        task="denoise",
        config={
            "linkages": list(linkages),
            "cloud_k": cloud_k,
            "n": n,
            "seed": seed,
            "stemming": normalizer.stemming,
        },
        excluded=[doc.id for doc in corpus if not doc.gold_keywords],
    )
    clouds = {}
    matrices = {}
    for doc_id in gold:
        doc = corpus.by_id(doc_id)
        try:
            ctx = expand(index, doc.title, n)
        except UnexpandableTextError:
            clouds[doc_id] = None
            continue
        cloud = catalog_extract(ctx.bag, catalog, cloud_k, stoplist)
        clouds[doc_id] = cloud
        if len(cloud) >= 2:
            matrices[doc_id] = distance_matrix(index, cloud)

    for linkage in linkages:
        jaccards = []
        for doc_id in gold:
            cloud = clouds[doc_id]
            if cloud is None:
                kept = set()
            elif linkage == "unpruned" or doc_id not in matrices:
                kept = set(cloud.entries)
            else:
                clustering = cluster_two(matrices[doc_id], linkage)
                kept = set(prune(cloud, clustering, seed).entries)
            jaccards.append(jaccard(kept, gold[doc_id], normalizer))
            report.per_doc.append(
                {
                    "doc": doc_id,
                    "linkage": linkage,
                    "kept": sorted(kept),
                    "gold": sorted(gold[doc_id]),
                }
            )
        report.rows.append(
            {
                "method": linkage,
                "variant": "title-context",
                "k": cloud_k,
                "metric": "jaccard",
                "value": sum(jaccards) / len(jaccards),
            }
        )
    return report


def run_n_sweep(
    index: SearchIndex,
    corpus: Corpus,
    catalog: TopicCatalog | None,
    method: str,
    n_grid: Sequence[int],
    k_grid: Sequence[int],
    variant: str = "both",
    normalizer: MatchNormalizer = MatchNormalizer(),
    stoplist: frozenset[str] = SMART_STOPLIST,
) -> EvalReport:
    """Recall@k as the context size n varies, for one extractor."""
    gold = _gold_map(corpus)
    report = EvalReport(
        task="n-sweep",
        config={
            "method": method,
            "variant": variant,
            "n_grid": list(n_grid),
            "k_grid": list(k_grid),
            "stemming": normalizer.stemming,
        },
        excluded=[doc.id for doc in corpus if not doc.gold_keywords],
    )
    k_pool = max(k_grid)
    for n in n_grid:
        predictions = _extract_predictions(
            index, corpus, method, variant, n, k_pool, catalog, stoplist
        )
        for k in k_grid:
            _, recall = set_precision_recall_at_k(predictions, gold, k, normalizer)
            report.rows.append(
                {
                    "method": method,
                    "variant": variant,
                    "n": n,
                    "k": k,
                    "metric": "recall",
                    "value": recall,
                }
            )
    return report
