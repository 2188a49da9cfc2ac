"""Command-line interface wiring the pipeline stages together.

Exit codes: 0 success, 1 stage failure, 2 invalid configuration or usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, RunConfig, merge_config
from .context import UnexpandableTextError, expand, expand_topic_catalog
from .corpus import CorpusError, ingest_corpus, load_topic_catalog, normalize_catalog
from .denoise import cluster_two, distance_matrix, prune, resolve_majority
from .evaluate import MatchNormalizer, keyword_coverage_analysis, timing_run
from .experiments import (
    run_abstraction_experiment,
    run_denoise_experiment,
    run_extraction_experiment,
    run_n_sweep,
)
from .extractors import augmented_extract, catalog_extract
from .ranker import ModelError, fit_model, rank_topics
from .report import (
    format_text_table,
    render_metric_figures,
    render_timing_figure,
    write_metrics_csv,
    write_report_json,
    write_text_table,
    write_timing_json,
)
from .search import SearchError, build_index, load_index, save_index
from .stopwords import SMART_STOPLIST, load_stoplist


def _stoplist(cfg: RunConfig) -> frozenset[str]:
    if cfg.stoplist is not None:
        return load_stoplist(cfg.stoplist)
    return SMART_STOPLIST


def _load_or_build_index(cfg: RunConfig):
    if cfg.index is not None and Path(cfg.index).exists():
        return load_index(cfg.index)
    cfg.require_paths("corpus")
    corpus = ingest_corpus(cfg.corpus)
    return build_index(corpus, cfg.fields, _stoplist(cfg))


def _load_catalog(cfg: RunConfig):
    cfg.require_paths("catalog")
    return normalize_catalog(load_topic_catalog(cfg.catalog))


def _out_stream(cfg: RunConfig, filename: str):
    cfg.out.mkdir(parents=True, exist_ok=True)
    return (cfg.out / filename).open("w", encoding="utf-8")


def _emit(fh, record: dict) -> None:
    fh.write(json.dumps(record, sort_keys=True) + "\n")


def cmd_index(cfg: RunConfig, args) -> int:
    cfg.require_paths("corpus")
    corpus = ingest_corpus(cfg.corpus)
    index = build_index(corpus, cfg.fields, _stoplist(cfg))
    out_path = cfg.index if cfg.index is not None else cfg.out / "index.jsonl"
    Path(out_path).parent.mkdir(parents=True, exist_ok=True)
    save_index(index, out_path)
    print(
        json.dumps(
            {
                "indexed_docs": index.total_docs,
                "terms": len(index.postings),
                "fields": list(index.fields),
                "path": str(out_path),
            },
            sort_keys=True,
        )
    )
    return 0


def cmd_expand(cfg: RunConfig, args) -> int:
    index = _load_or_build_index(cfg)
    ctx = expand(index, args.query, cfg.n)
    record = {
        "query": ctx.query,
        "n_requested": ctx.n_requested,
        "titles": list(ctx.titles_used),
        "tokens": dict(sorted(ctx.bag.items())),
        "flag": ctx.flag,
    }
    print(json.dumps(record, sort_keys=True))
    return 0


def cmd_extract(cfg: RunConfig, args) -> int:
    cfg.require_paths("corpus")
    corpus = ingest_corpus(cfg.corpus)
    index = _load_or_build_index(cfg)
    catalog = _load_catalog(cfg) if cfg.method == "catalog" else None
    stoplist = _stoplist(cfg)
    with _out_stream(cfg, "keywords.jsonl") as fh:
        for doc in corpus:
            try:
                ranked = augmented_extract(
                    doc, index, cfg.method, cfg.variant,
                    n=cfg.n, k=cfg.k, catalog=catalog, stoplist=stoplist,
                )
            except UnexpandableTextError as exc:
                _emit(fh, {"doc": doc.id, "error": str(exc)})
                continue
            for rank, (phrase, score) in enumerate(ranked.items, start=1):
                _emit(
                    fh,
                    {
                        "doc": doc.id,
                        "phrase": phrase,
                        "score": score,
                        "rank": rank,
                        "source": ranked.source,
                    },
                )
    print(f"wrote {cfg.out / 'keywords.jsonl'}")
    return 0


def cmd_abstract(cfg: RunConfig, args) -> int:
    cfg.require_paths("corpus")
    corpus = ingest_corpus(cfg.corpus)
    index = _load_or_build_index(cfg)
    catalog = _load_catalog(cfg)
    contexts = expand_topic_catalog(index, catalog, cfg.n)
    model = fit_model(
        contexts,
        cfg.model,
        rank=cfg.rank,
        n_topics=cfg.topics,
        iterations=cfg.iterations,
        seed=cfg.seed,
    )
    with _out_stream(cfg, "topics.jsonl") as fh:
        for doc in corpus:
            try:
                ctx = expand(index, doc.title, cfg.n)
                ranking = rank_topics(model, ctx, doc_id=doc.id)
            except (UnexpandableTextError, ModelError) as exc:
                _emit(fh, {"doc": doc.id, "error": str(exc)})
                continue
            for rank, (topic, score) in enumerate(ranking.items[: cfg.top], start=1):
                _emit(
                    fh,
                    {
                        "doc": doc.id,
                        "topic": topic,
                        "score": score,
                        "rank": rank,
                        "model": cfg.model,
                    },
                )
    print(f"wrote {cfg.out / 'topics.jsonl'}")
    return 0


def cmd_denoise(cfg: RunConfig, args) -> int:
    cfg.require_paths("corpus")
    corpus = ingest_corpus(cfg.corpus)
    index = _load_or_build_index(cfg)
    catalog = _load_catalog(cfg)
    stoplist = _stoplist(cfg)
    with _out_stream(cfg, "denoised.jsonl") as fh:
        for doc in corpus:
            try:
                ctx = expand(index, doc.title, cfg.n)
            except UnexpandableTextError as exc:
                _emit(fh, {"doc": doc.id, "error": str(exc)})
                continue
            cloud = catalog_extract(ctx.bag, catalog, cfg.cloud_k, stoplist)
            record: dict = {"doc": doc.id, "linkage": cfg.linkage}
            if len(cloud) < 2:
                record["kept"] = dict(cloud.entries)
                record["discarded"] = []
                record["flag"] = "cloud too small to cluster"
                _emit(fh, record)
                continue
            matrix = distance_matrix(index, cloud)
            clustering = cluster_two(matrix, cfg.linkage)
            if args.no_prune_assumption:
                resolved = resolve_majority(clustering, cfg.seed)
                record["kept"] = dict(cloud.entries)
                record["discarded"] = []
                record["would_discard"] = list(resolved.clusters[1])
                record["tie_broken"] = resolved.tie_broken
            else:
                resolved = resolve_majority(clustering, cfg.seed)
                kept = prune(cloud, clustering, cfg.seed)
                record["kept"] = dict(kept.entries)
                record["discarded"] = [
                    kw for kw in cloud.entries if kw not in kept.entries
                ]
                record["tie_broken"] = resolved.tie_broken
            if args.emit_matrix:
                record["matrix"] = {
                    "labels": list(matrix.labels),
                    "values": [[float(v) for v in row] for row in matrix.values],
                }
            _emit(fh, record)
    print(f"wrote {cfg.out / 'denoised.jsonl'}")
    return 0


def cmd_eval(cfg: RunConfig, args) -> int:
    cfg.require_paths("corpus")
    corpus = ingest_corpus(cfg.corpus)
    index = _load_or_build_index(cfg)
    stoplist = _stoplist(cfg)
    normalizer = MatchNormalizer(stemming=cfg.stem)
    needs_catalog = cfg.task in ("abstract", "denoise") or "catalog" in cfg.methods
    catalog = _load_catalog(cfg) if needs_catalog else None

    if cfg.task == "abstract":
        report = run_abstraction_experiment(
            index, corpus, catalog,
            kinds=(cfg.model,),
            k_grid=cfg.k_grid, n=cfg.n, normalizer=normalizer,
            lsi_rank=cfg.rank, lda_topics=cfg.topics,
            lda_iterations=cfg.iterations, seed=cfg.seed,
        )
    elif cfg.task == "n-sweep":
        if not cfg.n_grid:
            raise ConfigError("n-sweep task needs --n-grid")
        report = run_n_sweep(
            index, corpus, catalog, method=cfg.method,
            n_grid=cfg.n_grid, k_grid=cfg.k_grid,
            variant=cfg.variant, normalizer=normalizer, stoplist=stoplist,
        )
    elif cfg.task == "denoise":
        report = run_denoise_experiment(
            index, corpus, catalog,
            cloud_k=cfg.cloud_k, n=cfg.n, seed=cfg.seed,
            normalizer=normalizer, stoplist=stoplist,
        )
    else:
        report = run_extraction_experiment(
            index, corpus, catalog,
            methods=cfg.methods, variants=cfg.variants,
            k_grid=cfg.k_grid, n=cfg.n,
            normalizer=normalizer, stoplist=stoplist,
        )

    if cfg.metrics:
        report.rows = [row for row in report.rows if row["metric"] in cfg.metrics]

    cfg.out.mkdir(parents=True, exist_ok=True)
    write_report_json(report, cfg.out / "eval_report.json")
    write_metrics_csv(report, cfg.out / "metrics.csv")
    write_text_table(report, cfg.out / "table.txt")
    figures = render_metric_figures(report, cfg.out)

    if args.timing:
        cfg.require_paths("catalog")
        timing_catalog = catalog if catalog is not None else _load_catalog(cfg)
        timing = timing_run(
            index, corpus, timing_catalog,
            n=cfg.n, cloud_k=cfg.cloud_k, linkage=cfg.linkage,
            seed=cfg.seed, stoplist=stoplist,
        )
        write_timing_json(timing, cfg.out / "timing.json")
        figures.append(render_timing_figure(timing, cfg.out / "timing.png"))
        print(
            f"timing: context {timing.context_total:.2f}s, "
            f"full-text {timing.fulltext_total:.2f}s, "
            f"ratio {timing.speedup:.2f}x"
        )

    print(format_text_table(report), end="")
    print(f"wrote {cfg.out} ({len(figures)} figures)")
    return 0


def cmd_analyze(cfg: RunConfig, args) -> int:
    cfg.require_paths("corpus")
    corpus = ingest_corpus(cfg.corpus)
    normalizer = MatchNormalizer(stemming=cfg.stem)
    coverage = keyword_coverage_analysis(corpus, normalizer)
    print(json.dumps(coverage.to_dict(), sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="webtag",
        description="Keyword assignment for low-text documents via "
        "search-context expansion.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="config file (sectioned key=value)")
        p.add_argument("--corpus", help="JSON Lines corpus file")
        p.add_argument("--catalog", help="topic catalog file, one phrase per line")
        p.add_argument("--stoplist", help="stoplist file, one word per line")
        p.add_argument("--index", help="persisted index file")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int, help="seed for all randomness")
        p.add_argument("--n", type=int, help="context size (top-n titles)")

    p = sub.add_parser("index", help="build and persist a search index")
    common(p)
    p.add_argument("--fields", help="comma-separated document fields to index")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("expand", help="expand a short text into a web-style context")
    common(p)
    p.add_argument("--query", required=True, help="the short text to expand")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("extract", help="extract keywords from document text")
    common(p)
    p.add_argument("--method", choices=("textrank", "rake", "catalog"))
    p.add_argument("--variant", choices=("abstract", "context", "both"))
    p.add_argument("--k", type=int, help="keywords per document")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("abstract", help="rank catalog topics for each document")
    common(p)
    p.add_argument("--model", choices=("tfidf", "lsi", "lda"))
    p.add_argument("--rank", type=int, help="LSI rank")
    p.add_argument("--topics", type=int, help="LDA topic count")
    p.add_argument("--iterations", type=int, help="LDA Gibbs iterations")
    p.add_argument("--top", type=int, help="topics reported per document")
    p.set_defaults(func=cmd_abstract)

    p = sub.add_parser("denoise", help="generate, cluster and prune keyword clouds")
    common(p)
    p.add_argument("--linkage", choices=("single", "complete", "average"))
    p.add_argument("--cloud-k", dest="cloud_k", type=int, help="cloud size")
    p.add_argument(
        "--no-prune-assumption",
        action="store_true",
        help="report the outlier cluster without discarding it",
    )
    p.add_argument("--emit-matrix", action="store_true", help="include the distance matrix")
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("eval", help="run experiments and render reports")
    common(p)
    p.add_argument("--task", choices=("extract", "abstract", "n-sweep", "denoise"))
    p.add_argument("--metrics", help="comma-separated metric filter "
                   "(precision, recall, jaccard, hit_rate_recall)")
    p.add_argument("--methods", help="comma-separated extractors")
    p.add_argument("--variants", help="comma-separated content variants")
    p.add_argument("--method", choices=("textrank", "rake", "catalog"))
    p.add_argument("--variant", choices=("abstract", "context", "both"))
    p.add_argument("--model", choices=("tfidf", "lsi", "lda"))
    p.add_argument("--rank", type=int)
    p.add_argument("--topics", type=int)
    p.add_argument("--iterations", type=int)
    p.add_argument("--k", dest="k_grid", help="comma-separated k cutoffs")
    p.add_argument("--n-grid", dest="n_grid", help="comma-separated context sizes")
    p.add_argument("--stem", choices=("on", "off"))
    p.add_argument("--linkage", choices=("single", "complete", "average"))
    p.add_argument("--cloud-k", dest="cloud_k", type=int)
    p.add_argument("--timing", action="store_true", help="time both pipelines")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("analyze", help="gold-keyword coverage of titles/abstracts")
    common(p)
    p.add_argument("--stem", choices=("on", "off"))
    p.set_defaults(func=cmd_analyze)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = merge_config(args, args.config)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.func(cfg, args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (CorpusError, SearchError, ModelError, UnexpandableTextError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
