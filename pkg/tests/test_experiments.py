import pytest

from webtag.evaluate import MatchNormalizer, jaccard
from webtag.experiments import (
    run_abstraction_experiment,
    run_denoise_experiment,
    run_extraction_experiment,
    run_n_sweep,
)


class TestExtractionExperiment:
    def test_rows_cover_grid(self, lift_index, lift_corpus, lift_catalog):
        report = run_extraction_experiment(
            lift_index, lift_corpus, lift_catalog,
            methods=("catalog",), variants=("abstract", "both"),
            k_grid=(5, 10), n=10,
        )
        keys = {(r["method"], r["variant"], r["k"], r["metric"]) for r in report.rows}
        assert len(keys) == 2 * 2 * 3  # variants x k x metrics
        for row in report.rows:
            assert 0.0 <= row["value"] <= 1.0
        assert report.excluded  # helper docs have no gold keywords

    def test_jaccard_rows_match_direct_computation(self, lift_index, lift_corpus, lift_catalog):
        report = run_extraction_experiment(
            lift_index, lift_corpus, lift_catalog,
            methods=("catalog",), variants=("both",), k_grid=(10,), n=10,
        )
        row = next(r for r in report.rows if r["metric"] == "jaccard")
        normalizer = MatchNormalizer()
        per_doc = [
            jaccard(set(rec["predictions"][:10]), set(rec["gold"]), normalizer)
            for rec in report.per_doc
            if rec["gold"]
        ]
        assert row["value"] == pytest.approx(sum(per_doc) / len(per_doc))


class TestAbstractionExperiment:
    def test_hit_rate_rows(self, lift_index, lift_corpus, lift_catalog):
        report = run_abstraction_experiment(
            lift_index, lift_corpus, lift_catalog,
            kinds=("tfidf",), k_grid=(5, 10), n=10,
        )
        assert {r["metric"] for r in report.rows} == {"hit_rate_recall"}
        values = {r["k"]: r["value"] for r in report.rows}
        assert values[5] <= values[10]


class TestDenoiseExperiment:
    def test_linkage_rows_present(self, lift_index, lift_corpus, lift_catalog):
        report = run_denoise_experiment(
            lift_index, lift_corpus, lift_catalog, cloud_k=5, n=10, seed=0
        )
        methods = {r["method"] for r in report.rows}
        assert methods == {"unpruned", "single", "complete", "average"}
        for row in report.rows:
            assert 0.0 <= row["value"] <= 1.0

    def test_unpruned_keeps_supersets(self, lift_index, lift_corpus, lift_catalog):
        report = run_denoise_experiment(
            lift_index, lift_corpus, lift_catalog, cloud_k=5, n=10, seed=0
        )
        kept = {}
        for rec in report.per_doc:
            kept.setdefault(rec["doc"], {})[rec["linkage"]] = set(rec["kept"])
        for doc_kept in kept.values():
            for linkage in ("single", "complete", "average"):
                assert doc_kept[linkage] <= doc_kept["unpruned"]


class TestNSweep:
    def test_rows_carry_n(self, lift_index, lift_corpus, lift_catalog):
        report = run_n_sweep(
            lift_index, lift_corpus, lift_catalog,
            method="catalog", n_grid=(5, 10), k_grid=(5, 10),
        )
        assert {r["n"] for r in report.rows} == {5, 10}
        assert all(r["metric"] == "recall" for r in report.rows)
