"""Keyword cloud de-noising: pairwise normalized web distance from local hit
counts, agglomerative clustering down to two clusters, and pruning of the
minority (outlier) cluster.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace

import numpy as np

from .extractors import KeywordCloud
from .search import SearchIndex, cohit_count, hit_count

# Finite stand-in distance for zero-hit / zero-joint / degenerate cases;
# dominates every finite fixture value while keeping linkages well-defined.
NGD_CAP = 4.0

LINKAGES = ("single", "complete", "average")


def ngd(index: SearchIndex, a: str, b: str) -> float:
    """Normalized distance between two keyword phrases from hit counts.

    dist = (max(log f) - log f_joint) / (log M - min(log f)), with f taken
    from conjunctive document containment. Zero hits or a zero joint count
    yield NGD_CAP; a zero denominator yields 0 when the numerator is also 0
    (both phrases in every document), else NGD_CAP.
    """
    if index.total_docs < 2:
        raise ValueError("distance needs an index of at least 2 documents")
    f_a = hit_count(index, a)
    f_b = hit_count(index, b)
    if f_a == 0 or f_b == 0:
        return NGD_CAP
    f_ab = cohit_count(index, a, b)
    if f_ab == 0:
        return NGD_CAP
    log_a, log_b = math.log(f_a), math.log(f_b)
    log_joint = math.log(f_ab)
    log_m = math.log(index.total_docs)
    numerator = max(log_a, log_b) - log_joint
    denominator = log_m - min(log_a, log_b)
    if denominator <= 0.0:
        return 0.0 if numerator <= 0.0 else NGD_CAP
    return min(numerator / denominator, NGD_CAP)


@dataclass(frozen=True)
class DistanceMatrix:
    labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("distance matrix labels must be distinct")

    def value(self, a: str, b: str) -> float:
        i = self.labels.index(a)
        j = self.labels.index(b)
        return float(self.values[i, j])


def distance_matrix(index: SearchIndex, cloud: KeywordCloud) -> DistanceMatrix:
    """All pairwise distances over the cloud; each unordered pair computed once."""
    labels = cloud.labels()
    if len(labels) < 2:
        raise ValueError("cloud must have at least 2 keywords")
    n = len(labels)
    values = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = ngd(index, labels[i], labels[j])
            values[i, j] = d
            values[j, i] = d
    return DistanceMatrix(labels=labels, values=values)


@dataclass(frozen=True)
class TwoClustering:
    """Two-way partition; clusters[0] is the (provisional) normal cluster."""

    clusters: tuple[tuple[str, ...], tuple[str, ...]]
    linkage: str
    tie_broken: bool = False

    @property
    def majority_size(self) -> int:
        return len(self.clusters[0])

    @property
    def minority_size(self) -> int:
        return len(self.clusters[1])

    @property
    def assignment(self) -> dict[str, str]:
        out = {label: "normal" for label in self.clusters[0]}
        out.update({label: "outlier" for label in self.clusters[1]})
        return out

    def labels(self) -> set[str]:
        return set(self.clusters[0]) | set(self.clusters[1])


def _pair_key(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, int]:
    return (min(a[0], b[0]), max(a[0], b[0]))


def cluster_two(matrix: DistanceMatrix, linkage: str) -> TwoClustering:
    """Agglomerate singletons until two clusters remain.

    Merge tie-break: the pair with the lowest (smallest label index) pair.
    Between-cluster distances: single = min pairwise, complete = max
    pairwise, average = unweighted mean over all cross pairs, maintained
    incrementally from the original matrix.
    """
    if linkage not in LINKAGES:
        raise ValueError(f"unknown linkage {linkage!r}; expected one of {LINKAGES}")
    labels = matrix.labels
    n = len(labels)
    if n < 2:
        raise ValueError("need at least 2 labels to cluster")

    # clusters keyed by their sorted index tuple; stats per unordered pair
    clusters: list[tuple[int, ...]] = [(i,) for i in range(n)]
    values = matrix.values

    def init_stats(a: tuple[int, ...], b: tuple[int, ...]):
        d = float(values[a[0], b[0]])
        return {"min": d, "max": d, "sum": d}

    stats: dict[tuple[tuple[int, ...], tuple[int, ...]], dict] = {}
    for i in range(n):
        for j in range(i + 1, n):
            stats[(clusters[i], clusters[j])] = init_stats(clusters[i], clusters[j])

    def stat_key(a, b):
        return (a, b) if a <= b else (b, a)

    def linkage_distance(a, b) -> float:
        s = stats[stat_key(a, b)]
        if linkage == "single":
            return s["min"]
        if linkage == "complete":
            return s["max"]
        return s["sum"] / (len(a) * len(b))

    while len(clusters) > 2:
        best = None
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                a, b = clusters[i], clusters[j]
                key = (linkage_distance(a, b), _pair_key(a, b))
                if best is None or key < best[0]:
                    best = (key, a, b)
        assert best is not None
        _, a, b = best
        merged = tuple(sorted(a + b))
        remaining = [c for c in clusters if c is not a and c is not b]
        for c in remaining:
            sa = stats.pop(stat_key(a, c))
            sb = stats.pop(stat_key(b, c))
            stats[stat_key(merged, c)] = {
                "min": min(sa["min"], sb["min"]),
                "max": max(sa["max"], sb["max"]),
                "sum": sa["sum"] + sb["sum"],
            }
        stats.pop(stat_key(a, b))
        clusters = remaining + [merged]

    first, second = clusters
    named = (
        tuple(labels[i] for i in first),
        tuple(labels[i] for i in second),
    )
    # larger cluster first; equal sizes keep smallest-label-index cluster first
    if len(second) > len(first) or (len(second) == len(first) and second[0] < first[0]):
        named = (named[1], named[0])
    return TwoClustering(clusters=named, linkage=linkage)


def resolve_majority(clustering: TwoClustering, rng_seed: int) -> TwoClustering:
    """Fix the normal/outlier designation, breaking size ties with a seeded coin."""
    if clustering.majority_size != clustering.minority_size:
        return clustering
    keep_first = random.Random(rng_seed).random() < 0.5
    clusters = clustering.clusters if keep_first else clustering.clusters[::-1]
    return replace(clustering, clusters=clusters, tie_broken=True)


def prune(cloud: KeywordCloud, clustering: TwoClustering, rng_seed: int) -> KeywordCloud:
    """Keep only the majority cluster's keywords with their original weights.

    The minority cluster is always discarded (the cloud is assumed to carry
    at least one noise tag); equal-sized clusters are resolved by a seeded
    uniform coin so runs replay identically.
    """
    if clustering.labels() != set(cloud.labels()):
        raise ValueError("clustering does not cover exactly the cloud's keywords")
    resolved = resolve_majority(clustering, rng_seed)
    kept = set(resolved.clusters[0])
    return KeywordCloud(
        entries={kw: w for kw, w in cloud.entries.items() if kw in kept}
    )
