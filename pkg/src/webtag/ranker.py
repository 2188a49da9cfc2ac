"""Topic ranking against catalog contexts under three vector-space models:
plain TF-IDF, TF-IDF + truncated-SVD projection (LSI), and LDA topic
proportions from a seeded collapsed Gibbs sampler. Ranking is by cosine
similarity in the model's space.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .context import WebContext

log = logging.getLogger(__name__)

MODEL_KINDS = ("tfidf", "lsi", "lda")

DEFAULT_LSI_RANK = 2
DEFAULT_LDA_TOPICS = 50
DEFAULT_LDA_BETA = 0.01
DEFAULT_LDA_ITERATIONS = 500
DEFAULT_FOLD_IN_ITERATIONS = 50


class ModelError(ValueError):
    pass


class LdaGibbs:
    """Collapsed Gibbs sampler over bag-of-words documents.

    All randomness flows from the constructor seed; two samplers built with
    the same inputs and seed evolve identically.
    """

    def __init__(
        self,
        docs: list[list[int]],
        n_words: int,
        n_topics: int,
        alpha: float,
        beta: float,
        seed: int,
    ):
        if n_topics < 2:
            raise ModelError("LDA needs at least 2 topics")
        self.docs = docs
        self.V = n_words
        self.K = n_topics
        self.alpha = alpha
        self.beta = beta
        self.seed = seed
        self._rng = np.random.default_rng(seed)

        n = len(docs)
        self.n_kw = np.zeros((self.K, self.V), dtype=np.int64)
        self.n_k = np.zeros(self.K, dtype=np.int64)
        self.n_dk = np.zeros((n, self.K), dtype=np.int64)
        self.n_d = np.zeros(n, dtype=np.int64)
        self.assignments: list[np.ndarray] = []
        for d, doc in enumerate(docs):
            z = self._rng.integers(0, self.K, size=len(doc))
            self.assignments.append(z)
            for i, w in enumerate(doc):
                k = z[i]
                self.n_kw[k, w] += 1
                self.n_k[k] += 1
                self.n_dk[d, k] += 1
                self.n_d[d] += 1
        self.sweeps_done = 0

    def _sample(self, weights: np.ndarray, rng: np.random.Generator) -> int:
        cumulative = np.cumsum(weights)
        u = rng.random() * cumulative[-1]
        return int(np.searchsorted(cumulative, u, side="right"))

    def sweep(self) -> None:
        """One full Gibbs pass over every token."""
        for d, doc in enumerate(self.docs):
            z = self.assignments[d]
            for i, w in enumerate(doc):
                k_old = z[i]
                self.n_kw[k_old, w] -= 1
                self.n_k[k_old] -= 1
                self.n_dk[d, k_old] -= 1
                weights = (
                    (self.n_kw[:, w] + self.beta)
                    / (self.n_k + self.V * self.beta)
                    * (self.n_dk[d] + self.alpha)
                )
                k_new = self._sample(weights, self._rng)
                z[i] = k_new
                self.n_kw[k_new, w] += 1
                self.n_k[k_new] += 1
                self.n_dk[d, k_new] += 1
        self.sweeps_done += 1

    def run(self, iterations: int) -> None:
        for _ in range(iterations):
            self.sweep()

    @property
    def phi(self) -> np.ndarray:
        """Topic-word distributions, rows summing to 1."""
        return (self.n_kw + self.beta) / (self.n_k + self.V * self.beta)[:, None]

    @property
    def theta(self) -> np.ndarray:
        """Document-topic distributions, rows summing to 1."""
        return (self.n_dk + self.alpha) / (self.n_d + self.K * self.alpha)[:, None]

    def fold_in(self, tokens: list[int], iterations: int, seed: int) -> np.ndarray:
        """Infer topic proportions for unseen tokens with phi held fixed."""
        rng = np.random.default_rng(seed)
        if not tokens:
            return np.zeros(self.K)
        m_k = np.zeros(self.K, dtype=np.int64)
        z = rng.integers(0, self.K, size=len(tokens))
        for k in z:
            m_k[k] += 1
        for _ in range(iterations):
            for i, w in enumerate(tokens):
                m_k[z[i]] -= 1
                weights = (
                    (self.n_kw[:, w] + self.beta)
                    / (self.n_k + self.V * self.beta)
                    * (m_k + self.alpha)
                )
                k_new = self._sample(weights, rng)
                z[i] = k_new
                m_k[k_new] += 1
        return (m_k + self.alpha) / (len(tokens) + self.K * self.alpha)


@dataclass(frozen=True)
class VectorSpaceModel:
    kind: str
    vocabulary: dict[str, int]
    topics: tuple[str, ...]
    topic_vectors: np.ndarray  # one row per fitted topic context
    idf: np.ndarray | None = None
    projection: np.ndarray | None = None  # (V, rank) right singular vectors
    singular_values: np.ndarray | None = None
    lda: LdaGibbs | None = None
    fold_in_iterations: int = DEFAULT_FOLD_IN_ITERATIONS
    fitted_on: str = ""


@dataclass(frozen=True)
class TopicRanking:
    doc_id: str
    items: tuple[tuple[str, float], ...]

    def top(self, k: int) -> list[str]:
        return [topic for topic, _ in self.items[:k]]


def _count_matrix(
    contexts: Mapping[str, WebContext], vocabulary: dict[str, int]
) -> np.ndarray:
    matrix = np.zeros((len(contexts), len(vocabulary)))
    for row, ctx in enumerate(contexts.values()):
        for token, count in ctx.bag.items():
            col = vocabulary.get(token)
            if col is not None:
                matrix[row, col] = count
    return matrix


def _doc_tokens(bag, vocabulary: dict[str, int]) -> list[int]:
    tokens: list[int] = []
    for token in sorted(bag):
        col = vocabulary.get(token)
        if col is not None:
            tokens.extend([col] * bag[token])
    return tokens


def fit_model(
    contexts: Mapping[str, WebContext],
    kind: str,
    rank: int = DEFAULT_LSI_RANK,
    n_topics: int = DEFAULT_LDA_TOPICS,
    alpha: float | None = None,
    beta: float = DEFAULT_LDA_BETA,
    iterations: int = DEFAULT_LDA_ITERATIONS,
    seed: int = 0,
    fold_in_iterations: int = DEFAULT_FOLD_IN_ITERATIONS,
) -> VectorSpaceModel:
    """Fit a vector-space model on the topic contexts."""
    if kind not in MODEL_KINDS:
        raise ModelError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")
    nonempty = sum(1 for ctx in contexts.values() if ctx.bag)
    if nonempty < 2:
        raise ModelError("need at least 2 topics with nonempty contexts")

    vocabulary = {
        token: i
        for i, token in enumerate(sorted({t for ctx in contexts.values() for t in ctx.bag}))
    }
    topics = tuple(contexts)
    n = len(contexts)
    counts = _count_matrix(contexts, vocabulary)
    fitted_on = f"{n} topic contexts, vocabulary {len(vocabulary)}"

    df = np.count_nonzero(counts > 0, axis=0)
    idf = np.log(n / df)
    tfidf = counts * idf

    if kind == "tfidf":
        return VectorSpaceModel(
            kind=kind,
            vocabulary=vocabulary,
            topics=topics,
            topic_vectors=tfidf,
            idf=idf,
            fitted_on=fitted_on,
        )

    if kind == "lsi":
        if rank < 1:
            raise ModelError("LSI rank must be >= 1")
        matrix_rank = int(np.linalg.matrix_rank(tfidf))
        if rank > matrix_rank:
            raise ModelError(
                f"LSI rank {rank} exceeds matrix rank {matrix_rank}"
            )
        _, singular_values, vt = np.linalg.svd(tfidf, full_matrices=False)
        projection = vt[:rank].T
        return VectorSpaceModel(
            kind=kind,
            vocabulary=vocabulary,
            topics=topics,
            topic_vectors=tfidf @ projection,
            idf=idf,
            projection=projection,
            singular_values=singular_values[:rank],
            fitted_on=fitted_on,
        )

    # lda: collapsed Gibbs on raw counts; TF-IDF weights stay on the
    # tfidf/lsi paths only.
    if alpha is None:
        alpha = 50.0 / n_topics
    docs = [_doc_tokens(ctx.bag, vocabulary) for ctx in contexts.values()]
    sampler = LdaGibbs(
        docs,
        n_words=len(vocabulary),
        n_topics=n_topics,
        alpha=alpha,
        beta=beta,
        seed=seed,
    )
    sampler.run(iterations)
    return VectorSpaceModel(
        kind=kind,
        vocabulary=vocabulary,
        topics=topics,
        topic_vectors=sampler.theta,
        lda=sampler,
        fold_in_iterations=fold_in_iterations,
        fitted_on=fitted_on,
    )


def embed(model: VectorSpaceModel, context: WebContext) -> np.ndarray:
    """Embed a context in the model space; out-of-vocabulary terms drop out.

    A context with no in-vocabulary terms embeds to a zero vector (flagged
    via log) so callers can rank it last or reject it.
    """
    tokens_in_vocab = [t for t in context.bag if t in model.vocabulary]
    if not tokens_in_vocab:
        log.warning("context %r has no in-vocabulary terms", context.query[:60])
        dim = model.topic_vectors.shape[1]
        return np.zeros(dim)

    if model.kind == "lda":
        assert model.lda is not None
        tokens = _doc_tokens(context.bag, model.vocabulary)
        return model.lda.fold_in(
            tokens, iterations=model.fold_in_iterations, seed=model.lda.seed
        )

    vec = np.zeros(len(model.vocabulary))
    for token in tokens_in_vocab:
        vec[model.vocabulary[token]] = context.bag[token]
    vec = vec * model.idf
    if model.kind == "lsi":
        return vec @ model.projection
    return vec


def rank_topics(
    model: VectorSpaceModel,
    doc_context: WebContext,
    contexts: Mapping[str, WebContext] | None = None,
    doc_id: str = "",
) -> TopicRanking:
    """Rank fitted topics by cosine similarity with the document context.

    Zero-vector topics rank last; equal scores break lexicographically.
    """
    if contexts is not None and set(contexts) != set(model.topics):
        raise ModelError("model was not fitted on the given catalog contexts")
    doc_vec = embed(model, doc_context)
    doc_norm = float(np.linalg.norm(doc_vec))
    if doc_norm == 0.0:
        raise ModelError("document context cannot be embedded (no usable terms)")

    entries = []
    for i, topic in enumerate(model.topics):
        tvec = model.topic_vectors[i]
        tnorm = float(np.linalg.norm(tvec))
        if tnorm == 0.0:
            entries.append((True, 0.0, topic))
            continue
        score = float(np.dot(doc_vec, tvec) / (doc_norm * tnorm))
        entries.append((False, score, topic))
    entries.sort(key=lambda e: (e[0], -e[1], e[2]))
    return TopicRanking(
        doc_id=doc_id, items=tuple((topic, score) for _, score, topic in entries)
    )


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))
