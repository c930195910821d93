"""Latent Dirichlet Allocation by collapsed Gibbs sampling.

A single corpus-level model is fitted over the content vocabulary; each
document's smoothed topic proportions are then usable as classifier features.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Corpus
from .errors import DocumentWithoutContentTokensError, EmptyVocabularyError
from .features import FeatureVector


@dataclass(frozen=True)
class TopicModel:
    K: int
    vocab: tuple[str, ...]
    alpha: float
    beta: float
    doc_ids: tuple[str, ...]
    topic_word_counts: np.ndarray  # K x V
    doc_topic_counts: np.ndarray  # n x K
    assignments: tuple[np.ndarray, ...]  # per-doc topic ids, one per content token
    seed: int


@dataclass(frozen=True)
class TopicFeatures:
    doc_id: str
    proportions: tuple[float, ...]


def fit_lda(
    corpus: Corpus,
    vocab: tuple[str, ...],
    K: int = 3,
    alpha: float | None = None,
    beta: float = 0.01,
    iterations: int = 1000,
    seed: int = 0,
    sweep_callback=None,
    initial_assignments=None,
) -> TopicModel:
    """Collapsed Gibbs sampling with conditional
    p(z=k) ~ (n_dk + alpha) * (n_kw + beta) / (n_k + V*beta).

    Deterministic given the seed; count invariants hold after every sweep
    (sweep_callback, if given, is invoked after each sweep with the current
    topic-word counts, doc-topic counts, topic totals and assignments).
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if not vocab:
        raise EmptyVocabularyError("empty content vocabulary")
    if alpha is None:
        alpha = 50.0 / K
    word_index = {w: i for i, w in enumerate(vocab)}
    docs_words: list[np.ndarray] = []
    for doc in corpus:
        ids = [word_index[t] for t in doc.tokens if t in word_index]
        if not ids:
            raise DocumentWithoutContentTokensError(
                f"document {doc.doc_id!r} has no content-vocabulary tokens"
            )
        docs_words.append(np.array(ids, dtype=np.int64))

    rng = np.random.default_rng(seed)
    n, V = len(docs_words), len(vocab)
    nkw = np.zeros((K, V), dtype=np.int64)
    ndk = np.zeros((n, K), dtype=np.int64)
    nk = np.zeros(K, dtype=np.int64)
    if initial_assignments is not None:
        # explicit init (for traceability); the rng then drives sweeps only
        assignments = [np.array(zs, dtype=np.int64) for zs in initial_assignments]
        if [len(z) for z in assignments] != [len(w) for w in docs_words]:
            raise ValueError("initial_assignments do not match document lengths")
    else:
        assignments = [rng.integers(0, K, size=len(words)) for words in docs_words]
    for d, (words, zs) in enumerate(zip(docs_words, assignments)):
        for w, z in zip(words, zs):
            nkw[z, w] += 1
            ndk[d, z] += 1
            nk[z] += 1

    for _ in range(iterations):
        for d, (words, zs) in enumerate(zip(docs_words, assignments)):
            for j in range(len(words)):
                w, z = words[j], zs[j]
                nkw[z, w] -= 1
                ndk[d, z] -= 1
                nk[z] -= 1
                p = (ndk[d] + alpha) * (nkw[:, w] + beta) / (nk + V * beta)
                # inverse-CDF draw: one uniform per token
                cum = np.cumsum(p)
                z = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
                z = min(z, K - 1)
                zs[j] = z
                nkw[z, w] += 1
                ndk[d, z] += 1
                nk[z] += 1
        if sweep_callback is not None:
            sweep_callback(nkw, ndk, nk, assignments)

    return TopicModel(
        K=K,
        vocab=vocab,
        alpha=alpha,
        beta=beta,
        doc_ids=tuple(doc.doc_id for doc in corpus),
        topic_word_counts=nkw,
        doc_topic_counts=ndk,
        assignments=tuple(assignments),
        seed=seed,
    )


def topic_features(model: TopicModel, doc_index: int) -> TopicFeatures:
    """Smoothed topic proportions (n_dk + alpha) / (n_d + K*alpha)."""
    ndk = model.doc_topic_counts[doc_index]
    nd = int(ndk.sum())
    props = (ndk + model.alpha) / (nd + model.K * model.alpha)
    return TopicFeatures(
        doc_id=model.doc_ids[doc_index], proportions=tuple(float(p) for p in props)
    )


def topic_feature_vectors(model: TopicModel) -> list[FeatureVector]:
    names = tuple(f"t{k}" for k in range(model.K))
    out = []
    for i, doc_id in enumerate(model.doc_ids):
        tf = topic_features(model, i)
        out.append(
            FeatureVector(
                doc_id=doc_id,
                space_id=f"topics:{model.K}",
                names=names,
                values=tf.proportions,
            )
        )
    return out


def top_words(model: TopicModel, k: int, n_words: int = 20) -> list[str]:
    counts = model.topic_word_counts[k]
    order = sorted(range(len(model.vocab)), key=lambda i: (-counts[i], model.vocab[i]))
    return [model.vocab[i] for i in order[:n_words]]


def topics_json(model: TopicModel) -> str:
    payload = {
        "K": model.K,
        "alpha": model.alpha,
        "beta": model.beta,
        "seed": model.seed,
        "topics": [
            {"topic": k, "top_words": top_words(model, k)} for k in range(model.K)
        ],
        "documents": [
            {
                "doc_id": doc_id,
                "proportions": list(topic_features(model, i).proportions),
            }
            for i, doc_id in enumerate(model.doc_ids)
        ],
    }
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)


def write_topic_features_csv(path: str | Path, model: TopicModel) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("doc_id," + ",".join(f"t{k}" for k in range(model.K)) + "\n")
        for i, doc_id in enumerate(model.doc_ids):
            props = topic_features(model, i).proportions
            fh.write(doc_id + "," + ",".join(repr(p) for p in props) + "\n")
