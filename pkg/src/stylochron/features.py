"""Feature extraction: function-word vectors, content-word vectors and
stylistic metrics (readability, lexical richness, word/sentence length)."""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus, Document, _TOKEN_RE
from .errors import EmptyCorpusError, EmptyDocumentError

ARI_CHAR_COEF = 4.71
ARI_WORD_COEF = 0.5
ARI_OFFSET = -21.43


@dataclass(frozen=True)
class FunctionWordList:
    words: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.words)) != len(self.words):
            raise ValueError("function-word list contains duplicates")
        for w in self.words:
            if _TOKEN_RE.fullmatch(w) is None:
                raise ValueError(f"function word {w!r} is not a valid token")

    def __contains__(self, word: str) -> bool:
        return word in self._set

    @property
    def _set(self) -> frozenset[str]:
        # cached on first use
        s = self.__dict__.get("_set_cache")
        if s is None:
            s = frozenset(self.words)
            self.__dict__["_set_cache"] = s
        return s

    def __len__(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class FeatureVector:
    doc_id: str
    space_id: str
    names: tuple[str, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.names) != len(self.values):
            raise ValueError("names and values must have equal length")


@dataclass(frozen=True)
class StylisticMetrics:
    ari: float
    lexical_richness: float
    avg_word_length: float
    avg_sentence_length: float

    def as_vector(self, doc_id: str) -> FeatureVector:
        return FeatureVector(
            doc_id=doc_id,
            space_id="style",
            names=("ari", "lexical_richness", "avg_word_length", "avg_sentence_length"),
            values=(
                self.ari,
                self.lexical_richness,
                self.avg_word_length,
                self.avg_sentence_length,
            ),
        )


def load_function_words(path: str | Path) -> FunctionWordList:
    """Load a function-word list: UTF-8, one word per line, '#' comments."""
    words: list[str] = []
    seen: set[str] = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word = line.lower()
        if word not in seen:
            seen.add(word)
            words.append(word)
    return FunctionWordList(words=tuple(words))


def default_function_words() -> FunctionWordList:
    """The bundled list of 120 Romanian function words."""
    return load_function_words(Path(__file__).parent / "data" / "function_words_ro.txt")


def function_word_vector(doc: Document, fw: FunctionWordList) -> FeatureVector:
    """Relative frequency of each function word over all tokens in the doc."""
    if doc.n_tokens == 0:
        raise EmptyDocumentError(f"document {doc.doc_id!r} has no tokens")
    counts = Counter(doc.tokens)
    total = doc.n_tokens
    return FeatureVector(
        doc_id=doc.doc_id,
        space_id=f"fw:{len(fw)}",
        names=fw.words,
        values=tuple(counts[w] / total for w in fw.words),
    )


def build_content_vocab(
    corpus: Corpus,
    fw: FunctionWordList,
    min_doc_count: int = 2,
    max_size: int = 5000,
) -> tuple[str, ...]:
    """Content vocabulary: non-function tokens present in >= min_doc_count
    documents, kept by descending total frequency up to max_size, then sorted
    lexicographically for determinism."""
    if len(corpus) == 0:
        raise EmptyCorpusError("cannot build a vocabulary from an empty corpus")
    total_freq: Counter[str] = Counter()
    doc_freq: Counter[str] = Counter()
    for doc in corpus:
        counts = Counter(t for t in doc.tokens if t not in fw)
        total_freq.update(counts)
        doc_freq.update(counts.keys())
    eligible = [w for w in total_freq if doc_freq[w] >= min_doc_count]
    eligible.sort(key=lambda w: (-total_freq[w], w))
    return tuple(sorted(eligible[:max_size]))


def content_word_vector(
    doc: Document, fw: FunctionWordList, vocab: tuple[str, ...]
) -> FeatureVector:
    """Relative frequency of each vocabulary word over all tokens in the doc.

    Function words never contribute (the vocabulary excludes them)."""
    if doc.n_tokens == 0:
        raise EmptyDocumentError(f"document {doc.doc_id!r} has no tokens")
    counts = Counter(t for t in doc.tokens if t not in fw)
    total = doc.n_tokens
    return FeatureVector(
        doc_id=doc.doc_id,
        space_id=f"content:{len(vocab)}",
        names=vocab,
        values=tuple(counts[w] / total for w in vocab),
    )


def load_lemma_lexicon(path: str | Path) -> dict[str, str]:
    """Load a surface<TAB>lemma lexicon (UTF-8 TSV)."""
    lexicon: dict[str, str] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        surface, lemma = line.split("\t", 1)
        lexicon[surface.strip().lower()] = lemma.strip().lower()
    return lexicon


def stylistic_metrics(
    doc: Document, lemmatizer: dict[str, str] | None = None
) -> StylisticMetrics:
    """Compute readability (ARI), lexical richness and average word/sentence
    length for one document.

    Characters are letters/digits inside tokens only; lemmatization is a
    lexicon lookup falling back to the surface form.
    """
    if doc.n_tokens == 0 or doc.n_sentences == 0:
        raise EmptyDocumentError(f"document {doc.doc_id!r} is empty")
    chars = sum(sum(1 for ch in tok if ch.isalnum()) for tok in doc.tokens)
    words = doc.n_tokens
    sents = doc.n_sentences
    if lemmatizer:
        lemmas = {lemmatizer.get(t, t) for t in doc.tokens}
    else:
        lemmas = set(doc.tokens)
    return StylisticMetrics(
        ari=ARI_CHAR_COEF * chars / words + ARI_WORD_COEF * words / sents + ARI_OFFSET,
        lexical_richness=len(lemmas) / words,
        avg_word_length=chars / words,
        avg_sentence_length=words / sents,
    )


def style_vector(doc: Document, lemmatizer: dict[str, str] | None = None) -> FeatureVector:
    return stylistic_metrics(doc, lemmatizer).as_vector(doc.doc_id)


def write_feature_matrix(path: str | Path, vectors: list[FeatureVector]) -> None:
    """Write feature vectors as CSV with header doc_id,<feature names...>."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["doc_id", *vectors[0].names])
        for v in vectors:
            writer.writerow([v.doc_id, *[repr(x) for x in v.values]])
