"""Planted synthetic corpora.

The real corpus studied in the analyses this toolkit supports is not
redistributable, so verification is self-hosted: these generators plant known
period structure (function-word usage, topical vocabulary, sentence/word
length) that the pipeline is expected to recover.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .corpus import Corpus, Document, tokenize
from .features import FunctionWordList, default_function_words

PERIOD_A = "communism"
PERIOD_B = "democracy"

# volumes 2 and 3 hold period-A texts, 1 and 4 period-B, mirroring the
# four-volume layout the toolkit is organized around
VOLUMES_A = (2, 3)
VOLUMES_B = (1, 4)


def _content_words(prefix: str, n: int, pad: str, width: int) -> list[str]:
    out = []
    for i in range(n):
        w = f"{prefix}{i:03d}"
        while len(w) < width:
            w += pad
        out.append(w)
    return out


def _render_sentences(rng, n_tokens: int, sent_len_mu: float, pick) -> str:
    """Assemble tokens into capitalized sentences of roughly sent_len_mu words."""
    sentences = []
    remaining = n_tokens
    while remaining > 0:
        length = max(3, int(round(rng.normal(sent_len_mu, max(sent_len_mu * 0.1, 1.0)))))
        length = min(length, remaining)
        words = [pick() for _ in range(length)]
        words[0] = words[0].capitalize()
        sentences.append(" ".join(words) + ".")
        remaining -= length
    return " ".join(sentences)


class PeriodProfile:
    """Sampling profile for one period: function-word preferences, topical
    vocabulary and sentence/word length."""

    def __init__(self, fw_weights, content_words, content_weights, sent_len_mu, fw_rate):
        self.fw_weights = fw_weights
        self.content_words = content_words
        self.content_weights = content_weights
        self.sent_len_mu = sent_len_mu
        self.fw_rate = fw_rate


def _period_profiles(fw: FunctionWordList):
    half = len(fw) // 2
    wa = np.full(len(fw), 0.2 / (len(fw) - half))
    wa[:half] = 0.8 / half
    wb = np.full(len(fw), 0.2 / half)
    wb[half:] = 0.8 / (len(fw) - half)

    words_a = _content_words("tema", 60, "lor", 11)
    words_b = _content_words("fapt", 60, "", 7)
    all_words = words_a + words_b
    ca = np.full(len(all_words), 0.15 / len(words_b))
    ca[: len(words_a)] = 0.85 / len(words_a)
    cb = np.full(len(all_words), 0.15 / len(words_a))
    cb[len(words_a) :] = 0.85 / len(words_b)

    prof_a = PeriodProfile(wa / wa.sum(), all_words, ca / ca.sum(), 18.0, 0.35)
    prof_b = PeriodProfile(wb / wb.sum(), all_words, cb / cb.sum(), 11.0, 0.35)
    return prof_a, prof_b


def _sample_doc_text(rng, profile: PeriodProfile, fw: FunctionWordList, n_tokens: int) -> str:
    fw_words = np.array(fw.words)
    content = np.array(profile.content_words)

    def pick() -> str:
        if rng.random() < profile.fw_rate:
            return str(rng.choice(fw_words, p=profile.fw_weights))
        return str(rng.choice(content, p=profile.content_weights))

    return _render_sentences(rng, n_tokens, profile.sent_len_mu, pick)


def make_period_corpus(
    seed: int,
    docs_per_period: int = 20,
    tokens_per_doc: int = 400,
    fw: FunctionWordList | None = None,
) -> Corpus:
    """Two-period corpus with planted style and content differences.

    Period A ("communism", volumes 2/3, years 1967-1989) and period B
    ("democracy", volumes 1/4, years 1990-2011) differ in function-word
    distribution, topical vocabulary, word length and sentence length.
    """
    fw = fw or default_function_words()
    rng = np.random.default_rng(seed)
    prof_a, prof_b = _period_profiles(fw)
    docs: list[Document] = []
    specs = [
        (PERIOD_A, VOLUMES_A, prof_a, (1967, 1989)),
        (PERIOD_B, VOLUMES_B, prof_b, (1990, 2011)),
    ]
    for period, volumes, profile, (y0, y1) in specs:
        for i in range(docs_per_period):
            text = _sample_doc_text(rng, profile, fw, tokens_per_doc)
            tokens, sentences = tokenize(text)
            volume = volumes[i % len(volumes)]
            year = y0 + int(rng.integers(0, y1 - y0 + 1))
            docs.append(
                Document(
                    doc_id=f"{period[:3]}-{i:03d}",
                    text=text,
                    tokens=tokens,
                    sentences=sentences,
                    year=year,
                    volume=volume,
                    period=period,
                )
            )
    docs.sort(key=lambda d: (d.volume, d.doc_id))
    return Corpus(documents=tuple(docs))


def make_drift_corpus(
    seed: int,
    year_start: int = 1967,
    year_end: int = 2011,
    change_year: int = 1990,
    docs_per_year: int = 1,
    sentences_per_doc: int = 30,
    mu_before: float = 18.0,
    mu_after: float = 12.0,
    fw: FunctionWordList | None = None,
) -> Corpus:
    """Corpus with a planted shift in average sentence length at change_year.

    Per-document mean sentence length is drawn around mu_before/mu_after with
    unit spread, so the planted shift is several pooled standard deviations.
    """
    fw = fw or default_function_words()
    rng = np.random.default_rng(seed)
    vocab = np.array(_content_words("vorba", 80, "re", 8) + list(fw.words))
    docs: list[Document] = []
    for year in range(year_start, year_end + 1):
        for j in range(docs_per_year):
            mu = mu_before if year < change_year else mu_after
            doc_mu = rng.normal(mu, 1.0)
            sentences = []
            for _ in range(sentences_per_doc):
                length = max(3, int(round(rng.normal(doc_mu, 1.0))))
                words = [str(rng.choice(vocab)) for _ in range(length)]
                words[0] = words[0].capitalize()
                sentences.append(" ".join(words) + ".")
            text = " ".join(sentences)
            tokens, spans = tokenize(text)
            period = PERIOD_A if year < change_year else PERIOD_B
            volume = 2 if year < change_year else 4
            docs.append(
                Document(
                    doc_id=f"y{year}-{j}",
                    text=text,
                    tokens=tokens,
                    sentences=spans,
                    year=year,
                    volume=volume,
                    period=period,
                )
            )
    docs.sort(key=lambda d: (d.volume, d.doc_id))
    return Corpus(documents=tuple(docs))


def make_topic_corpus(
    seed: int,
    n_docs: int = 50,
    tokens_per_doc: int = 100,
    purity: float = 0.95,
) -> tuple[Corpus, tuple[str, ...], list[int]]:
    """Corpus over two disjoint topical vocabularies.

    Returns (corpus, vocabulary, planted partition label per document).
    Document i draws `purity` of its tokens from its partition's vocabulary.
    """
    rng = np.random.default_rng(seed)
    part_a = _content_words("stea", 30, "", 7)
    part_b = _content_words("mare", 30, "", 7)
    vocab = tuple(sorted(part_a + part_b))
    labels: list[int] = []
    docs: list[Document] = []
    for i in range(n_docs):
        label = i % 2
        own, other = (part_a, part_b) if label == 0 else (part_b, part_a)
        words = [
            str(rng.choice(own)) if rng.random() < purity else str(rng.choice(other))
            for _ in range(tokens_per_doc)
        ]
        text = " ".join(words) + "."
        tokens, spans = tokenize(text)
        docs.append(
            Document(
                doc_id=f"t-{i:03d}",
                text=text,
                tokens=tokens,
                sentences=spans,
                year=1980 + label,
                volume=label + 1,
                period=PERIOD_A if label == 0 else PERIOD_B,
            )
        )
        labels.append(label)
    return Corpus(documents=tuple(docs)), vocab, labels


def write_corpus(corpus: Corpus, out_dir: str | Path) -> Path:
    """Write a corpus to disk as plain-text files plus a manifest.csv."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = out_dir / "manifest.csv"
    with open(manifest, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["file_path", "doc_id", "year", "volume", "period", "exclude"])
        for doc in corpus:
            fname = f"{doc.doc_id}.txt"
            (out_dir / fname).write_text(doc.text, encoding="utf-8")
            writer.writerow([fname, doc.doc_id, doc.year, doc.volume, doc.period, "false"])
    return manifest
