"""Manifest-driven corpus loading, tokenization and essay grouping.

A corpus is described by a UTF-8 CSV manifest with the header
``file_path,doc_id,year,volume,period,exclude`` whose rows point at plain-text
files relative to a corpus root.  Documents are NFC-normalized, tokenized into
lowercase word tokens and split into sentences at load time.
"""

from __future__ import annotations

import csv
import re
import statistics
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    DuplicateDocIdError,
    EmptyCorpusError,
    EncodingError,
    InconsistentVolumePeriodError,
    MissingFileError,
)

# A token is a maximal run of Unicode letters/digits, optionally joined by
# internal hyphens or apostrophes ("intr-o", "s'a").  [^\W_] is \w minus the
# underscore, Unicode-aware.
_TOKEN_RE = re.compile(r"[^\W_]+(?:[-'’ʼ][^\W_]+)*")
_SENT_PUNCT_RE = re.compile(r"[.!?]+")

YEAR_MIN = 1900
YEAR_MAX = 2100


@dataclass(frozen=True)
class ManifestEntry:
    file_path: str
    doc_id: str
    year: int
    volume: int
    period: str
    exclude: bool


@dataclass(frozen=True)
class Document:
    doc_id: str
    text: str
    tokens: tuple[str, ...]
    sentences: tuple[tuple[int, int], ...]  # half-open token-index spans
    year: int
    volume: int
    period: str

    @property
    def n_tokens(self) -> int:
        return len(self.tokens)

    @property
    def n_sentences(self) -> int:
        return len(self.sentences)


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]

    @property
    def years(self) -> tuple[int, ...]:
        return tuple(sorted({d.year for d in self.documents}))

    @property
    def volumes(self) -> tuple[int, ...]:
        return tuple(sorted({d.volume for d in self.documents}))

    @property
    def periods(self) -> tuple[str, ...]:
        return tuple(sorted({d.period for d in self.documents}))

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)


def tokenize(
    text: str, abbreviations: frozenset[str] | set[str] = frozenset()
) -> tuple[tuple[str, ...], tuple[tuple[int, int], ...]]:
    """Split text into lowercase word tokens and sentence spans.

    Sentence boundaries sit at runs of ``.!?`` followed by whitespace and an
    uppercase letter, or at end of text.  A ``.`` directly after a word in
    `abbreviations` (compared lowercase) never ends a sentence.

    Returns (tokens, sentences) where sentences are half-open (start, end)
    token-index spans that jointly cover all tokens.
    """
    matches = list(_TOKEN_RE.finditer(text))
    tokens = tuple(m.group().lower() for m in matches)
    if not tokens:
        return (), ()

    abbreviations = {a.lower() for a in abbreviations}
    starts = [m.start() for m in matches]
    ends = [m.end() for m in matches]

    break_positions: list[int] = []
    for pm in _SENT_PUNCT_RE.finditer(text):
        pos, end = pm.start(), pm.end()
        if "." in pm.group() and _preceding_token(tokens, ends, pos) in abbreviations:
            continue
        rest = text[end:]
        stripped = rest.lstrip()
        at_eot = stripped == ""
        after_space = len(stripped) < len(rest)
        if at_eot or (after_space and stripped[0].isupper()):
            break_positions.append(pos)

    sentences: list[tuple[int, int]] = []
    start_idx = 0
    for pos in break_positions:
        # close the sentence after the last token starting before the punct
        end_idx = start_idx
        while end_idx < len(tokens) and starts[end_idx] < pos:
            end_idx += 1
        if end_idx > start_idx:
            sentences.append((start_idx, end_idx))
            start_idx = end_idx
    if start_idx < len(tokens):
        sentences.append((start_idx, len(tokens)))
    return tokens, tuple(sentences)


def _preceding_token(tokens, token_ends, pos: int) -> str | None:
    """Token whose text ends exactly where the punctuation starts, if any."""
    # linear scan is fine: called once per punctuation run
    for i in range(len(token_ends) - 1, -1, -1):
        if token_ends[i] == pos:
            return tokens[i]
        if token_ends[i] < pos:
            return None
    return None


def load_abbreviations(path: str | Path) -> frozenset[str]:
    """Load an abbreviation list, one entry per line, '#' comments allowed."""
    out = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.add(line.lower())
    return frozenset(out)


def read_manifest(manifest_path: str | Path) -> list[ManifestEntry]:
    manifest_path = Path(manifest_path)
    if not manifest_path.exists():
        raise MissingFileError(f"manifest not found: {manifest_path}")
    entries: list[ManifestEntry] = []
    seen_ids: set[str] = set()
    volume_period: dict[int, str] = {}
    with open(manifest_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"file_path", "doc_id", "year", "volume", "period", "exclude"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise MissingFileError(
                f"manifest {manifest_path} missing columns: "
                f"{sorted(required - set(reader.fieldnames or []))}"
            )
        for row in reader:
            doc_id = row["doc_id"].strip()
            if doc_id in seen_ids:
                raise DuplicateDocIdError(f"duplicate doc_id {doc_id!r}")
            seen_ids.add(doc_id)
            year = int(row["year"])
            if not YEAR_MIN <= year <= YEAR_MAX:
                raise ValueError(
                    f"doc {doc_id!r}: year {year} outside [{YEAR_MIN}, {YEAR_MAX}]"
                )
            volume = int(row["volume"])
            period = row["period"].strip()
            prev = volume_period.setdefault(volume, period)
            if prev != period:
                raise InconsistentVolumePeriodError(
                    f"volume {volume} mapped to periods {prev!r} and {period!r}"
                )
            exclude = row["exclude"].strip().lower()
            if exclude not in ("true", "false"):
                raise ValueError(f"doc {doc_id!r}: exclude must be true/false")
            entries.append(
                ManifestEntry(
                    file_path=row["file_path"].strip(),
                    doc_id=doc_id,
                    year=year,
                    volume=volume,
                    period=period,
                    exclude=exclude == "true",
                )
            )
    return entries


def load_corpus(
    manifest_path: str | Path,
    corpus_root: str | Path,
    abbreviations: frozenset[str] | set[str] = frozenset(),
) -> Corpus:
    """Load all non-excluded manifest entries into a Corpus.

    Deterministic: documents are ordered by ascending (volume, doc_id).
    """
    corpus_root = Path(corpus_root)
    docs: list[Document] = []
    for entry in read_manifest(manifest_path):
        if entry.exclude:
            continue
        path = corpus_root / entry.file_path
        if not path.exists():
            raise MissingFileError(f"file for doc {entry.doc_id!r} not found: {path}")
        try:
            raw = path.read_text(encoding="utf-8")
        except UnicodeDecodeError as exc:
            raise EncodingError(f"{path} is not valid UTF-8: {exc}") from exc
        text = unicodedata.normalize("NFC", raw)
        tokens, sentences = tokenize(text, abbreviations)
        docs.append(
            Document(
                doc_id=entry.doc_id,
                text=text,
                tokens=tokens,
                sentences=sentences,
                year=entry.year,
                volume=entry.volume,
                period=entry.period,
            )
        )
    docs.sort(key=lambda d: (d.volume, d.doc_id))
    return Corpus(documents=tuple(docs))


def group_documents(corpus: Corpus, batch_size: int) -> Corpus:
    """Concatenate consecutive documents into batches, per volume.

    Batches never cross volume boundaries; a final short batch is kept as its
    own grouped document.  Grouped doc_id is "<volume>-g<index>" (1-based),
    year is the low median of member years.
    """
    if len(corpus) == 0:
        raise EmptyCorpusError("cannot group an empty corpus")
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    grouped: list[Document] = []
    by_volume: dict[int, list[Document]] = {}
    for doc in corpus.documents:
        by_volume.setdefault(doc.volume, []).append(doc)
    for volume in sorted(by_volume):
        members = by_volume[volume]
        for gi in range(0, len(members), batch_size):
            batch = members[gi : gi + batch_size]
            tokens: list[str] = []
            sentences: list[tuple[int, int]] = []
            texts: list[str] = []
            for doc in batch:
                offset = len(tokens)
                tokens.extend(doc.tokens)
                sentences.extend((s + offset, e + offset) for s, e in doc.sentences)
                texts.append(doc.text)
            grouped.append(
                Document(
                    doc_id=f"{volume}-g{gi // batch_size + 1}",
                    text="\n\n".join(texts),
                    tokens=tuple(tokens),
                    sentences=tuple(sentences),
                    year=statistics.median_low([d.year for d in batch]),
                    volume=volume,
                    period=batch[0].period,
                )
            )
    grouped.sort(key=lambda d: (d.volume, d.doc_id))
    return Corpus(documents=tuple(grouped))
