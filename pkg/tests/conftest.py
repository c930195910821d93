from pathlib import Path

import pytest

from stylochron.corpus import Document, tokenize

SAMPLE_CORPUS = Path(__file__).parent.parent / "src" / "stylochron" / "data" / "sample_corpus"


def make_doc(text: str, doc_id: str = "d", year: int = 1980, volume: int = 1,
             period: str = "communism") -> Document:
    tokens, sentences = tokenize(text)
    return Document(
        doc_id=doc_id,
        text=text,
        tokens=tokens,
        sentences=sentences,
        year=year,
        volume=volume,
        period=period,
    )


@pytest.fixture
def sample_manifest() -> Path:
    return SAMPLE_CORPUS / "manifest.csv"


@pytest.fixture
def sample_root() -> Path:
    return SAMPLE_CORPUS
