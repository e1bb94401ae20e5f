"""Document validation, tokenization and the car-domain check"""
from __future__ import annotations

import logging
import re
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional

from app.constants import DOCUMENT_EXTENSIONS
from app.exceptions import EmptyDocument, InvalidEncoding, InvalidFormat, StoreIoError
from app.schemas.corpus import AttributeValue, Document, RawDocument

logger = logging.getLogger(__name__)

# Maximal runs of Unicode letters/digits; underscore is punctuation here
RE_WORD = re.compile(r"[^\W_]+", re.UNICODE)

RESOURCES_DIR = Path(__file__).resolve().parent.parent.parent / "resources"
DEFAULT_STOPWORDS_FILE = RESOURCES_DIR / "stopwords-en.txt"


def validate_document(path: str | Path, body: bytes) -> RawDocument:
    """Accept only non-blank UTF-8 .txt documents"""
    path = Path(path)

    if path.suffix.lower() not in DOCUMENT_EXTENSIONS:
        raise InvalidFormat(f"{path.name}: only .txt documents are processed")

    try:
        text = body.decode("utf-8")
    except UnicodeDecodeError as e:
        raise InvalidEncoding(f"{path.name}: not valid UTF-8 ({e.reason} at byte {e.start})") from e

    if not text.strip():
        raise EmptyDocument(f"{path.name}: document is empty")

    return RawDocument(source_name=path.name, body=text)


def tokenize(
    raw: RawDocument,
    stopwords: Iterable[str] = frozenset(),
    label: Optional[str] = None,
    attributes: Optional[Dict[str, AttributeValue]] = None,
) -> Document:
    """Lowercase letter/digit runs with punctuation and stopwords removed"""
    stop = stopwords if isinstance(stopwords, (set, frozenset)) else set(stopwords)
    tokens = [
        token for token in RE_WORD.findall(raw.body.lower())
        if token not in stop
    ]
    return Document.from_tokens(raw.source_name, tokens, label=label, attributes=attributes)


def load_stopwords(path: Optional[str | Path] = None) -> FrozenSet[str]:
    """Read one stopword per line; the bundled English list when no path is given"""
    source = Path(path) if path else DEFAULT_STOPWORDS_FILE

    try:
        lines = source.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise StoreIoError(f"cannot read stopword file {source}: {e}") from e

    words = frozenset(
        line.strip().lower() for line in lines
        if line.strip() and not line.lstrip().startswith("#")
    )
    logger.debug("Loaded %d stopwords from %s", len(words), source)
    return words


def read_document(
    path: str | Path,
    stopwords: Iterable[str] = frozenset(),
    attribute_names: Iterable[str] = (),
) -> Document:
    """Read, validate and tokenize one document file, parsing attribute_names mentions"""
    path = Path(path)
    try:
        body = path.read_bytes()
    except OSError as e:
        raise StoreIoError(f"cannot read {path}: {e}") from e
    raw = validate_document(path, body)
    return tokenize(raw, stopwords, attributes=parse_attributes(raw, attribute_names))


def load_documents(
    paths: Iterable[str | Path],
    stopwords: Iterable[str] = frozenset(),
    workers: int = 1,
    attribute_names: Iterable[str] = (),
) -> List[Document]:
    """Load many documents; results come back in path-sorted order"""
    ordered = sorted(Path(p) for p in paths)
    stop = frozenset(stopwords)
    names = tuple(attribute_names)

    if workers <= 1 or len(ordered) <= 1:
        return [read_document(p, stop, names) for p in ordered]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map() preserves input order regardless of completion order
        return list(pool.map(lambda p: read_document(p, stop, names), ordered))


def parse_attributes(raw: RawDocument, names: Iterable[str]) -> Dict[str, float]:
    """
    Pick numeric attribute mentions such as "price 12.5" or "mileage: 40"
    out of free text; the first mention of each attribute wins.
    """
    found: Dict[str, float] = {}
    for name in names:
        pattern = rf"\b{re.escape(name)}\b\s*[:=]?\s*(-?\d+(?:\.\d+)?)"
        match = re.search(pattern, raw.body, flags=re.IGNORECASE)
        if match:
            found[name] = float(match.group(1))
    return found


def domain_check(doc: Document, lexicon: Iterable[str], min_hits: int = 1) -> bool:
    """True when the document holds at least min_hits distinct lexicon words"""
    lexicon = frozenset(lexicon)
    if not lexicon:
        raise ValueError("domain lexicon must not be empty")

    hits = lexicon.intersection(doc.token_counts)
    return len(hits) >= min_hits
