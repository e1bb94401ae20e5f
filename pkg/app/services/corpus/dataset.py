"""Car evaluation dataset: loading, generation, rendering and splitting"""
from __future__ import annotations

import csv
import logging
import math
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
import pandas as pd

from app.constants import (
    CAR_ATTRIBUTES,
    DATASET_HEADER,
    PREDEFINED_CLASSES,
)
from app.exceptions import NoDocuments, ParseError, StoreIoError, UnknownLabel
from app.schemas.corpus import CarRecord, Document, RawDocument
from app.services.corpus.document import tokenize
from app.utils.files import write_frame

logger = logging.getLogger(__name__)

T = TypeVar("T")

DEFAULT_ROWS = 1500

# Per-class sampling distributions used by the generator.
# Categorical levels are listed most expensive / least safe first.
BUYING_LEVELS = ("vhigh", "high", "med", "low")
SAFETY_LEVELS = ("low", "med", "high")
CLASS_PROFILES = {
    "unacceptable": {
        "weight": 0.5,
        "buying": (0.40, 0.35, 0.15, 0.10),
        "maintenance": (0.40, 0.30, 0.20, 0.10),
        "safety": (0.60, 0.30, 0.10),
        "price": (30.0, 6.0),
        "mileage": (12.0, 3.0),
    },
    "good": {
        "weight": 0.3,
        "buying": (0.15, 0.30, 0.35, 0.20),
        "maintenance": (0.15, 0.30, 0.35, 0.20),
        "safety": (0.20, 0.45, 0.35),
        "price": (20.0, 5.0),
        "mileage": (17.0, 3.0),
    },
    "very good": {
        "weight": 0.2,
        "buying": (0.05, 0.15, 0.35, 0.45),
        "maintenance": (0.05, 0.15, 0.35, 0.45),
        "safety": (0.05, 0.25, 0.70),
        "price": (12.0, 4.0),
        "mileage": (22.0, 3.0),
    },
}


def _parse_number(value: str, column: str, line: int) -> float:
    try:
        number = float(value)
    except ValueError:
        raise ParseError(f"{column} is not a number: {value!r}", line) from None
    if not math.isfinite(number):
        raise ParseError(f"{column} must be finite, got {value!r}", line)
    return number


def load_car_dataset(
    path: str | Path,
    classes: Iterable[str] = PREDEFINED_CLASSES,
    strict: bool = True,
) -> List[CarRecord]:
    """Parse the comma-separated car dataset (header line required)"""
    path = Path(path)
    known = frozenset(c.lower() for c in classes)

    try:
        handle = path.open("r", encoding="utf-8", newline="")
    except OSError as e:
        raise StoreIoError(f"cannot read dataset {path}: {e}") from e

    records: List[CarRecord] = []
    with handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            raise ParseError("missing header line", 1)
        if tuple(h.strip().lower() for h in header) != DATASET_HEADER:
            raise ParseError(f"expected header {','.join(DATASET_HEADER)}", 1)

        for fields in reader:
            line = reader.line_num
            if not fields or not any(f.strip() for f in fields):
                continue
            if len(fields) != len(DATASET_HEADER):
                raise ParseError(
                    f"expected {len(DATASET_HEADER)} fields, got {len(fields)}", line)

            buying, maintenance, price, mileage, safety, label = (f.strip() for f in fields)
            label = label.lower()
            if strict and label not in known:
                raise UnknownLabel(f"line {line}: unknown label {label!r}")

            records.append(CarRecord(
                buying=buying.lower(),
                maintenance=maintenance.lower(),
                price=_parse_number(price, "price", line),
                mileage=_parse_number(mileage, "mileage", line),
                safety=safety.lower(),
                label=label,
                row=len(records) + 1,
            ))

    logger.info("Loaded %d records from %s", len(records), path)
    return records


def _format_number(value: float) -> str:
    return f"{value:g}"


def render_record(rec: CarRecord, doc_id: Optional[str] = None) -> Document:
    """Render a record as "buying <v> maintenance <v> ..." text and tokenize it"""
    body = " ".join(
        f"{name} {_format_number(value) if isinstance(value, float) else value}"
        for name, value in ((name, getattr(rec, name)) for name in CAR_ATTRIBUTES)
    )
    raw = RawDocument(source_name=doc_id or f"car-{rec.row:05d}", body=body)
    attributes = {name: getattr(rec, name) for name in CAR_ATTRIBUTES}
    return tokenize(raw, label=rec.label, attributes=attributes)


def split_dataset(records: Sequence[T], seed: int) -> Tuple[List[T], List[T]]:
    """Seeded shuffle, then the first ceil(n/2) items train and the rest test"""
    if not records:
        raise NoDocuments("cannot split an empty dataset")

    order = np.random.default_rng(seed).permutation(len(records))
    cut = math.ceil(len(records) / 2)
    train = [records[i] for i in order[:cut]]
    test = [records[i] for i in order[cut:]]
    return train, test


def generate_car_records(seed: int, rows: int = DEFAULT_ROWS) -> List[CarRecord]:
    """Sample records from fixed per-class distributions"""
    if rows < 1:
        raise ValueError(f"rows must be >= 1, got {rows}")

    rng = np.random.default_rng(seed)
    names = list(CLASS_PROFILES)
    weights = np.array([CLASS_PROFILES[n]["weight"] for n in names])
    labels = rng.choice(len(names), size=rows, p=weights / weights.sum())

    records = []
    for i, k in enumerate(labels, start=1):
        profile = CLASS_PROFILES[names[k]]
        price_mu, price_sd = profile["price"]
        mileage_mu, mileage_sd = profile["mileage"]
        records.append(CarRecord(
            buying=BUYING_LEVELS[rng.choice(4, p=profile["buying"])],
            maintenance=BUYING_LEVELS[rng.choice(4, p=profile["maintenance"])],
            price=round(max(1.0, rng.normal(price_mu, price_sd)), 1),
            mileage=round(max(1.0, rng.normal(mileage_mu, mileage_sd)), 1),
            safety=SAFETY_LEVELS[rng.choice(3, p=profile["safety"])],
            label=names[k],
            row=i,
        ))
    return records


def write_car_dataset(records: Sequence[CarRecord], path: str | Path) -> Path:
    """Write records as CSV with the canonical header and LF line endings"""
    frame = pd.DataFrame(
        [[getattr(r, name) for name in CAR_ATTRIBUTES] + [r.label] for r in records],
        columns=list(DATASET_HEADER),
    )
    return write_frame(frame, path, float_format="%.1f")
