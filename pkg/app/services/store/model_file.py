r"""
Canonical text format for trained models

    ssemc-model v1
    alpha <hex>
    classes <K>
    <class>\t<hex log prior>\t<hex class weight>        (K lines)
    vocabulary <V>
    <word>                                           (V lines)
    conditional <class>                              (K blocks)
    <word>\t<hex log conditional>\t<hex word weight>   (V lines each)
    attributes <A>
    <attribute>\t<hex mean>\t<hex std>                 (A lines)

Floats are written with float.hex() so a save/load cycle is lossless.
"""
from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Iterator, List, Tuple

import numpy as np
from pydantic import ValidationError

from app.constants import MODEL_FORMAT_NAME, MODEL_FORMAT_VERSION
from app.exceptions import CorruptModel, StoreIoError
from app.schemas.corpus import Vocabulary
from app.schemas.model import GenerativeModel
from app.utils.files import atomic_write_text

logger = logging.getLogger(__name__)

HEADER = f"{MODEL_FORMAT_NAME} {MODEL_FORMAT_VERSION}"


def _check_name(name: str) -> str:
    if not name or "\t" in name or "\n" in name or "\r" in name:
        raise ValueError(f"name cannot be stored in a model file: {name!r}")
    return name


def dumps_model(model: GenerativeModel) -> str:
    lines: List[str] = [HEADER, f"alpha {float(model.smoothing_alpha).hex()}"]

    lines.append(f"classes {len(model.classes)}")
    for name, log_prior, weight in zip(model.classes, model.log_priors, model.class_weights):
        lines.append(f"{_check_name(name)}\t{float(log_prior).hex()}\t{float(weight).hex()}")

    lines.append(f"vocabulary {len(model.vocab)}")
    lines.extend(model.vocab.words)

    for k, name in enumerate(model.classes):
        lines.append(f"conditional {name}")
        for word, log_cond, weight in zip(
            model.vocab.words, model.log_conditionals[k], model.word_weights[k]
        ):
            lines.append(f"{word}\t{float(log_cond).hex()}\t{float(weight).hex()}")

    lines.append(f"attributes {len(model.attribute_stats)}")
    for name, (mean, std) in sorted(model.attribute_stats.items()):
        lines.append(f"{_check_name(name)}\t{float(mean).hex()}\t{float(std).hex()}")

    return "\n".join(lines) + "\n"


class _LineReader:
    """Numbered line cursor producing CorruptModel diagnostics"""

    def __init__(self, text: str):
        self._lines: Iterator[Tuple[int, str]] = enumerate(text.split("\n"), start=1)
        self.line = 0

    def next(self) -> str:
        for self.line, content in self._lines:
            return content
        raise CorruptModel("unexpected end of file", self.line + 1)

    def remaining(self) -> Iterator[Tuple[int, str]]:
        yield from self._lines

    def fail(self, message: str) -> CorruptModel:
        return CorruptModel(message, self.line)

    def keyword(self, keyword: str) -> str:
        content = self.next()
        head, _, rest = content.partition(" ")
        if head != keyword or not rest:
            raise self.fail(f"expected '{keyword} <value>', got {content!r}")
        return rest

    def count(self, keyword: str) -> int:
        value = self.keyword(keyword)
        if not value.isdigit():
            raise self.fail(f"{keyword} count must be a non-negative integer, got {value!r}")
        return int(value)

    def hex_float(self, value: str) -> float:
        try:
            number = float.fromhex(value)
        except ValueError:
            raise self.fail(f"not a hexadecimal float: {value!r}") from None
        if not math.isfinite(number):
            raise self.fail(f"non-finite value {value!r}")
        return number

    def fields(self, expected: int) -> List[str]:
        parts = self.next().split("\t")
        if len(parts) != expected:
            raise self.fail(f"expected {expected} tab-separated fields, got {len(parts)}")
        return parts


def loads_model(text: str) -> GenerativeModel:
    reader = _LineReader(text)

    header = reader.next()
    if header != HEADER:
        raise reader.fail(f"unsupported model format {header!r}, expected {HEADER!r}")

    alpha = reader.hex_float(reader.keyword("alpha"))

    classes, log_priors, class_weights = [], [], []
    for _ in range(reader.count("classes")):
        name, log_prior, weight = reader.fields(3)
        classes.append(name)
        log_priors.append(reader.hex_float(log_prior))
        class_weights.append(reader.hex_float(weight))

    words = [reader.next() for _ in range(reader.count("vocabulary"))]
    try:
        vocab = Vocabulary(words=tuple(words), index={w: i for i, w in enumerate(words)})
    except ValidationError as e:
        raise reader.fail(f"invalid vocabulary block: {e.errors()[0]['msg']}") from None

    log_conditionals = np.zeros((len(classes), len(words)))
    word_weights = np.zeros((len(classes), len(words)))
    for k, name in enumerate(classes):
        block = reader.keyword("conditional")
        if block != name:
            raise reader.fail(f"expected conditional block for {name!r}, got {block!r}")
        for j, expected_word in enumerate(words):
            word, log_cond, weight = reader.fields(3)
            if word != expected_word:
                raise reader.fail(f"expected word {expected_word!r}, got {word!r}")
            log_conditionals[k, j] = reader.hex_float(log_cond)
            word_weights[k, j] = reader.hex_float(weight)

    attribute_stats = {}
    for _ in range(reader.count("attributes")):
        name, mean, std = reader.fields(3)
        attribute_stats[name] = (reader.hex_float(mean), reader.hex_float(std))

    for number, trailing in reader.remaining():
        if trailing.strip():
            raise CorruptModel(f"unexpected trailing content {trailing!r}", number)

    for array in (log_conditionals, word_weights):
        array.setflags(write=False)
    model = GenerativeModel(
        classes=tuple(classes),
        log_priors=np.array(log_priors),
        log_conditionals=log_conditionals,
        vocab=vocab,
        smoothing_alpha=alpha,
        attribute_stats=attribute_stats,
        class_weights=np.array(class_weights),
        word_weights=word_weights,
    )

    errors = model.normalization_errors()
    if errors:
        raise CorruptModel("; ".join(errors))
    return model


def save_model(model: GenerativeModel, path: str | Path) -> Path:
    """Write the model in the canonical text format"""
    path = atomic_write_text(path, dumps_model(model))
    logger.info("Saved model (%d classes, %d words) to %s", len(model.classes), len(model.vocab), path)
    return path


def load_model(path: str | Path) -> GenerativeModel:
    """Read a model file and re-verify its normalization invariants"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise StoreIoError(f"cannot read model {path}: {e}") from e
    return loads_model(text)
