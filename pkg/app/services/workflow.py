"""End-to-end runs behind the command line: prepare, train, classify, evaluate, compare"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import FrozenSet, List, Optional, Sequence, Tuple

from app.config import Settings
from app.constants import CAR_ATTRIBUTES, NUMERIC_ATTRIBUTES, PREDEFINED_CLASSES
from app.exceptions import InsufficientData, OutOfDomain
from app.schemas.corpus import Document, Vocabulary, WordSetMatch
from app.schemas.em import EmTrace, TraceEntry
from app.schemas.metrics import ComparisonTable, MetricsReport
from app.schemas.model import GenerativeModel
from app.schemas.novelty import NoveltyDecision
from app.services.corpus import (
    build_vocabulary,
    build_word_sets,
    domain_check,
    load_car_dataset,
    load_documents,
    load_stopwords,
    match_word_sets,
    render_record,
    split_dataset,
)
from app.services.em import em_fit, weighted_objective
from app.services.metrics import compare_runs, evaluate
from app.services.model import train_supervised
from app.services.novelty import detect_novel, ranges_from_model, spawn_class
from app.services.store import RegistryStore, load_model, save_model
from app.utils.files import write_frame

logger = logging.getLogger(__name__)

DEFAULT_SIZES = (10, 25, 50, 75)


@dataclass(frozen=True)
class PreparedData:
    """Train half (gold labels kept), test half and the train vocabulary"""
    classes: Tuple[str, ...]
    train: List[Document]
    test: List[Document]
    vocab: Vocabulary
    labeled_size: int

    @property
    def labeled(self) -> List[Document]:
        return self.train[:self.labeled_size]

    @property
    def unlabeled(self) -> List[Document]:
        return [doc.without_label() for doc in self.train[self.labeled_size:]]


@dataclass(frozen=True)
class ClassifyOutcome:
    doc_id: str
    decision: NoveltyDecision
    spawned_class: Optional[str] = None
    matches: Tuple[WordSetMatch, ...] = ()

    @property
    def class_name(self) -> Optional[str]:
        return self.spawned_class or self.decision.class_name

    def report_line(self) -> str:
        verdict = self.decision.verdict.capitalize()
        return f"{self.doc_id} {verdict} {self.class_name or '-'} p={self.decision.max_posterior:.6f}"


def require_file(path: Path, what: str) -> Path:
    """Raise FileNotFoundError naming the path when it is not a regular file"""
    if not path.is_file():
        raise FileNotFoundError(f"{what} not found: {path}")
    return path


def prepare(settings: Settings) -> PreparedData:
    """
    Load the dataset, split it 50/50 with the configured seed and hide the
    labels of every train record beyond the first labeled_size.
    """
    require_file(settings.dataset_path, "dataset")
    registry = RegistryStore(settings.registry_path).load()
    classes = tuple(dict.fromkeys([*PREDEFINED_CLASSES, *registry.names]))

    records = load_car_dataset(settings.dataset_path, classes, strict=settings.strict_labels)
    train_records, test_records = split_dataset(records, settings.seed)
    if settings.labeled_size > len(train_records):
        raise InsufficientData(
            f"labeled_size {settings.labeled_size} exceeds the "
            f"{len(train_records)} training records")

    train = [render_record(rec) for rec in train_records]
    test = [render_record(rec) for rec in test_records]

    logger.info(
        "Prepared %d labeled, %d unlabeled and %d test documents",
        settings.labeled_size, len(train) - settings.labeled_size, len(test))
    return PreparedData(
        classes=tuple(sorted({rec.label for rec in records})),
        train=train,
        test=test,
        vocab=build_vocabulary(train),
        labeled_size=settings.labeled_size,
    )


def model_lexicon(model: GenerativeModel) -> FrozenSet[str]:
    """Attribute names plus the non-numeric words the model was trained on"""
    return frozenset(CAR_ATTRIBUTES) | frozenset(
        word for word in model.vocab.words if not word.isdigit())


def train(settings: Settings, supervised_only: bool = False) -> Tuple[GenerativeModel, EmTrace]:
    """Fit the model, then write model, registry and trace into output_dir"""
    data = prepare(settings)
    config = settings.em_config

    if supervised_only:
        model = train_supervised(data.labeled, data.vocab, config.alpha, classes=data.classes)
        objective = weighted_objective(model, data.labeled, data.unlabeled, 0.0)
        trace = EmTrace(per_iteration=[
            TraceEntry(iteration=0, objective=objective, max_resp_change=0.0)])
    else:
        model, trace = em_fit(data.labeled, data.unlabeled, data.vocab, config, data.classes)

    save_model(model, settings.model_path)
    store = RegistryStore(settings.registry_path)
    if not store.path.exists():
        store.save(store.load())
    write_frame(trace.to_frame(), settings.trace_path, float_format="%.17g")
    logger.info("Saved model to %s", settings.model_path)
    return model, trace


def classify_many(
    settings: Settings,
    doc_paths: Sequence[Path],
    model_path: Optional[Path] = None,
    spawn: bool = False,
    verbose: bool = False,
) -> List[ClassifyOutcome]:
    """
    Format check, domain check, then classification; a Novel document
    optionally becomes the seed of a new class.

    Documents are read on settings.workers threads and reported in path
    order. Every document passes the format and domain checks before any
    of them is classified, so a rejected batch spawns nothing.
    """
    model_path = require_file(model_path or settings.model_path, "model file")
    paths = [require_file(Path(p), "document") for p in doc_paths]
    if not paths:
        raise InsufficientData("no documents to classify")

    model = load_model(model_path)
    docs = load_documents(
        paths,
        load_stopwords(settings.stopword_path),
        settings.workers,
        attribute_names=NUMERIC_ATTRIBUTES,
    )
    lexicon = model_lexicon(model)
    for doc in docs:
        if not domain_check(doc, lexicon, settings.min_domain_hits):
            raise OutOfDomain(f"{doc.id}: document does not lie in the car domain")

    ranges = ranges_from_model(model, settings.zscore_k)
    decisions = [detect_novel(model, doc, settings.novelty_threshold, ranges) for doc in docs]

    word_sets = None
    if verbose:
        data = prepare(settings)
        word_sets = build_word_sets(data.labeled, model.vocab, model)

    store = RegistryStore(settings.registry_path)
    outcomes = []
    for doc, decision in zip(docs, decisions):
        matches = tuple(match_word_sets(doc, word_sets)) if word_sets is not None else ()
        spawned = None
        if decision.is_novel and spawn:
            model, spawned = spawn_class(model, [doc], store.load(), store, model_path=model_path)
        outcomes.append(ClassifyOutcome(
            doc_id=doc.id, decision=decision, spawned_class=spawned, matches=matches))
    return outcomes


def evaluate_model(settings: Settings, model_path: Optional[Path] = None) -> MetricsReport:
    """Score the saved model on the test half and write the metrics CSV"""
    model_path = require_file(model_path or settings.model_path, "model file")
    model = load_model(model_path)
    data = prepare(settings)

    result = evaluate(model, data.test)
    write_frame(result.to_frame(), settings.metrics_path, float_format="%.10g")
    return result


def compare(settings: Settings, sizes: Sequence[int] = DEFAULT_SIZES) -> ComparisonTable:
    """
    Supervised vs semi-supervised sweep: the first max(sizes) train documents
    form the labeled pool, the rest of the train half is unlabeled.
    """
    if not sizes:
        raise InsufficientData("no labeled-set sizes requested")

    data = prepare(settings)
    cap = max(sizes)
    if cap > len(data.train):
        raise InsufficientData(
            f"size {cap} exceeds the {len(data.train)} training documents")

    pool = data.train[:cap]
    unlabeled = [doc.without_label() for doc in data.train[cap:]]
    table = compare_runs(pool, unlabeled, data.test, sizes, settings.em_config)
    write_frame(table.to_frame(), settings.comparison_path, float_format="%.10g")
    return table
