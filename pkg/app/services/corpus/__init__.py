"""Document ingestion, tokenization, vocabulary and the car dataset"""

from .document import (
    domain_check,
    load_documents,
    load_stopwords,
    parse_attributes,
    read_document,
    tokenize,
    validate_document,
)
from .vocabulary import build_vocabulary, build_word_sets, match_word_sets, vectorize
from .dataset import (
    generate_car_records,
    load_car_dataset,
    render_record,
    split_dataset,
    write_car_dataset,
)

__all__ = [
    'validate_document', 'tokenize', 'load_stopwords', 'read_document', 'load_documents',
    'parse_attributes', 'domain_check',
    'build_vocabulary', 'vectorize', 'build_word_sets', 'match_word_sets',
    'load_car_dataset', 'render_record', 'split_dataset',
    'generate_car_records', 'write_car_dataset',
]
