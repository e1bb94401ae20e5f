DOCUMENT_EXTENSIONS = {
    ".txt",
}

# Car evaluation dataset columns, in file order
CAR_ATTRIBUTES = (
    "buying",
    "maintenance",
    "price",
    "mileage",
    "safety",
)
CATEGORICAL_ATTRIBUTES = ("buying", "maintenance", "safety")
NUMERIC_ATTRIBUTES = ("price", "mileage")
LABEL_COLUMN = "class"
DATASET_HEADER = (*CAR_ATTRIBUTES, LABEL_COLUMN)

PREDEFINED_CLASSES = ("unacceptable", "good", "very good")
SPAWNED_CLASS_PREFIX = "novel-"

MODEL_FORMAT_NAME = "ssemc-model"
MODEL_FORMAT_VERSION = "v1"

# Absolute slack allowed on EM objective steps (float noise, not data)
MONOTONE_SLACK = 1e-9
NORMALIZATION_TOLERANCE = 1e-12

# CLI exit codes
EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_INVALID_FORMAT = 3
EXIT_OUT_OF_DOMAIN = 4
