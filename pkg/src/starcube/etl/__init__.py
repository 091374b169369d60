"""Extract, transform (clean), and load into the warehouse."""

from .extract import SourceDef, Row, Quarantine, QuarantineRecord, extract
from .fuzzy import fuzzy_match, levenshtein, normalize, similarity
from .transforms import (RenameColumns, ConvertTypes, FuzzyLookup,
                         DeriveColumn, SortDedupe, apply_transforms,
                         validate_chain)
from .load import load_dimension, load_fact, ensure_date_dimension
from .pipeline import (PipelineConfig, LoadDef, PipelineReport,
                       load_pipeline, pipeline_from_dict, run_pipeline,
                       validate_pipeline)
from .synth import generate_synthetic

__all__ = [
    "SourceDef", "Row", "Quarantine", "QuarantineRecord", "extract",
    "fuzzy_match", "levenshtein", "normalize", "similarity",
    "RenameColumns", "ConvertTypes", "FuzzyLookup", "DeriveColumn",
    "SortDedupe", "apply_transforms", "validate_chain",
    "load_dimension", "load_fact", "ensure_date_dimension",
    "PipelineConfig", "LoadDef", "PipelineReport", "load_pipeline",
    "pipeline_from_dict", "run_pipeline", "validate_pipeline",
    "generate_synthetic",
]
