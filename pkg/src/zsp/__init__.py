"""Zero-shot PLOVER relation classification via entailment tree queries."""

from .engine import (
    Candidate,
    ClassifierConfig,
    EventInstance,
    Mode,
    Override,
    Prediction,
    classify,
    flat_classify,
)
from .evaluation import Dataset, EvalReport, evaluate, load_dataset, run_ablation
from .hypotheses import (
    HypothesisEntry,
    HypothesisTable,
    default_table,
    instantiate,
    load_table,
    tiny_table,
)
from .ontology import (
    BinaryClass,
    Modality,
    Quadcode,
    Rootcode,
    cameo_to_plover,
    modality_map,
    normalize_alias,
    quad_to_binary,
    root_base_quad,
)
from .scorer import CachedScorer, OracleScorer, RemoteScorer, ScoreRequest, cached

__version__ = "0.1.0"

__all__ = [
    "BinaryClass",
    "CachedScorer",
    "Candidate",
    "ClassifierConfig",
    "Dataset",
    "EvalReport",
    "EventInstance",
    "HypothesisEntry",
    "HypothesisTable",
    "Modality",
    "Mode",
    "OracleScorer",
    "Override",
    "Prediction",
    "Quadcode",
    "RemoteScorer",
    "Rootcode",
    "ScoreRequest",
    "cached",
    "cameo_to_plover",
    "classify",
    "default_table",
    "evaluate",
    "flat_classify",
    "instantiate",
    "load_dataset",
    "load_table",
    "modality_map",
    "normalize_alias",
    "quad_to_binary",
    "root_base_quad",
    "run_ablation",
    "tiny_table",
]
