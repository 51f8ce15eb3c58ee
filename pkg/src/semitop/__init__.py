"""Three-valued modal logic over finite semitopologies, with protocol theories,
a model checker and a byzantine protocol simulator."""
from .kernel3 import B, F, T, BinaryConn, TruthValue, UnaryConn, apply_binary, apply_unary
from .semitopo import Semitopology, SpatialModality, eval_modality, from_threshold, is_n_twined
from .grammar import ParseError, parse, to_text
from .semantics import EvaluationError, Model, denote, denote_all, holds_at, is_valid_in_model
from .theories import Theory, derived_lemmas, properties, theory
from .checker import Report, SearchConfig, check_model, check_properties, check_theory, search_counterexample
from .simulator import RunConfig, extract_model, run, run_and_check

__all__ = [
    "B", "F", "T", "BinaryConn", "TruthValue", "UnaryConn", "apply_binary", "apply_unary",
    "Semitopology", "SpatialModality", "eval_modality", "from_threshold", "is_n_twined",
    "ParseError", "parse", "to_text",
    "EvaluationError", "Model", "denote", "denote_all", "holds_at", "is_valid_in_model",
    "Theory", "derived_lemmas", "properties", "theory",
    "Report", "SearchConfig", "check_model", "check_properties", "check_theory", "search_counterexample",
    "RunConfig", "extract_model", "run", "run_and_check",
]
