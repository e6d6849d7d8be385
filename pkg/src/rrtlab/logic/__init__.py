from .builders import build_at_least_diamonds, build_complete, build_disconnected
from .evaluate import DEFAULT_MAX_ASSIGNMENTS, estimate_cost, evaluate, miniscope
from .syntax import (
    Adj,
    And,
    Const,
    Eq,
    Exists,
    ExistsSet,
    Forall,
    ForallSet,
    Formula,
    Iff,
    Implies,
    LogicSyntaxError,
    Mem,
    Not,
    Or,
    Sentence,
    parse_sentence,
    to_text,
)

__all__ = [
    "Adj", "And", "Const", "Eq", "Exists", "ExistsSet", "Forall", "ForallSet",
    "Formula", "Iff", "Implies", "LogicSyntaxError", "Mem", "Not", "Or", "Sentence",
    "DEFAULT_MAX_ASSIGNMENTS", "build_at_least_diamonds", "build_complete",
    "build_disconnected", "estimate_cost", "evaluate", "miniscope",
    "parse_sentence", "to_text",
]
