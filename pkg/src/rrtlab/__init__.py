"""Random recursive graph growth (uniform and preferential attachment), exact
subgraph and pendant probabilities, FO/MSO model checking and Monte Carlo
experiments."""
from .errors import BudgetExceeded, DomainError, NotATree
from .graphcore import LabeledGraph, RootedPattern, RootedTree, canonical_code, make_pattern, rooted_isomorphic
from .treegen import GrowthConfig, generate, generate_pa, generate_ua

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "DomainError", "NotATree", "LabeledGraph", "RootedPattern",
    "RootedTree", "canonical_code", "make_pattern", "rooted_isomorphic",
    "GrowthConfig", "generate", "generate_pa", "generate_ua",
]
