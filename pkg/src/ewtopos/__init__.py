"""Executable realizability: a symbolic PCA, partitioned assemblies,
instance reducibility and its existential completion, extended Weihrauch
predicates, and the topos built from them, all checked by fuel-bounded
reduction of explicit witness terms."""

from .assemblies import Morphism, PartitionedAssembly, Pool
from .instance import BasePredicate, IRPredicate, IRWitness, iR_leq, leq_eiR, search_iR
from .pca import STANDARD, Outcome, Pca, apply, reduce
from .syntax import ParseError, parse_term, term
from .terms import App, K, S
from .verdict import Verdict, fails, holds, unknown
from .weihrauch import EWPredicate, EWWitness, leq_extW, search_extW, to_eW, to_iR
from .workspace import Workspace, parse_workspace, parse_workspace_text

__all__ = [
    "App", "BasePredicate", "EWPredicate", "EWWitness", "IRPredicate", "IRWitness", "K",
    "Morphism", "Outcome", "ParseError", "PartitionedAssembly", "Pca", "Pool", "S", "STANDARD",
    "Verdict", "Workspace", "apply", "fails", "holds", "iR_leq", "leq_eiR", "leq_extW",
    "parse_term", "parse_workspace", "parse_workspace_text", "reduce", "search_extW", "search_iR",
    "term", "to_eW", "to_iR", "unknown",
]

__version__ = "0.1.0"
