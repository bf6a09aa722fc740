"""Finite group amalgamation, quantifier-free types and scheme constructions."""

from .group import FiniteGroup, Embedding, Subgroup, validate_table
from .amalgam import Budget, stable_amalgam
from .qf_types import QfType, tp_bs, does_not_split

__all__ = ["FiniteGroup", "Embedding", "Subgroup", "validate_table", "Budget", "stable_amalgam", "QfType",
           "tp_bs", "does_not_split"]
__version__ = "0.1.0"
