"""Fingerprint families and Tanimoto similarity."""

from .base import Fingerprint, tanimoto
from .keys import StructuralKey, StructuralKeyTable, default_table, keys_fp, load_table
from .morgan import morgan_fp
from .pathfp import path_fp
from .subgraph import has_subgraph

__all__ = [
    "Fingerprint",
    "StructuralKey",
    "StructuralKeyTable",
    "default_table",
    "has_subgraph",
    "keys_fp",
    "load_table",
    "morgan_fp",
    "path_fp",
    "tanimoto",
]
