"""SMILES parsing, validity, and canonicalization."""

from .canonical import canonicalize, canonicalize_smiles, exact_match
from .graph import AROMATIC_BOND, Atom, Bond, MolGraph
from .parser import parse
from .valence import ValidityVerdict, check_valence, is_valid

__all__ = [
    "AROMATIC_BOND",
    "Atom",
    "Bond",
    "MolGraph",
    "ValidityVerdict",
    "canonicalize",
    "canonicalize_smiles",
    "check_valence",
    "exact_match",
    "is_valid",
    "parse",
]
