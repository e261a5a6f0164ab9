"""Validity verdicts: grammar + valence model.

An atom passes when its bond order sum (aromatic bonds count 1) plus its
hydrogen count hits an allowed valence for its element and charge; aromatic
atoms may also land one below an allowed valence, which accounts for the
bond they contribute to the aromatic system. Elements missing from the
valence table are not checked.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import SmilesError, UnclosedRing
from .elements import allowed_valences
from .graph import MolGraph
from .parser import parse


@dataclass(frozen=True)
class ValidityVerdict:
    valid: bool
    reason: str | None = None  # grammar | ring_closure | valence

    def __post_init__(self):
        if self.valid and self.reason is not None:
            raise ValueError("valid verdicts carry no reason")


def check_valence(graph: MolGraph) -> ValidityVerdict:
    for idx, atom in enumerate(graph.atoms):
        allowed = allowed_valences(atom.element, atom.charge)
        if allowed is None:
            continue
        total = graph.bond_order_sum(idx) + atom.hydrogens
        if total in allowed:
            continue
        if atom.aromatic and total + 1 in allowed:
            continue
        return ValidityVerdict(False, "valence")
    return ValidityVerdict(True)


def is_valid(smiles: str) -> ValidityVerdict:
    """Grammar plus valence check; never raises for bad input."""
    try:
        graph = parse(smiles)
    except UnclosedRing:
        return ValidityVerdict(False, "ring_closure")
    except SmilesError:
        return ValidityVerdict(False, "grammar")
    return check_valence(graph)
