"""Structural key fingerprint (166 bits).

The table is a versioned data file of small substructure patterns and
count/ring predicates; the version string travels with every fingerprint
and metric report so scores are only ever compared within one table.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from ..errors import InvalidGraph
from ..smiles.graph import MolGraph
from ..smiles.parser import parse
from ..smiles.valence import check_valence
from .base import Fingerprint
from .subgraph import has_subgraph

KEY_COUNT = 166
_HALOGENS = ("F", "Cl", "Br", "I")
_COMMON = frozenset(["H", "B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"])


@dataclass(frozen=True)
class StructuralKey:
    index: int
    name: str
    kind: str
    spec: dict
    pattern: MolGraph | None = None

    def matches(self, graph: MolGraph) -> bool:
        kind = self.kind
        spec = self.spec
        if kind == "pattern":
            return has_subgraph(self.pattern, graph)
        if kind == "element_count":
            wanted = spec["element"]
            count = sum(1 for a in graph.atoms if a.element == wanted)
            return count >= spec.get("min", 1)
        if kind == "halogen_count":
            count = sum(1 for a in graph.atoms if a.element in _HALOGENS)
            return count >= spec.get("min", 1)
        if kind == "heavy_atoms":
            count = sum(1 for a in graph.atoms if a.element != "H")
            return count >= spec["min"]
        if kind == "ring_size":
            return spec["size"] in graph.ring_sizes
        if kind == "ring_count":
            return graph.ring_count() >= spec.get("min", 1)
        if kind == "aromatic_atoms":
            return sum(1 for a in graph.atoms if a.aromatic) >= spec.get("min", 1)
        if kind == "hetero_ring":
            return any(
                flag and graph.atoms[i].element != "C"
                for i, flag in enumerate(graph.ring_atom_flags)
            )
        if kind == "charge":
            sign = spec.get("sign", "any")
            has_pos = any(a.charge > 0 for a in graph.atoms)
            has_neg = any(a.charge < 0 for a in graph.atoms)
            if sign == "positive":
                return has_pos
            if sign == "negative":
                return has_neg
            if sign == "both":
                return has_pos and has_neg
            return has_pos or has_neg
        if kind == "isotope":
            return any(a.isotope is not None for a in graph.atoms)
        if kind == "bond_order":
            order = spec["order"]
            count = sum(1 for b in graph.bonds if b.order == order)
            return count >= spec.get("min", 1)
        if kind == "degree":
            wanted = spec.get("element")
            for i, atom in enumerate(graph.atoms):
                if wanted is not None and atom.element != wanted:
                    continue
                if graph.degree(i) >= spec["min"]:
                    return True
            return False
        if kind == "h_count":
            wanted = spec.get("element")
            for atom in graph.atoms:
                if wanted is not None and atom.element != wanted:
                    continue
                if atom.hydrogens >= spec["min"]:
                    return True
            return False
        raise ValueError(f"unknown key kind {kind!r}")


@dataclass(frozen=True)
class StructuralKeyTable:
    version: str
    keys: tuple[StructuralKey, ...]

    def __post_init__(self):
        if len(self.keys) != KEY_COUNT:
            raise ValueError(f"key table must have {KEY_COUNT} entries, got {len(self.keys)}")


_DEFAULT_TABLE: StructuralKeyTable | None = None


def load_table(raw: dict) -> StructuralKeyTable:
    keys = []
    for index, entry in enumerate(raw["keys"]):
        entry = dict(entry)
        kind = entry.pop("kind")
        name = entry.pop("name")
        pattern = None
        if kind == "pattern":
            pattern = parse(entry["smiles"])
        keys.append(StructuralKey(index, name, kind, entry, pattern))
    return StructuralKeyTable(raw["version"], tuple(keys))


def default_table() -> StructuralKeyTable:
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        data = resources.files("moltext.fingerprints").joinpath("data/keys_v1.json")
        _DEFAULT_TABLE = load_table(json.loads(data.read_text(encoding="utf-8")))
    return _DEFAULT_TABLE


def keys_fp(graph: MolGraph, table: StructuralKeyTable | None = None) -> Fingerprint:
    if not check_valence(graph).valid:
        raise InvalidGraph("refusing to fingerprint an invalid graph")
    if table is None:
        table = default_table()
    acc = 0
    for key in table.keys:
        if key.matches(graph):
            acc |= 1 << key.index
    return Fingerprint("keys", KEY_COUNT, acc, ("table", table.version))
