"""Deterministic synthetic corpus generation.

Molecules are random valence-satisfying graphs (chains plus occasional
rings, aromatic ring systems, charges, isotopes) rendered through the
canonical writer, so every generated SMILES is valid by construction.
Captions describe the molecule's actual composition through one of six
paraphrase templates with shared facts but different sentence structure
and vocabulary; the same template family feeds the mock rewriting
provider, which answers with a different paraphrase of the same facts.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

from .dataset import MoleculeRecord
from .hashing import stable_hash
from .smiles.canonical import canonicalize
from .smiles.graph import AROMATIC_BOND, Atom, Bond, MolGraph
from .smiles.valence import check_valence

_CHAIN_POOL = [
    ("C", 4, 66),
    ("N", 3, 10),
    ("O", 2, 12),
    ("S", 2, 4),
    ("F", 1, 3),
    ("Cl", 1, 3),
    ("Br", 1, 1),
    ("P", 3, 1),
]

# (elements, aromatic?, hydrogen per position, attachable flags)
_RING_TEMPLATES = {
    "benzene": (["C"] * 6, True, [1] * 6, [True] * 6),
    "pyridine": (["N", "C", "C", "C", "C", "C"], True, [0, 1, 1, 1, 1, 1],
                 [False, True, True, True, True, True]),
    "furan": (["O", "C", "C", "C", "C"], True, [0, 1, 1, 1, 1],
              [False, True, True, True, True]),
    "thiophene": (["S", "C", "C", "C", "C"], True, [0, 1, 1, 1, 1],
                  [False, True, True, True, True]),
    "pyrrole": (["N", "C", "C", "C", "C"], True, [1, 1, 1, 1, 1],
                [False, True, True, True, True]),
    "cyclopentane": (["C"] * 5, False, None, [True] * 5),
    "cyclohexane": (["C"] * 6, False, None, [True] * 6),
}


class _Builder:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.elements: list[str] = []
        self.aromatic: list[bool] = []
        self.charges: list[int] = []
        self.isotopes: list[int | None] = []
        self.fixed_h: list[int | None] = []
        self.rem: list[int] = []
        self.bonds: list[tuple[int, int, int]] = []

    def add_atom(self, element, capacity, aromatic=False, fixed_h=None) -> int:
        self.elements.append(element)
        self.aromatic.append(aromatic)
        self.charges.append(0)
        self.isotopes.append(None)
        self.fixed_h.append(fixed_h)
        self.rem.append(capacity)
        return len(self.elements) - 1

    def add_bond(self, a, b, order):
        value = 1 if order == AROMATIC_BOND else order
        self.bonds.append((a, b, order))
        self.rem[a] -= value
        self.rem[b] -= value

    def open_atoms(self, minimum=1):
        return [i for i, r in enumerate(self.rem) if r >= minimum]

    def finish(self) -> MolGraph:
        atoms = []
        for i, element in enumerate(self.elements):
            hydrogens = self.fixed_h[i] if self.fixed_h[i] is not None else max(self.rem[i], 0)
            atoms.append(
                Atom(
                    element=element,
                    isotope=self.isotopes[i],
                    charge=self.charges[i],
                    explicit_h=None,
                    aromatic=self.aromatic[i],
                    hydrogens=hydrogens,
                )
            )
        graph = MolGraph.build(atoms, [Bond(a, b, order) for a, b, order in self.bonds])
        verdict = check_valence(graph)
        if not verdict.valid:
            raise AssertionError("generator produced an invalid molecule")
        return graph


def _random_graph(rng: random.Random) -> MolGraph:
    builder = _Builder(rng)
    pool = [(el, val) for el, val, weight in _CHAIN_POOL for _ in range(weight)]

    n_chain = rng.randint(3, 14)
    first = rng.choice([("C", 4), ("C", 4), ("N", 3), ("O", 2)])
    builder.add_atom(*first)
    for _ in range(n_chain - 1):
        element, valence = rng.choice(pool)
        parents = builder.open_atoms()
        if not parents:
            break
        parent = rng.choice(parents)
        order = 1
        if valence >= 2 and builder.rem[parent] >= 2 and rng.random() < 0.18:
            order = 2
        if valence >= 3 and builder.rem[parent] >= 3 and rng.random() < 0.18:
            order = 3
        new = builder.add_atom(element, valence)
        builder.add_bond(parent, new, order)

    # close an aliphatic ring when a suitably distant pair exists
    if rng.random() < 0.4:
        _try_ring_closure(builder, rng)

    if rng.random() < 0.5:
        name = rng.choice(sorted(_RING_TEMPLATES))
        _attach_ring(builder, rng, name)

    if rng.random() < 0.1:
        oxygens = [
            i
            for i, el in enumerate(builder.elements)
            if el == "O" and not builder.aromatic[i] and builder.rem[i] >= 1
        ]
        if oxygens:
            target = rng.choice(oxygens)
            builder.charges[target] = -1
            builder.rem[target] -= 1
            sodium = builder.add_atom("Na", 0, fixed_h=0)
            builder.charges[sodium] = 1

    if rng.random() < 0.08:
        isotopes = {"C": 13, "N": 15, "O": 18}
        candidates = [
            i for i, el in enumerate(builder.elements) if el in isotopes and not builder.aromatic[i]
        ]
        if candidates:
            chosen = rng.choice(candidates)
            builder.isotopes[chosen] = isotopes[builder.elements[chosen]]

    return builder.finish()


def _try_ring_closure(builder: _Builder, rng: random.Random) -> None:
    adjacency: dict[int, set[int]] = {}
    for a, b, _ in builder.bonds:
        adjacency.setdefault(a, set()).add(b)
        adjacency.setdefault(b, set()).add(a)
    candidates = []
    open_atoms = builder.open_atoms()
    for u in open_atoms:
        dist = {u: 0}
        frontier = [u]
        while frontier:
            nxt = []
            for node in frontier:
                for nbr in adjacency.get(node, ()):
                    if nbr not in dist:
                        dist[nbr] = dist[node] + 1
                        nxt.append(nbr)
            frontier = nxt
        for v in open_atoms:
            if v > u and 2 <= dist.get(v, 0) <= 5:
                candidates.append((u, v))
    if candidates:
        u, v = rng.choice(candidates)
        builder.add_bond(u, v, 1)


def _attach_ring(builder: _Builder, rng: random.Random, name: str) -> None:
    elements, aromatic, hydrogens, attachable = _RING_TEMPLATES[name]
    size = len(elements)
    anchors = builder.open_atoms()
    start = len(builder.elements)
    for pos in range(size):
        if aromatic:
            builder.add_atom(elements[pos], 1 if attachable[pos] else 0,
                             aromatic=True, fixed_h=hydrogens[pos])
        else:
            builder.add_atom(elements[pos], 4)
    order = AROMATIC_BOND if aromatic else 1
    for pos in range(size):
        builder.add_bond(start + pos, start + (pos + 1) % size, order)
    if anchors:
        attach_positions = [pos for pos in range(size) if attachable[pos]]
        pos = rng.choice(attach_positions)
        anchor = rng.choice(anchors)
        if aromatic:
            builder.fixed_h[start + pos] = 0
        builder.add_bond(anchor, start + pos, 1)


# --- captions ---------------------------------------------------------------

_NUMBER_WORDS = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve",
]
_ELEMENT_NAMES = {
    "C": "carbon", "N": "nitrogen", "O": "oxygen", "S": "sulfur", "P": "phosphorus",
    "F": "fluorine", "Cl": "chlorine", "Br": "bromine", "I": "iodine", "Na": "sodium",
}
_RING_WORDS = {3: "three", 4: "four", 5: "five", 6: "six", 7: "seven", 8: "eight"}
_ROLES = [
    "a metabolite", "a laboratory reagent", "a synthetic intermediate",
    "a buffering agent", "an enzyme inhibitor", "a flavouring agent",
    "a chelating agent", "a polymer precursor",
]


@dataclass(frozen=True)
class MolFacts:
    composition: tuple[tuple[str, int], ...]
    ring_sizes: tuple[int, ...]
    aromatic: bool
    has_double: bool
    has_triple: bool
    negative: bool
    isotope: bool


def facts_from_graph(graph: MolGraph) -> MolFacts:
    counts: dict[str, int] = {}
    for atom in graph.atoms:
        counts[atom.element] = counts.get(atom.element, 0) + 1
    composition = tuple(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])))
    return MolFacts(
        composition=composition,
        ring_sizes=graph.ring_sizes,
        aromatic=any(a.aromatic for a in graph.atoms),
        has_double=any(b.order == 2 for b in graph.bonds),
        has_triple=any(b.order == 3 for b in graph.bonds),
        negative=any(a.charge < 0 for a in graph.atoms),
        isotope=any(a.isotope is not None for a in graph.atoms),
    )


def _count_phrase(count: int, element: str) -> str:
    number = _NUMBER_WORDS[count] if count < len(_NUMBER_WORDS) else str(count)
    name = _ELEMENT_NAMES.get(element, element.lower())
    return f"{number} {name} atom" + ("s" if count != 1 else "")


def _composition_phrase(facts: MolFacts) -> str:
    parts = [_count_phrase(c, el) for el, c in facts.composition]
    if len(parts) == 1:
        return parts[0]
    return ", ".join(parts[:-1]) + " and " + parts[-1]


def _ring_phrase(facts: MolFacts) -> str:
    if not facts.ring_sizes:
        return "no ring system"
    words = [f"a {_RING_WORDS.get(s, str(s))}-membered ring" for s in facts.ring_sizes]
    phrase = " and ".join(words)
    if facts.aromatic:
        phrase += " with aromatic character"
    return phrase


def _unsaturation_phrase(facts: MolFacts) -> str:
    if facts.has_triple:
        return "a carbon-carbon triple bond"
    if facts.has_double:
        return "at least one double bond"
    return "only single or aromatic bonds"


def _role(facts: MolFacts) -> str:
    return _ROLES[stable_hash("role", facts.composition) % len(_ROLES)]


def caption_variants(facts: MolFacts) -> list[str]:
    comp = _composition_phrase(facts)
    ring = _ring_phrase(facts)
    unsat = _unsaturation_phrase(facts)
    role = _role(facts)
    variants = [
        f"The molecule is an organic compound composed of {comp}. It contains {ring} and shows {unsat}. It has a role as {role}.",
        f"This compound is built from {comp}; its skeleton features {ring}. The bonding pattern shows {unsat}, and it acts as {role}.",
        f"A small molecule whose formula covers {comp}, featuring {ring} together with {unsat}. Chemists use it as {role}.",
        f"The structure combines {comp} in a single framework. Besides {ring}, the molecule displays {unsat} and serves as {role}.",
        f"Characterised by {comp}, the molecule carries {ring} along with {unsat}. In assays it behaves as {role}.",
        f"An entity containing {comp}. Its topology includes {ring}, the bonds exhibit {unsat}, and it functions as {role}.",
    ]
    if facts.negative:
        variants = [v + " It bears a negative charge balanced by a counterion." for v in variants]
    if facts.isotope:
        variants = [v + " One position carries an isotopic label." for v in variants]
    return variants


def make_record(index: int, seed: int) -> MoleculeRecord:
    rng = random.Random(stable_hash("sample", seed, index))
    graph = _random_graph(rng)
    smiles = canonicalize(graph)
    facts = facts_from_graph(graph)
    caption = caption_variants(facts)[rng.randrange(6)]
    return MoleculeRecord(f"M{index:05d}", smiles, caption)


def make_corpus(n: int, seed: int = 0) -> list[MoleculeRecord]:
    return [make_record(i, seed) for i in range(n)]


_SMILES_LINE_RE = re.compile(r"SMILES string of target molecule: (.+)\.$", re.M)


def rewrite_responder(corpus, salt: int = 0):
    """Mock-provider responder that replies with a different paraphrase of
    the record's caption (never containing the SMILES)."""
    from .smiles.parser import parse

    by_smiles = {record.smiles: record for record in corpus}

    def respond(body: dict) -> str:
        message = body["messages"][1]["content"]
        match = _SMILES_LINE_RE.search(message)
        if not match:
            raise ValueError("mock responder: no SMILES line in message")
        smiles = match.group(1)
        record = by_smiles[smiles]
        variants = caption_variants(facts_from_graph(parse(record.smiles)))
        try:
            current = variants.index(record.caption)
        except ValueError:
            current = 0
        round_idx = int(body.get("round", 1))
        choice = (current + round_idx + salt) % len(variants)
        if choice == current:
            choice = (choice + 1) % len(variants)
        return variants[choice]

    return respond
