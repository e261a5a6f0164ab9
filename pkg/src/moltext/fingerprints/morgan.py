"""Circular (Morgan-style) fingerprint.

Atom identifiers start from a hash of local invariants and are iteratively
rehashed with sorted (bond order, neighbor id) pairs. Environments covering
the same atom set are deduplicated order-independently: the earliest
iteration wins, ties keep the smaller identifier. Every surviving
identifier is folded modulo the width.
"""

from __future__ import annotations

from ..errors import InvalidGraph
from ..hashing import stable_hash
from ..smiles.graph import MolGraph
from ..smiles.valence import check_valence
from .base import Fingerprint


def morgan_fp(graph: MolGraph, radius: int = 2, width: int = 2048) -> Fingerprint:
    if not check_valence(graph).valid:
        raise InvalidGraph("refusing to fingerprint an invalid graph")
    n = len(graph.atoms)
    ids = []
    for idx in range(n):
        atom = graph.atoms[idx]
        ids.append(
            stable_hash(
                "atom",
                atom.element,
                graph.degree(idx),
                atom.charge,
                atom.hydrogens,
                graph.ring_atom_flags[idx],
                atom.isotope or 0,
            )
        )
    env: list[frozenset[int]] = [frozenset([i]) for i in range(n)]
    # feature registry keyed by environment atom set
    features: dict[frozenset[int], tuple[int, int]] = {
        env[i]: (0, ids[i]) for i in range(n)
    }

    for iteration in range(1, radius + 1):
        new_ids = []
        new_env = []
        for idx in range(n):
            pairs = sorted(
                (bond.order, ids[nbr]) for nbr, bond in graph.neighbor_atoms(idx)
            )
            new_ids.append(stable_hash("env", ids[idx], tuple(pairs)))
            merged = set(env[idx])
            for nbr, _ in graph.neighbor_atoms(idx):
                merged |= env[nbr]
            new_env.append(frozenset(merged))
        for idx in range(n):
            key = new_env[idx]
            prior = features.get(key)
            if prior is None:
                features[key] = (iteration, new_ids[idx])
            elif prior[0] == iteration and new_ids[idx] < prior[1]:
                features[key] = (iteration, new_ids[idx])
        ids = new_ids
        env = new_env

    acc = 0
    for _, identifier in features.values():
        acc |= 1 << (identifier % width)
    return Fingerprint("morgan", width, acc, ("radius", radius))
