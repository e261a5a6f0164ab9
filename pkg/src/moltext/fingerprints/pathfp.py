"""Linear-path fingerprint.

Enumerates every simple bond path of 1..max_len bonds once, reads it in its
canonical direction (the lexicographically smaller token sequence), hashes
the (element, bond order) tokens and folds modulo the width.
"""

from __future__ import annotations

from ..errors import InvalidGraph
from ..hashing import stable_hash
from ..smiles.graph import AROMATIC_BOND, MolGraph
from ..smiles.valence import check_valence
from .base import Fingerprint

_BOND_TOKEN = {1: "-", 2: "=", 3: "#", AROMATIC_BOND: ":"}


def _atom_token(graph: MolGraph, idx: int) -> str:
    atom = graph.atoms[idx]
    return atom.element.lower() if atom.aromatic else atom.element


def _tokens(graph: MolGraph, atom_path: list[int], bond_orders: list[int]) -> tuple[str, ...]:
    toks = [_atom_token(graph, atom_path[0])]
    for pos in range(len(bond_orders)):
        toks.append(_BOND_TOKEN[bond_orders[pos]])
        toks.append(_atom_token(graph, atom_path[pos + 1]))
    return tuple(toks)


def path_fp(graph: MolGraph, max_len: int = 7, width: int = 2048) -> Fingerprint:
    if not check_valence(graph).valid:
        raise InvalidGraph("refusing to fingerprint an invalid graph")
    acc = 0
    n = len(graph.atoms)
    path: list[int] = []
    orders: list[int] = []
    on_path = [False] * n

    def register():
        forward = _tokens(graph, path, orders)
        backward = _tokens(graph, path[::-1], orders[::-1])
        canonical = forward if forward <= backward else backward
        nonlocal acc
        acc |= 1 << (stable_hash("path", canonical) % width)

    def extend(last: int):
        for nbr, bond in graph.neighbor_atoms(last):
            if on_path[nbr]:
                continue
            path.append(nbr)
            orders.append(bond.order)
            on_path[nbr] = True
            # each undirected path counted once, from its lower-index end
            if path[0] < path[-1]:
                register()
            if len(orders) < max_len:
                extend(nbr)
            on_path[nbr] = False
            path.pop()
            orders.pop()

    for start in range(n):
        path = [start]
        orders = []
        on_path[start] = True
        extend(start)
        on_path[start] = False
    return Fingerprint("path", width, acc, ("max_len", max_len))
