"""Backtracking subgraph matching for structural keys.

Finds an injective mapping of pattern atoms onto target atoms such that
every pattern bond maps onto a target bond (a monomorphism: extra target
bonds between matched atoms are allowed, as in substructure search).

Label semantics: element and aromatic flag must agree; charge is compared
only when the pattern atom carries one; isotopes and hydrogen counts are
ignored. Bond orders must be equal, so aromatic only matches aromatic.
"""

from __future__ import annotations

from ..smiles.graph import MolGraph


def _atom_compatible(p_atom, t_atom) -> bool:
    if p_atom.element != t_atom.element:
        return False
    if p_atom.aromatic != t_atom.aromatic:
        return False
    if p_atom.charge != 0 and p_atom.charge != t_atom.charge:
        return False
    return True


def _match_order(pattern: MolGraph) -> list[int]:
    """Pattern atoms ordered so each one (after the first) touches an
    already-placed atom where the graph allows; rarest elements first."""
    n = len(pattern.atoms)
    counts: dict[str, int] = {}
    for atom in pattern.atoms:
        counts[atom.element] = counts.get(atom.element, 0) + 1
    placed: list[int] = []
    in_order = [False] * n
    while len(placed) < n:
        frontier = [
            i
            for i in range(n)
            if not in_order[i]
            and any(in_order[j] for j, _ in pattern.neighbor_atoms(i))
        ]
        pool = frontier or [i for i in range(n) if not in_order[i]]
        nxt = min(pool, key=lambda i: (counts[pattern.atoms[i].element], -pattern.degree(i), i))
        placed.append(nxt)
        in_order[nxt] = True
    return placed


def has_subgraph(pattern: MolGraph, target: MolGraph) -> bool:
    np_, nt = len(pattern.atoms), len(target.atoms)
    if np_ > nt or len(pattern.bonds) > len(target.bonds):
        return False
    order = _match_order(pattern)
    mapping: dict[int, int] = {}
    used = [False] * nt

    def candidates(p_idx: int):
        # prefer extending along an already-mapped neighbor's adjacency
        for j, bond in pattern.neighbor_atoms(p_idx):
            if j in mapping:
                anchor = mapping[j]
                for t_idx, t_bond in target.neighbor_atoms(anchor):
                    if t_bond.order == bond.order and not used[t_idx]:
                        yield t_idx
                return
        for t_idx in range(nt):
            if not used[t_idx]:
                yield t_idx

    def feasible(p_idx: int, t_idx: int) -> bool:
        if not _atom_compatible(pattern.atoms[p_idx], target.atoms[t_idx]):
            return False
        if pattern.degree(p_idx) > target.degree(t_idx):
            return False
        for j, bond in pattern.neighbor_atoms(p_idx):
            if j not in mapping:
                continue
            partner = mapping[j]
            for t_nbr, t_bond in target.neighbor_atoms(t_idx):
                if t_nbr == partner and t_bond.order == bond.order:
                    break
            else:
                return False
        return True

    def extend(pos: int) -> bool:
        if pos == np_:
            return True
        p_idx = order[pos]
        for t_idx in candidates(p_idx):
            if feasible(p_idx, t_idx):
                mapping[p_idx] = t_idx
                used[t_idx] = True
                if extend(pos + 1):
                    return True
                del mapping[p_idx]
                used[t_idx] = False
        return False

    return extend(0)
