"""Canonical SMILES generation.

Atom ranks come from iterative refinement of local invariants (element,
aromaticity, degree, charge, hydrogen count, isotope, ring membership),
splitting tied cells one atom at a time and taking the lexicographically
smallest string over all tie-break choices. Exploring every member of a
tied cell is what makes the result independent of input atom order: the
candidate set is itself permutation-invariant.

Stereo annotations are dropped from the output because they do not take
part in ranking; emitting them unranked would break invariance.
Disconnected components are canonicalized separately and joined with '.'
in sorted order.
"""

from __future__ import annotations

from ..errors import InvalidGraph, InvalidGroundTruth, SmilesError
from .elements import ORGANIC_SUBSET
from .graph import AROMATIC_BOND, MolGraph, bond_symbol
from .parser import implicit_hydrogens, parse
from .valence import check_valence, is_valid

_BARE_AROMATIC_ELEMENTS = frozenset(["B", "C", "N", "O", "P", "S"])


def canonicalize(graph: MolGraph) -> str:
    verdict = check_valence(graph)
    if not verdict.valid:
        raise InvalidGraph(f"cannot canonicalize: {verdict.reason}")
    parts = [_canonical_component(graph, comp) for comp in graph.components()]
    return ".".join(sorted(parts))


def canonicalize_smiles(smiles: str) -> str:
    return canonicalize(parse(smiles))


def exact_match(pred: str, truth: str, record_id: str = "") -> bool:
    """True iff both strings denote the same molecule; an invalid
    prediction is simply no match, an invalid ground truth is an error."""
    truth_verdict = is_valid(truth)
    if not truth_verdict.valid:
        raise InvalidGroundTruth(record_id or truth, truth_verdict.reason or "")
    if not is_valid(pred).valid:
        return False
    return canonicalize(parse(pred)) == canonicalize(parse(truth))


# --- ranking ---------------------------------------------------------------

def _initial_keys(graph: MolGraph, members: list[int]):
    keys = []
    for idx in members:
        atom = graph.atoms[idx]
        keys.append(
            (
                atom.element,
                atom.aromatic,
                graph.degree(idx),
                atom.charge,
                atom.hydrogens,
                atom.isotope or 0,
                graph.ring_atom_flags[idx],
            )
        )
    return keys


def _dense_ranks(keys) -> list[int]:
    order = {key: rank for rank, key in enumerate(sorted(set(keys)))}
    return [order[key] for key in keys]


def _refine(ranks, adjacency):
    nlocal = len(ranks)
    while True:
        keys = []
        for i in range(nlocal):
            env = sorted((code, ranks[j]) for code, j in adjacency[i])
            keys.append((ranks[i], tuple(env)))
        new_ranks = _dense_ranks(keys)
        if new_ranks == ranks:
            return ranks
        ranks = new_ranks


def _canonical_component(graph: MolGraph, component: list[int]) -> str:
    members = sorted(component)
    local_of = {orig: i for i, orig in enumerate(members)}
    adjacency: list[list[tuple[int, int]]] = [[] for _ in members]
    local_bonds: dict[tuple[int, int], int] = {}
    for i, orig in enumerate(members):
        for nbr, bond in graph.neighbor_atoms(orig):
            j = local_of[nbr]
            adjacency[i].append((bond.order, j))
            local_bonds[(min(i, j), max(i, j))] = bond.order

    ranks = _refine(_dense_ranks(_initial_keys(graph, members)), adjacency)

    def solve(ranks) -> str:
        tied = _first_tied_cell(ranks)
        if tied is None:
            return _write(graph, members, adjacency, local_bonds, ranks)
        best = None
        for chosen in tied:
            keys = [(r, 0 if i == chosen else 1) for i, r in enumerate(ranks)]
            candidate = solve(_refine(_dense_ranks(keys), adjacency))
            if best is None or candidate < best:
                best = candidate
        return best

    return solve(ranks)


def _first_tied_cell(ranks) -> list[int] | None:
    cells: dict[int, list[int]] = {}
    for i, r in enumerate(ranks):
        cells.setdefault(r, []).append(i)
    for r in sorted(cells):
        if len(cells[r]) > 1:
            return cells[r]
    return None


# --- writing ---------------------------------------------------------------

def _write(graph, members, adjacency, local_bonds, ranks) -> str:
    nlocal = len(members)
    by_rank = sorted(range(nlocal), key=lambda i: ranks[i])
    start = by_rank[0]

    # DFS tree, marking at visit time so rings come out as single chains
    # with a closure bond; non-tree edges become ring closures.
    children: list[list[int]] = [[] for _ in range(nlocal)]
    ring_edges: list[tuple[int, int]] = []
    visited = [False] * nlocal
    seen_edges = set()
    stack: list[tuple[int, int | None]] = [(start, None)]
    while stack:
        node, parent = stack.pop()
        if visited[node]:
            edge = (min(node, parent), max(node, parent))
            if edge not in seen_edges:
                seen_edges.add(edge)
                ring_edges.append((parent, node))
            continue
        visited[node] = True
        if parent is not None:
            seen_edges.add((min(node, parent), max(node, parent)))
            children[parent].append(node)
        nbrs = sorted({j for _, j in adjacency[node]}, key=lambda j: ranks[j])
        for j in reversed(nbrs):
            edge = (min(node, j), max(node, j))
            if edge in seen_edges:
                continue
            stack.append((j, node))

    ring_at: dict[int, list[int]] = {}
    for a, b in ring_edges:
        ring_at.setdefault(a, []).append(b)
        ring_at.setdefault(b, []).append(a)
    for lst in ring_at.values():
        lst.sort(key=lambda j: ranks[j])

    ring_numbers: dict[tuple[int, int], int] = {}
    free_numbers = list(range(99, 0, -1))
    out: list[str] = []

    def bond_token(i: int, j: int) -> str:
        order = local_bonds[(min(i, j), max(i, j))]
        a_arom = graph.atoms[members[i]].aromatic
        b_arom = graph.atoms[members[j]].aromatic
        if order == 1:
            return "-" if (a_arom and b_arom) else ""
        if order == AROMATIC_BOND:
            return "" if (a_arom and b_arom) else ":"
        return bond_symbol(order)

    ops: list[tuple] = [("atom", start, None)]
    while ops:
        op = ops.pop()
        if op[0] == "text":
            out.append(op[1])
            continue
        _, node, parent = op
        if parent is not None:
            out.append(bond_token(parent, node))
        out.append(_atom_token(graph, members[node], adjacency[node]))
        for partner in ring_at.get(node, ()):
            edge = (min(node, partner), max(node, partner))
            if edge in ring_numbers:
                number = ring_numbers.pop(edge)
                free_numbers.append(number)
                free_numbers.sort(reverse=True)
            else:
                number = free_numbers.pop()
                ring_numbers[edge] = number
                out.append(bond_token(node, partner))
            out.append(str(number) if number < 10 else f"%{number:02d}")
        kids = children[node]
        for pos in range(len(kids) - 1, -1, -1):
            kid = kids[pos]
            if pos < len(kids) - 1:
                ops.append(("text", ")"))
                ops.append(("atom", kid, node))
                ops.append(("text", "("))
            else:
                ops.append(("atom", kid, node))

    return "".join(out)


def _atom_token(graph: MolGraph, orig_idx: int, adjacency_row) -> str:
    atom = graph.atoms[orig_idx]
    symbol = atom.element.lower() if atom.aromatic else atom.element
    order_sum = sum(1 if code == AROMATIC_BOND else code for code, _ in adjacency_row)
    bare_ok = (
        atom.element in ORGANIC_SUBSET
        and atom.charge == 0
        and atom.isotope is None
        and (not atom.aromatic or atom.element in _BARE_AROMATIC_ELEMENTS)
        and atom.hydrogens == implicit_hydrogens(atom.element, atom.aromatic, order_sum)
    )
    if bare_ok:
        return symbol
    parts = ["["]
    if atom.isotope is not None:
        parts.append(str(atom.isotope))
    parts.append(symbol)
    if atom.hydrogens == 1:
        parts.append("H")
    elif atom.hydrogens > 1:
        parts.append(f"H{atom.hydrogens}")
    if atom.charge == 1:
        parts.append("+")
    elif atom.charge == -1:
        parts.append("-")
    elif atom.charge > 1:
        parts.append(f"+{atom.charge}")
    elif atom.charge < -1:
        parts.append(f"-{-atom.charge}")
    parts.append("]")
    return "".join(parts)
