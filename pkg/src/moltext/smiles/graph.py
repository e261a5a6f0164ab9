"""Molecular graph model produced by the SMILES parser.

Atoms and bonds are immutable; ring membership and adjacency are derived
once at construction. Bond orders are coded 1/2/3 with 4 meaning aromatic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

AROMATIC_BOND = 4

_BOND_SYMBOL = {1: "-", 2: "=", 3: "#", AROMATIC_BOND: ":"}


@dataclass(frozen=True)
class Atom:
    element: str
    isotope: int | None = None
    charge: int = 0
    explicit_h: int | None = None  # H count written in brackets, None for bare atoms
    aromatic: bool = False
    chirality: str | None = None  # "@" or "@@", preserved but unranked
    hydrogens: int = 0  # resolved total H count


@dataclass(frozen=True)
class Bond:
    a: int
    b: int
    order: int  # 1, 2, 3 or AROMATIC_BOND
    stereo: str | None = None  # "/" or "\\", preserved but unranked

    def other(self, idx: int) -> int:
        return self.b if idx == self.a else self.a

    def value(self) -> int:
        """Order contribution for valence arithmetic (aromatic counts 1)."""
        return 1 if self.order == AROMATIC_BOND else self.order


def bond_symbol(order: int) -> str:
    return _BOND_SYMBOL[order]


@dataclass(frozen=True)
class MolGraph:
    atoms: tuple[Atom, ...]
    bonds: tuple[Bond, ...]
    neighbors: tuple[tuple[int, ...], ...] = field(repr=False, default=())
    ring_bond_flags: tuple[bool, ...] = field(repr=False, default=())
    ring_atom_flags: tuple[bool, ...] = field(repr=False, default=())
    ring_sizes: tuple[int, ...] = field(repr=False, default=())

    @staticmethod
    def build(atoms, bonds) -> "MolGraph":
        atoms = tuple(atoms)
        bonds = tuple(bonds)
        n = len(atoms)
        seen_pairs = set()
        adj: list[list[int]] = [[] for _ in range(n)]
        for bi, bond in enumerate(bonds):
            if not (0 <= bond.a < n and 0 <= bond.b < n):
                raise ValueError(f"bond endpoint out of range: {bond}")
            if bond.a == bond.b:
                raise ValueError(f"self-bond on atom {bond.a}")
            pair = (min(bond.a, bond.b), max(bond.a, bond.b))
            if pair in seen_pairs:
                raise ValueError(f"duplicate bond between atoms {pair}")
            seen_pairs.add(pair)
            adj[bond.a].append(bi)
            adj[bond.b].append(bi)
        ring_bonds = _ring_bond_flags(n, bonds, adj)
        ring_atoms = [False] * n
        for bi, is_ring in enumerate(ring_bonds):
            if is_ring:
                ring_atoms[bonds[bi].a] = True
                ring_atoms[bonds[bi].b] = True
        sizes = _ring_sizes(n, bonds, adj, ring_bonds)
        return MolGraph(
            atoms=atoms,
            bonds=bonds,
            neighbors=tuple(tuple(b) for b in adj),
            ring_bond_flags=tuple(ring_bonds),
            ring_atom_flags=tuple(ring_atoms),
            ring_sizes=sizes,
        )

    def degree(self, idx: int) -> int:
        return len(self.neighbors[idx])

    def neighbor_atoms(self, idx: int):
        for bi in self.neighbors[idx]:
            bond = self.bonds[bi]
            yield bond.other(idx), bond

    def bond_order_sum(self, idx: int) -> int:
        return sum(self.bonds[bi].value() for bi in self.neighbors[idx])

    def components(self) -> list[list[int]]:
        seen = [False] * len(self.atoms)
        comps = []
        for start in range(len(self.atoms)):
            if seen[start]:
                continue
            comp = []
            queue = deque([start])
            seen[start] = True
            while queue:
                cur = queue.popleft()
                comp.append(cur)
                for nbr, _ in self.neighbor_atoms(cur):
                    if not seen[nbr]:
                        seen[nbr] = True
                        queue.append(nbr)
            comps.append(comp)
        return comps

    def ring_count(self) -> int:
        # cyclomatic number: bonds - atoms + components
        return len(self.bonds) - len(self.atoms) + len(self.components())

    def permuted(self, perm: list[int]) -> "MolGraph":
        """Relabeled copy; perm[i] is the new index of old atom i."""
        n = len(self.atoms)
        if sorted(perm) != list(range(n)):
            raise ValueError("perm must be a permutation of atom indices")
        new_atoms: list[Atom | None] = [None] * n
        for old, new in enumerate(perm):
            new_atoms[new] = self.atoms[old]
        new_bonds = [
            Bond(perm[b.a], perm[b.b], b.order, b.stereo) for b in self.bonds
        ]
        return MolGraph.build(new_atoms, new_bonds)


def _ring_bond_flags(n, bonds, adj) -> list[bool]:
    """True for every bond on a cycle. Back edges always are; a tree edge
    (parent, node) is on a cycle unless it is a bridge, i.e. unless
    low[node] > disc[parent]. Iterative to survive long chains."""
    flags = [False] * len(bonds)
    disc = [-1] * n
    low = [0] * n
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        stack: list[tuple[int, int, int]] = [(root, -1, 0)]  # node, parent bond, edge cursor
        while stack:
            node, pbond, cursor = stack.pop()
            if cursor == 0:
                disc[node] = low[node] = timer
                timer += 1
            descended = False
            while cursor < len(adj[node]):
                bi = adj[node][cursor]
                cursor += 1
                if bi == pbond:
                    continue
                nbr = bonds[bi].other(node)
                if disc[nbr] == -1:
                    stack.append((node, pbond, cursor))
                    stack.append((nbr, bi, 0))
                    descended = True
                    break
                if disc[nbr] < low[node]:
                    low[node] = disc[nbr]
                flags[bi] = True
            if not descended and pbond != -1:
                parent = bonds[pbond].other(node)
                if low[node] < low[parent]:
                    low[parent] = low[node]
                if low[node] <= disc[parent]:
                    flags[pbond] = True
    return flags


def _ring_sizes(n, bonds, adj, ring_flags) -> tuple[int, ...]:
    """Sizes of the smallest cycle through each ring bond (deduplicated)."""
    sizes = set()
    for bi, is_ring in enumerate(ring_flags):
        if not is_ring:
            continue
        src, dst = bonds[bi].a, bonds[bi].b
        # BFS from src to dst avoiding the bond itself
        dist = {src: 0}
        queue = deque([src])
        found = -1
        while queue:
            cur = queue.popleft()
            if cur == dst:
                found = dist[cur]
                break
            for bj in adj[cur]:
                if bj == bi:
                    continue
                nbr = bonds[bj].other(cur)
                if nbr not in dist:
                    dist[nbr] = dist[cur] + 1
                    queue.append(nbr)
        if found > 0:
            sizes.add(found + 1)
    return tuple(sorted(sizes))
