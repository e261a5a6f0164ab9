"""Recursive-descent SMILES parser.

Supports the organic subset, bracket atoms ``[isotope symbol chiral Hn
charge :class]``, branches, ``%nn`` ring closures, the dot for disconnected
components, and aromatic lowercase atoms. Stereo marks (``/ \\ @ @@``) are
parsed and kept as annotations. Every failure carries a position.

Implicit hydrogen counts for bare atoms follow the usual valence-filling
rule; bare aromatic atoms get a +1 added to their bond order sum before
filling, so ``c1ccccc1`` carries one hydrogen per carbon. Bracket atoms
have exactly the written hydrogen count.
"""

from __future__ import annotations

from ..errors import GrammarError, UnclosedRing, UnknownElement, UnmatchedParen
from .elements import AROMATIC_OK, ORGANIC_SUBSET, PERIODIC_SYMBOLS, allowed_valences
from .graph import AROMATIC_BOND, Atom, Bond, MolGraph

_BOND_ORDERS = {"-": 1, "=": 2, "#": 3, ":": AROMATIC_BOND}
_BARE_AROMATIC = {"b": "B", "c": "C", "n": "N", "o": "O", "p": "P", "s": "S"}


class _ProtoAtom:
    __slots__ = ("element", "isotope", "charge", "explicit_h", "aromatic", "chirality")

    def __init__(self, element, aromatic, isotope=None, charge=0, explicit_h=None,
                 chirality=None):
        self.element = element
        self.aromatic = aromatic
        self.isotope = isotope
        self.charge = charge
        self.explicit_h = explicit_h
        self.chirality = chirality


def implicit_hydrogens(element: str, aromatic: bool, order_sum: int) -> int:
    """Hydrogens a bare atom acquires to reach its lowest fitting valence."""
    allowed = allowed_valences(element, 0)
    if allowed is None:
        return 0
    adjusted = order_sum + (1 if aromatic else 0)
    for valence in allowed:
        if valence >= adjusted:
            return valence - adjusted
    return 0


def parse(smiles: str) -> MolGraph:
    """Parse a SMILES string into a MolGraph or raise a positioned error."""
    if not smiles:
        raise GrammarError(0, "empty SMILES")

    atoms: list[_ProtoAtom] = []
    bonds: list[Bond] = []
    bonded_pairs: set[tuple[int, int]] = set()
    prev_atom: int | None = None
    pending: tuple[int | None, str | None, int] | None = None  # (order, stereo, pos)
    branch_stack: list[tuple[int, int]] = []  # (atom index, '(' position)
    open_rings: dict[int, tuple[int, int | None, str | None, int]] = {}
    last_dot: int | None = None

    def add_bond(a: int, b: int, order: int | None, stereo: str | None, pos: int):
        if a == b:
            raise GrammarError(pos, "ring bond to the same atom")
        pair = (min(a, b), max(a, b))
        if pair in bonded_pairs:
            raise GrammarError(pos, f"duplicate bond between atoms {a} and {b}")
        if order is None:
            both_aromatic = atoms[a].aromatic and atoms[b].aromatic
            order = AROMATIC_BOND if both_aromatic else 1
        bonded_pairs.add(pair)
        bonds.append(Bond(a, b, order, stereo))

    def attach(new_idx: int, pos: int):
        nonlocal pending
        if prev_atom is not None:
            order, stereo = (pending[0], pending[1]) if pending else (None, None)
            add_bond(prev_atom, new_idx, order, stereo, pos)
        elif pending is not None:
            raise GrammarError(pending[2], "bond symbol without a preceding atom")
        pending = None

    i = 0
    n = len(smiles)
    while i < n:
        ch = smiles[i]
        if ch in _BOND_ORDERS or ch in "/\\":
            if pending is not None:
                raise GrammarError(i, "two bond symbols in a row")
            if ch in "/\\":
                pending = (1, ch, i)
            else:
                pending = (_BOND_ORDERS[ch], None, i)
            i += 1
        elif ch == "(":
            if prev_atom is None:
                raise GrammarError(i, "branch before any atom")
            if pending is not None:
                raise GrammarError(i, "bond symbol before '('")
            branch_stack.append((prev_atom, i))
            i += 1
        elif ch == ")":
            if not branch_stack:
                raise UnmatchedParen(i)
            if pending is not None:
                raise GrammarError(pending[2], "dangling bond before ')'")
            prev_atom = branch_stack.pop()[0]
            i += 1
        elif ch == ".":
            if pending is not None:
                raise GrammarError(pending[2], "bond symbol before '.'")
            if prev_atom is None:
                raise GrammarError(i, "'.' must follow an atom")
            prev_atom = None
            last_dot = i
            i += 1
        elif ch.isdigit() or ch == "%":
            if prev_atom is None:
                raise GrammarError(i, "ring closure before any atom")
            if ch == "%":
                if i + 2 >= n or not (smiles[i + 1].isdigit() and smiles[i + 2].isdigit()):
                    raise GrammarError(i, "'%' must be followed by two digits")
                label = int(smiles[i + 1 : i + 3])
                i += 3
            else:
                label = int(ch)
                i += 1
            p_order, p_stereo = (pending[0], pending[1]) if pending else (None, None)
            pos = i - 1
            if label in open_rings:
                other_atom, o_order, o_stereo, _ = open_rings.pop(label)
                if p_order is not None and o_order is not None and p_order != o_order:
                    raise GrammarError(pos, f"conflicting bond orders on ring closure {label}")
                order = p_order if p_order is not None else o_order
                stereo = p_stereo if p_stereo is not None else o_stereo
                add_bond(other_atom, prev_atom, order, stereo, pos)
            else:
                open_rings[label] = (prev_atom, p_order, p_stereo, pos)
            pending = None
        elif ch == "[":
            atom, i = _parse_bracket(smiles, i)
            atoms.append(atom)
            attach(len(atoms) - 1, i - 1)
            prev_atom = len(atoms) - 1
        elif ch.isalpha():
            two = smiles[i : i + 2]
            if two in ("Cl", "Br"):
                atoms.append(_ProtoAtom(two, aromatic=False))
                i += 2
            elif ch in "BCNOPSFI":
                atoms.append(_ProtoAtom(ch, aromatic=False))
                i += 1
            elif ch in _BARE_AROMATIC:
                atoms.append(_ProtoAtom(_BARE_AROMATIC[ch], aromatic=True))
                i += 1
            else:
                candidate = two if two in PERIODIC_SYMBOLS else ch
                if candidate in PERIODIC_SYMBOLS:
                    raise GrammarError(i, f"element {candidate!r} must be written in brackets")
                raise UnknownElement(ch)
            attach(len(atoms) - 1, i - 1)
            prev_atom = len(atoms) - 1
        else:
            raise GrammarError(i, f"unexpected character {ch!r}")

    if pending is not None:
        raise GrammarError(pending[2], "dangling bond at end of input")
    if last_dot is not None and prev_atom is None:
        raise GrammarError(last_dot, "'.' must be followed by an atom")
    if branch_stack:
        raise UnmatchedParen(branch_stack[0][1])
    if open_rings:
        first = min(open_rings, key=lambda lab: open_rings[lab][3])
        raise UnclosedRing(first)
    if not atoms:
        raise GrammarError(0, "no atoms")

    return _finalize(atoms, bonds)


def _parse_bracket(s: str, start: int) -> tuple[_ProtoAtom, int]:
    """Parse '[...]' starting at s[start] == '['; returns (atom, next index)."""
    i = start + 1
    n = len(s)
    close = s.find("]", i)
    if close == -1:
        raise GrammarError(start, "unclosed bracket atom")

    isotope = None
    digits_start = i
    while i < n and s[i].isdigit():
        i += 1
    if i > digits_start:
        isotope = int(s[digits_start:i])
        if isotope <= 0:
            raise GrammarError(digits_start, "isotope must be positive")

    if i >= n or not s[i].isalpha():
        raise GrammarError(i, "expected element symbol in bracket")
    aromatic = False
    if s[i].islower():
        two = s[i : i + 2]
        if two in AROMATIC_OK:
            token, i = two, i + 2
        elif s[i] in AROMATIC_OK:
            token, i = s[i], i + 1
        else:
            raise UnknownElement(s[i])
        element = token.capitalize()
        aromatic = True
    else:
        if i + 1 < n and s[i + 1].isalpha() and s[i + 1].islower() and s[i : i + 2] in PERIODIC_SYMBOLS:
            element, i = s[i : i + 2], i + 2
        elif s[i] in PERIODIC_SYMBOLS:
            element, i = s[i], i + 1
        else:
            token = s[i : i + 2] if i + 1 < n and s[i + 1].islower() else s[i]
            raise UnknownElement(token)

    chirality = None
    if i < n and s[i] == "@":
        if i + 1 < n and s[i + 1] == "@":
            chirality, i = "@@", i + 2
        else:
            chirality, i = "@", i + 1
        if s[i : i + 2] in ("TH", "AL", "SP", "TB", "OH") and s[i + 2 : i + 3].isdigit():
            raise GrammarError(i, "named chirality classes are not supported")

    explicit_h = 0
    if i < n and s[i] == "H":
        i += 1
        h_start = i
        while i < n and s[i].isdigit():
            i += 1
        explicit_h = int(s[h_start:i]) if i > h_start else 1

    charge = 0
    if i < n and s[i] in "+-":
        sign = 1 if s[i] == "+" else -1
        symbol = s[i]
        i += 1
        if i < n and s[i].isdigit():
            c_start = i
            while i < n and s[i].isdigit():
                i += 1
            charge = sign * int(s[c_start:i])
        else:
            count = 1
            while i < n and s[i] == symbol:
                count += 1
                i += 1
            charge = sign * count
        if abs(charge) > 15:
            raise GrammarError(i - 1, "unreasonable charge magnitude")

    if i < n and s[i] == ":":
        i += 1
        c_start = i
        while i < n and s[i].isdigit():
            i += 1
        if i == c_start:
            raise GrammarError(i, "':' must be followed by an atom class number")
        # atom class is accepted and discarded

    if i >= n or s[i] != "]":
        raise GrammarError(i if i < n else start, "malformed bracket atom")
    return _ProtoAtom(element, aromatic, isotope, charge, explicit_h, chirality), i + 1


def _finalize(protos: list[_ProtoAtom], bonds: list[Bond]) -> MolGraph:
    order_sums = [0] * len(protos)
    for bond in bonds:
        order_sums[bond.a] += bond.value()
        order_sums[bond.b] += bond.value()
    atoms = []
    for idx, proto in enumerate(protos):
        if proto.explicit_h is not None:
            hydrogens = proto.explicit_h
        else:
            hydrogens = implicit_hydrogens(proto.element, proto.aromatic, order_sums[idx])
        atoms.append(
            Atom(
                element=proto.element,
                isotope=proto.isotope,
                charge=proto.charge,
                explicit_h=proto.explicit_h,
                aromatic=proto.aromatic,
                chirality=proto.chirality,
                hydrogens=hydrogens,
            )
        )
    return MolGraph.build(atoms, bonds)
