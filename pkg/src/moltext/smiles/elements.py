"""Periodic-table symbols and the valence table.

The valence table is the single versioned source for validity decisions so
any disagreement with other toolkits can be traced to one file.

Charge adjustment follows the usual group rule: elements left of carbon
gain valence with negative charge (borate), carbon loses valence with
charge of either sign (carbocation and carbanion are both trivalent), and
elements right of carbon shift valence by the signed charge (ammonium,
oxocarbenium, alkoxide).
"""

from __future__ import annotations

VALENCE_TABLE_VERSION = "valence-v1"

PERIODIC_SYMBOLS = frozenset(
    """H He Li Be B C N O F Ne Na Mg Al Si P S Cl Ar K Ca Sc Ti V Cr Mn Fe Co
    Ni Cu Zn Ga Ge As Se Br Kr Rb Sr Y Zr Nb Mo Tc Ru Rh Pd Ag Cd In Sn Sb Te
    I Xe Cs Ba La Ce Pr Nd Pm Sm Eu Gd Tb Dy Ho Er Tm Yb Lu Hf Ta W Re Os Ir
    Pt Au Hg Tl Pb Bi Po At Rn Fr Ra Ac Th Pa U Np Pu Am Cm Bk Cf Es Fm Md No
    Lr Rf Db Sg Bh Hs Mt Ds Rg Cn Nh Fl Mc Lv Ts Og""".split()
)

# Atoms writable without brackets.
ORGANIC_SUBSET = frozenset(["B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"])

# Lowercase forms accepted as aromatic atoms (bare or bracketed).
AROMATIC_OK = frozenset(["b", "c", "n", "o", "p", "s", "se", "as", "te"])

# Allowed total valences (bond order sum + hydrogens) for neutral atoms.
DEFAULT_VALENCES: dict[str, tuple[int, ...]] = {
    "H": (1,),
    "B": (3,),
    "C": (4,),
    "N": (3, 5),
    "O": (2,),
    "P": (3, 5),
    "S": (2, 4, 6),
    "F": (1,),
    "Cl": (1,),
    "Br": (1,),
    "I": (1,),
    "Si": (4,),
    "Se": (2, 4, 6),
    "As": (3, 5),
    "Te": (2, 4, 6),
}

_LEFT_OF_CARBON = frozenset(["B", "Al", "Ga", "In", "Tl"])


def allowed_valences(element: str, charge: int) -> tuple[int, ...] | None:
    """Charge-adjusted allowed valences, or None when the table has no row
    (uncommon elements are then not valence-checked)."""
    base = DEFAULT_VALENCES.get(element)
    if base is None:
        return None
    if charge == 0:
        return base
    if element == "C":
        shift = -abs(charge)
    elif element in _LEFT_OF_CARBON:
        shift = -charge
    else:
        shift = charge
    adjusted = tuple(v + shift for v in base if v + shift >= 0)
    return adjusted or (0,)
