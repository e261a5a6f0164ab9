"""Fingerprint container and Tanimoto similarity."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import FamilyMismatch

WIDTH_BY_FAMILY = {"morgan": 2048, "path": 2048, "keys": 166}


@dataclass(frozen=True)
class Fingerprint:
    family: str  # morgan | path | keys
    width: int
    bits: int  # bit i set <=> (bits >> i) & 1
    params: tuple  # family parameters, part of comparability

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.width:
            raise ValueError("bits outside declared width")

    @property
    def popcount(self) -> int:
        return self.bits.bit_count()

    def on_bits(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.width) if (self.bits >> i) & 1)

    def to_hex(self) -> str:
        digits = (self.width + 3) // 4
        return f"{self.bits:0{digits}x}"

    @staticmethod
    def from_on_bits(family: str, width: int, on, params: tuple = ()) -> "Fingerprint":
        acc = 0
        for i in on:
            if not 0 <= i < width:
                raise ValueError(f"bit {i} outside width {width}")
            acc |= 1 << i
        return Fingerprint(family, width, acc, params)


def tanimoto(a: Fingerprint, b: Fingerprint) -> float:
    """|a AND b| / |a OR b|; two all-zero vectors count as identical (1.0)."""
    if a.family != b.family or a.params != b.params or a.width != b.width:
        raise FamilyMismatch(
            f"cannot compare {a.family}{a.params} with {b.family}{b.params}"
        )
    union = (a.bits | b.bits).bit_count()
    if union == 0:
        return 1.0
    return (a.bits & b.bits).bit_count() / union
