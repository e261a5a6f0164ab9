"""Stable 64-bit hashing for fingerprints and deterministic ordering.

Python's builtin hash() is salted per process, so everything that must be
reproducible across runs and platforms (fingerprint bits, split ordering,
cache keys) goes through the FNV-1a construction below with a fixed seed.
"""

from __future__ import annotations

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
MASK64 = 0xFFFFFFFFFFFFFFFF

# Documented constant; changing it changes every fingerprint and split.
HASH_SEED = 0x4D4F4C5445585431  # ascii "MOLTEXT1"


def fnv1a64(data: bytes, seed: int = HASH_SEED) -> int:
    h = (FNV_OFFSET ^ seed) & MASK64
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & MASK64
    return h


def _encode(value, out: bytearray) -> None:
    # Type tags keep e.g. 1 and "1" from colliding.
    if isinstance(value, bool):
        out += b"b" + (b"\x01" if value else b"\x00")
    elif isinstance(value, int):
        out += b"i" + value.to_bytes(9, "little", signed=True)
    elif isinstance(value, str):
        raw = value.encode("utf-8")
        out += b"s" + len(raw).to_bytes(4, "little") + raw
    elif isinstance(value, bytes):
        out += b"y" + len(value).to_bytes(4, "little") + value
    elif isinstance(value, (tuple, list)):
        out += b"t" + len(value).to_bytes(4, "little")
        for item in value:
            _encode(item, out)
    elif value is None:
        out += b"n"
    else:
        raise TypeError(f"unhashable value for stable hash: {type(value)!r}")


def stable_hash(*values) -> int:
    """64-bit hash of a tuple of ints/strs/bytes/nested tuples."""
    buf = bytearray()
    _encode(tuple(values), buf)
    return fnv1a64(bytes(buf))


def stable_hash_hex(*values) -> str:
    return f"{stable_hash(*values):016x}"
