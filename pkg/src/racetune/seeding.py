"""Deterministic seed and uniform-value derivation.

All stochastic inputs in a run (evaluation seeds, built-in target noise,
synthetic optima) are derived from the scenario master seed through a
keyed SHA-256 hash, so results are reproducible across processes and
platforms and independent of evaluation order.
"""

from __future__ import annotations

import hashlib

_SEP = b"\x1f"


def _encode(parts: tuple) -> bytes:
    chunks = []
    for part in parts:
        if isinstance(part, bytes):
            chunks.append(part)
        elif isinstance(part, bool):
            chunks.append(b"b1" if part else b"b0")
        elif isinstance(part, int):
            chunks.append(b"i" + str(part).encode())
        elif isinstance(part, float):
            chunks.append(b"f" + part.hex().encode())
        elif isinstance(part, str):
            chunks.append(b"s" + part.encode())
        else:
            raise TypeError(f"unhashable seed part: {part!r}")
    return _SEP.join(chunks)


def derive_seed(*parts: object) -> int:
    """A 63-bit seed derived from the given parts (order-sensitive)."""
    digest = hashlib.sha256(_encode(parts)).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def hash_uniform(*parts: object) -> float:
    """A deterministic uniform draw in [0, 1) keyed by the given parts."""
    digest = hashlib.sha256(_encode(parts)).digest()
    return int.from_bytes(digest[:8], "big") / 2**64
