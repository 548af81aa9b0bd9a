"""Deterministic seed derivation.

One top-level seed drives a whole run. Every randomized stage gets its own
child seed derived from the parent plus a stage label, so adding or removing
a stage never shifts the streams of the others.
"""
from __future__ import annotations

import hashlib


def child_seed(parent: int, label: str) -> int:
    """Stable 64-bit child seed for a named stage under a parent seed."""
    digest = hashlib.blake2b(f"{parent}:{label}".encode("utf-8"), digest_size=8)
    return int.from_bytes(digest.digest(), "little")
