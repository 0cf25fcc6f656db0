"""Class keys and stable 64-bit class ids.

A class key is a short string naming the bin a structure belongs to:
its molecular formula, a bulk identifier from the comment line, or a
custom value. Keys map to u64 ids via a stable hash, so the same key
gets the same id across runs and machines; an in-job collision check
remaps deterministically in the (astronomically unlikely) event two
distinct keys collide.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from typing import Callable

from .xyz import Structure

ClassRule = Callable[[Structure], str]


def formula_key(structure: Structure) -> str:
    """Canonical molecular formula, order-independent.

    Carbon first and hydrogen second when carbon is present, all other
    elements alphabetical; without carbon everything is alphabetical.
    Counts of one are omitted: ("O", "H", "H") and ("H", "O", "H") both
    give "H2O".
    """
    counts = Counter(structure.elements)
    symbols = sorted(counts)
    if "C" in counts:
        head = ["C"] + (["H"] if "H" in counts else [])
        symbols = head + [s for s in symbols if s not in ("C", "H")]
    return "".join(f"{s}{counts[s]}" if counts[s] > 1 else s for s in symbols)


def bulk_id_key(structure: Structure) -> str:
    """First whitespace token of the comment line, for bulk datasets."""
    token = structure.comment.split()
    if not token:
        raise ValueError("bulk-id rule needs a non-empty comment line")
    return token[0]


RULES: dict[str, ClassRule] = {"formula": formula_key, "bulk-id": bulk_id_key}


def resolve_rule(rule: str | ClassRule) -> ClassRule:
    if callable(rule):
        return rule
    if rule in RULES:
        return RULES[rule]
    raise ValueError(f"unknown class rule {rule!r}; expected one of {sorted(RULES)} or a callable")


def stable_hash(key: str) -> int:
    """u64 from an 8-byte blake2b digest, little-endian."""
    return int.from_bytes(hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest(), "little")


class ClassIdAssigner:
    """Key -> u64 id map with collision detection and deterministic remap.

    The same key always returns the same id within a job. If a new key
    hashes onto an id already owned by a different key, the key is
    salted with an increasing counter until a free id appears; assignment
    order therefore decides who keeps the unsalted id, which is why shard
    writing stays in dataset order.
    """

    def __init__(self, hash_fn: Callable[[str], int] = stable_hash):
        self._hash = hash_fn
        self._by_key: dict[str, int] = {}
        self._by_id: dict[int, str] = {}

    def assign(self, key: str) -> int:
        if key in self._by_key:
            return self._by_key[key]
        cid = self._hash(key)
        salt = 0
        while cid in self._by_id:
            salt += 1
            cid = self._hash(f"{key}\x00{salt}")
        self._by_key[key] = cid
        self._by_id[cid] = key
        return cid

    @property
    def labels(self) -> dict[int, str]:
        """id -> key map, for the shard manifest."""
        return dict(self._by_id)
