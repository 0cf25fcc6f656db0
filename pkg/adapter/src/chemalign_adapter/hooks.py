"""Embedding hooks: callables mapping a Structure to n x d feature rows.

Real extractors (pretrained graph networks) are supplied by the user;
this module only defines the calling convention and a model-free
identity hook used for round-trip tests.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .xyz import Structure

EmbeddingHook = Callable[[Structure], np.ndarray]

# first two periods; enough for organic toy molecules
ATOMIC_NUMBERS = {"H": 1, "He": 2, "Li": 3, "Be": 4, "B": 5, "C": 6, "N": 7, "O": 8}

IDENTITY_DIM = len(ATOMIC_NUMBERS)


class UnknownElementError(ValueError):
    pass


def atomic_one_hot(structure: Structure) -> np.ndarray:
    """Identity hook: one row per atom, one-hot over atomic number, d=8."""
    rows = np.zeros((structure.atom_count, IDENTITY_DIM), dtype=np.float32)
    for i, sym in enumerate(structure.elements):
        z = ATOMIC_NUMBERS.get(sym)
        if z is None:
            raise UnknownElementError(f"element {sym!r} outside the identity-hook table")
        rows[i, z - 1] = 1.0
    return rows
