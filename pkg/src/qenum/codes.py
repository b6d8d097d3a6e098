"""Built-in named codes.

Each code's encoder is the isometry whose columns are the canonical codewords:
Gram-Schmidt over the columns of the exact projector in computational-basis
order, phase-fixed so the first nonzero entry is positive.
"""

from __future__ import annotations

import numpy as np

from .errors import ContractError
from .hilbert import CodeStates
from .stabilizer import parse_stabilizer

STABILIZERS = {
    "bell": "XX, ZZ",
    "[[4,2,2]]": "XXXX, ZZZZ",
    "[[5,1,3]]": "XZZXI, IXZZX, XIXZZ, ZXIXZ",
}

_ALIASES = {
    "422": "[[4,2,2]]",
    "513": "[[5,1,3]]",
    "five_qubit": "[[5,1,3]]",
    "four_qubit": "[[4,2,2]]",
}


def named_code(name: str) -> CodeStates:
    key = _ALIASES.get(name, name)
    try:
        text = STABILIZERS[key]
    except KeyError:
        raise ContractError(f"unknown code {name!r}; choose from {sorted(STABILIZERS)}") from None
    return parse_stabilizer(text)


def encoder(name: str) -> np.ndarray:
    """Isometry ``dim(V) x K`` mapping logical basis states to the canonical codewords."""
    return named_code(name).vectors.copy()
