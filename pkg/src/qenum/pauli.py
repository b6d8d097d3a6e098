"""The qubit error basis: tensor products of I, X, Y, Z.

Errors act on basis index ``r`` as ``E|c> = phase * |c xor x>``; traces against
an operator are evaluated by gathering the permuted diagonal instead of
building ``E`` densely, so a full sweep over ``4^n`` errors costs ``O(8^n)``
for the ``B`` family and ``O(4^n)`` for ``A``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import ContractError, UnsupportedDimensionError
from .gaussian import GaussianRational, GaussianRationalArray
from .hilbert import Factorization, Operator, all_subsets, as_mask, members, submasks

LETTERS = "IXYZ"

_SIGMA = {
    "I": [[1, 0], [0, 1]],
    "X": [[0, 1], [1, 0]],
    "Y": [[0, GaussianRational(0, -1)], [GaussianRational(0, 1), 0]],
    "Z": [[1, 0], [0, -1]],
}

_MINUS_I_POWERS_EXACT = [GaussianRational(1), GaussianRational(0, -1), GaussianRational(-1), GaussianRational(0, 1)]
_MINUS_I_POWERS_FLOAT = [1 + 0j, -1j, -1 + 0j, 1j]


@dataclass(frozen=True, order=True)
class PauliError:
    """An element of the error basis, e.g. ``PauliError("XZZXI")``."""

    letters: str

    def __post_init__(self):
        bad = set(self.letters) - set(LETTERS)
        if bad or not self.letters:
            raise ContractError(f"invalid Pauli word {self.letters!r}")

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def fact(self) -> Factorization:
        return Factorization.qubits(self.n)

    @property
    def weight(self) -> int:
        return sum(c != "I" for c in self.letters)

    @property
    def support(self) -> int:
        """Support as a subset mask (bit ``i-1`` for qubit ``i``)."""
        return sum(1 << i for i, c in enumerate(self.letters) if c != "I")

    def _bits(self) -> tuple[int, int, int]:
        """(x flip mask, z sign mask, number of Y) on the basis-index encoding."""
        n = self.n
        x = z = 0
        ny = 0
        for i, c in enumerate(self.letters):
            bit = 1 << (n - 1 - i)
            if c in "XY":
                x |= bit
            if c in "ZY":
                z |= bit
            ny += c == "Y"
        return x, z, ny

    def matrix(self, exact: bool = True) -> Operator:
        out = None
        for c in self.letters:
            m = GaussianRationalArray.from_numbers(_SIGMA[c])
            out = m if out is None else out.outer(m).transpose(0, 2, 1, 3).reshape(
                out.shape[0] * 2, out.shape[1] * 2
            )
        op = Operator(self.fact, out)
        return op if exact else op.to_float()

    def __str__(self):
        return self.letters


def _require_qubits(fact: Factorization):
    if any(d != 2 for d in fact.dims):
        raise UnsupportedDimensionError(
            f"the Pauli error basis needs all-qubit factors, got dims {list(fact.dims)}"
        )


def _as_fact(fact) -> Factorization:
    if isinstance(fact, Factorization):
        return fact
    return Factorization.qubits(int(fact))


def errors_with_support(n: int, mask: int) -> Iterator[PauliError]:
    idx = [i - 1 for i in members(mask)]
    for choice in itertools.product("XYZ", repeat=len(idx)):
        word = ["I"] * n
        for i, c in zip(idx, choice):
            word[i] = c
        yield PauliError("".join(word))


def enumerate_errors(fact, *, weight: int | None = None, support=None, within=None) -> Iterator[PauliError]:
    """Lazily yield errors of a given weight, exact support, or support inside a set.

    Exactly one constraint must be given.  Order: by support (popcount, then
    mask), then lexicographic in X < Y < Z.
    """
    fact = _as_fact(fact)
    _require_qubits(fact)
    n = fact.n
    given = [c is not None for c in (weight, support, within)]
    if sum(given) != 1:
        raise ContractError("give exactly one of weight=, support=, within=")
    if weight is not None:
        if not 0 <= weight <= n:
            raise ContractError(f"weight {weight} outside 0..{n}")
        masks = [m for m in all_subsets(n) if m.bit_count() == weight]
    elif support is not None:
        masks = [as_mask(support, n)]
    else:
        masks = submasks(as_mask(within, n))
    for m in masks:
        yield from errors_with_support(n, m)


def all_errors(n: int) -> Iterator[PauliError]:
    for m in all_subsets(n):
        yield from errors_with_support(n, m)


# ---------------------------------------------------------------------------
# traces against operators


class _Kernel:
    """Per-operator-pair precomputation of index arrays for fast error traces."""

    def __init__(self, n: int, exact: bool):
        self.n = n
        self.exact = exact
        self.idx = np.arange(1 << n)
        self._popparity = np.array([bin(i).count("1") & 1 for i in range(1 << n)])

    def signs(self, z: int) -> np.ndarray:
        return 1 - 2 * self._popparity[self.idx & z]

    def phase(self, ny: int):
        table = _MINUS_I_POWERS_EXACT if self.exact else _MINUS_I_POWERS_FLOAT
        return table[ny % 4]

    def _signed(self, sign: np.ndarray):
        if self.exact:
            return GaussianRationalArray(sign.astype(object))
        return sign

    def tr_ME(self, entries, err: PauliError):
        """``Tr(M E)``."""
        x, z, ny = err._bits()
        r = self.idx
        diag = entries[r ^ x, r]
        s = (diag * self._signed(self.signs(z))).sum()
        return _clean(self.phase(ny) * s, self.exact)

    def tr_MEME(self, m1, m2, err: PauliError):
        """``Tr(M1 E M2 E)``."""
        x, z, ny = err._bits()
        perm = self.idx ^ x
        sr = self.signs(z)
        sc = sr[perm]
        x2 = m2[np.ix_(perm, perm)]
        weight = self._signed(np.outer(sr, sc))
        s = (m1.T * x2 * weight).sum()
        if ny % 2:
            s = -s
        return _clean(s, self.exact)


def _clean(v, exact: bool):
    if exact:
        if isinstance(v, GaussianRational) and v.imag == 0:
            return v.real
        return v
    return complex(v)


def _prepare(*ops: Operator):
    fact = ops[0].fact
    for op in ops[1:]:
        op._check(ops[0])
    _require_qubits(fact)
    exact = all(op.is_exact for op in ops)
    entries = [op.entries if exact else op.to_numpy() for op in ops]
    return fact, _Kernel(fact.n, exact), entries


def error_trace(M: Operator, err: PauliError):
    """``Tr(M E)`` for a single error."""
    fact, k, (m,) = _prepare(M)
    if err.n != fact.n:
        raise ContractError(f"error on {err.n} qubits applied to {fact.n}-qubit operator")
    return k.tr_ME(m, err)


def expand_in_errors(M: Operator) -> dict[PauliError, object]:
    """Coefficients ``c_E = 2^-n Tr(M E)`` so that ``M = Σ c_E E``."""
    fact, k, (m,) = _prepare(M)
    scale = Fraction(1, 2 ** fact.n) if k.exact else 2.0 ** -fact.n
    return {e: _clean(k.tr_ME(m, e) * scale, k.exact) for e in all_errors(fact.n)}


def reconstruct(coeffs: dict[PauliError, object], n: int, exact: bool = True) -> Operator:
    """``Σ c_E E`` for an expansion returned by :func:`expand_in_errors`."""
    fact = Factorization.qubits(n)
    out = None
    for e, c in coeffs.items():
        if c == 0:
            continue
        term = e.matrix(exact) * c
        out = term if out is None else out + term
    if out is None:
        out = Operator(fact, GaussianRationalArray.zeros((1 << n, 1 << n))) if exact else Operator(
            fact, np.zeros((1 << n, 1 << n), dtype=complex)
        )
    return out


def pauli_enum_A(M1: Operator, M2: Operator, S):
    """``A_S = Σ_{supp E = S} Tr(M1 E) Tr(M2 E)``."""
    fact, k, (m1, m2) = _prepare(M1, M2)
    mask = as_mask(S, fact.n)
    return sum((k.tr_ME(m1, e) * k.tr_ME(m2, e) for e in errors_with_support(fact.n, mask)), 0)


def pauli_enum_B(M1: Operator, M2: Operator, S):
    """``B_S = Σ_{supp E = S} Tr(M1 E M2 E)``."""
    fact, k, (m1, m2) = _prepare(M1, M2)
    mask = as_mask(S, fact.n)
    return sum((k.tr_MEME(m1, m2, e) for e in errors_with_support(fact.n, mask)), 0)


def pauli_subset_tables(M1: Operator, M2: Operator) -> tuple[dict[int, object], dict[int, object]]:
    """``(A_S, B_S)`` for every subset ``S`` by one sweep over all ``4^n`` errors."""
    fact, k, (m1, m2) = _prepare(M1, M2)
    n = fact.n
    A: dict[int, object] = {}
    B: dict[int, object] = {}
    for mask in all_subsets(n):
        a = b = 0
        for e in errors_with_support(n, mask):
            a = a + k.tr_ME(m1, e) * k.tr_ME(m2, e)
            b = b + k.tr_MEME(m1, m2, e)
        A[mask], B[mask] = a, b
    return A, B


def pauli_weight_enumerators(M1: Operator, M2: Operator) -> tuple[list, list]:
    """Shor-Laflamme weight distributions ``(A_d, B_d)``, d = 0..n, via the error sum."""
    A, B = pauli_subset_tables(M1, M2)
    n = M1.n
    a = [0] * (n + 1)
    b = [0] * (n + 1)
    for mask in A:
        w = mask.bit_count()
        a[w] = a[w] + A[mask]
        b[w] = b[w] + B[mask]
    return a, b
