"""Tensor-factored Hilbert spaces, subset masks and the operator algebra.

Factor ``i`` (1-based, as in the enumerator formulas) occupies bit ``i-1`` of a
subset mask.  Basis states are encoded row-major with factor 1 the most
significant digit, so an operator on ``V`` reshapes to a tensor with axes
``(d_1, ..., d_n, d_1, ..., d_n)``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractError, DimensionMismatchError, MalformedSubsetError
from .gaussian import GaussianRational, GaussianRationalArray

TOL = 1e-9

EXACT = "exact"
FLOAT = "float"


# ---------------------------------------------------------------------------
# factorizations and subsets


@dataclass(frozen=True)
class Factorization:
    """Ordered subsystem dimensions ``D_1 .. D_n`` of ``V = V_1 ⊗ ... ⊗ V_n``.

    The empty factorization describes the one-dimensional space left after
    tracing out every factor.
    """

    dims: tuple[int, ...]

    def __init__(self, dims: Iterable[int]):
        dims = tuple(int(d) for d in dims)
        if any(d < 2 for d in dims):
            raise ContractError(f"subsystem dimensions must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def qubits(cls, n: int) -> "Factorization":
        return cls((2,) * n)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def dim_of(self, S) -> int:
        """``dim(V_S)``; 1 for the empty subset."""
        mask = as_mask(S, self.n)
        return math.prod(d for i, d in enumerate(self.dims) if mask >> i & 1)

    def restrict(self, S) -> "Factorization":
        mask = as_mask(S, self.n)
        return Factorization(d for i, d in enumerate(self.dims) if mask >> i & 1)

    def is_uniform(self) -> bool:
        return len(set(self.dims)) <= 1

    def __repr__(self):
        return f"Factorization({list(self.dims)})"


def as_mask(S, n: int) -> int:
    """Canonical bitmask of ``S``, given as a mask or an iterable of 1-based indices."""
    if isinstance(S, (int, np.integer)) and not isinstance(S, bool):
        mask = int(S)
        if mask < 0 or mask >> n:
            raise MalformedSubsetError(f"mask {mask:#b} does not fit {n} factors")
        return mask
    mask = 0
    try:
        items = list(S)
    except TypeError:
        raise MalformedSubsetError(f"cannot interpret {S!r} as a subset") from None
    for i in items:
        if not isinstance(i, (int, np.integer)) or not 1 <= i <= n:
            raise MalformedSubsetError(f"factor index {i!r} outside 1..{n}")
        bit = 1 << (int(i) - 1)
        if mask & bit:
            raise MalformedSubsetError(f"factor {i} listed twice")
        mask |= bit
    return mask


def members(mask: int) -> tuple[int, ...]:
    """Sorted 1-based factor indices in ``mask``."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return mask.bit_count()


def complement(mask: int, n: int) -> int:
    return ((1 << n) - 1) & ~mask


def subsets_of_size(n: int, k: int) -> list[int]:
    return sorted(sum(1 << i for i in c) for c in combinations(range(n), k))


def all_subsets(n: int) -> list[int]:
    """Every subset of ``{1..n}``, by popcount then numeric value."""
    return sorted(range(1 << n), key=lambda m: (m.bit_count(), m))


def submasks(mask: int) -> list[int]:
    """Every ``T ⊆ mask``, by popcount then numeric value."""
    out = []
    sub = mask
    while True:
        out.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & mask
    return sorted(out, key=lambda m: (m.bit_count(), m))


def _axes(mask: int, n: int) -> tuple[list[int], list[int]]:
    inside = [i for i in range(n) if mask >> i & 1]
    outside = [i for i in range(n) if not mask >> i & 1]
    return inside, outside


# ---------------------------------------------------------------------------
# operators


def _is_exact_array(a) -> bool:
    return isinstance(a, GaussianRationalArray)


@dataclass(frozen=True, eq=False)
class Operator:
    """A square matrix on a factorized space, exact or float.

    ``entries`` is a complex ndarray (float backend) or a
    :class:`GaussianRationalArray` (exact backend).
    """

    fact: Factorization
    entries: object

    def __post_init__(self):
        shape = self.entries.shape
        d = self.fact.total_dim
        if shape != (d, d):
            raise DimensionMismatchError(f"operator of shape {shape} on a space of dimension {d}")

    # ---- constructors ------------------------------------------------
    @classmethod
    def from_array(cls, a, dims) -> "Operator":
        fact = dims if isinstance(dims, Factorization) else Factorization(dims)
        if _is_exact_array(a):
            return cls(fact, a)
        a = np.asarray(a)
        if a.dtype == object:
            return cls(fact, GaussianRationalArray.from_numbers(a))
        return cls(fact, np.array(a, dtype=complex))

    @classmethod
    def exact(cls, values, dims) -> "Operator":
        return cls.from_array(GaussianRationalArray.from_numbers(values), dims)

    @classmethod
    def identity(cls, dims, exact: bool = True) -> "Operator":
        fact = dims if isinstance(dims, Factorization) else Factorization(dims)
        d = fact.total_dim
        if exact:
            return cls(fact, GaussianRationalArray.identity(d))
        return cls(fact, np.eye(d, dtype=complex))

    @classmethod
    def scalar(cls, value) -> "Operator":
        """A 1x1 operator on the trivial space."""
        if isinstance(value, (int, Rational, GaussianRational)):
            return cls(Factorization(()), GaussianRationalArray.from_numbers([[value]]))
        return cls(Factorization(()), np.array([[value]], dtype=complex))

    # ---- properties ----------------------------------------------------
    @property
    def backend(self) -> str:
        return EXACT if _is_exact_array(self.entries) else FLOAT

    @property
    def is_exact(self) -> bool:
        return _is_exact_array(self.entries)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.fact.dims

    @property
    def n(self) -> int:
        return self.fact.n

    @property
    def dim(self) -> int:
        return self.fact.total_dim

    # ---- conversions ---------------------------------------------------
    def to_float(self) -> "Operator":
        if self.is_exact:
            return Operator(self.fact, self.entries.to_complex())
        return self

    def to_exact(self, max_denominator: int | None = None) -> "Operator":
        if self.is_exact:
            return self
        return Operator(self.fact, GaussianRationalArray.from_complex(self.entries, max_denominator))

    def to_numpy(self) -> np.ndarray:
        return self.to_float().entries

    # ---- algebra -------------------------------------------------------
    def _check(self, other: "Operator"):
        if self.fact != other.fact:
            raise DimensionMismatchError(f"factorizations differ: {self.fact} vs {other.fact}")

    def _pair(self, other: "Operator"):
        self._check(other)
        a, b = self.entries, other.entries
        if _is_exact_array(a) != _is_exact_array(b):
            a, b = self.to_float().entries, other.to_float().entries
        return a, b

    def __matmul__(self, other: "Operator") -> "Operator":
        a, b = self._pair(other)
        return Operator(self.fact, a @ b)

    def __add__(self, other: "Operator") -> "Operator":
        a, b = self._pair(other)
        return Operator(self.fact, a + b)

    def __sub__(self, other: "Operator") -> "Operator":
        a, b = self._pair(other)
        return Operator(self.fact, a - b)

    def __neg__(self) -> "Operator":
        return Operator(self.fact, -self.entries)

    def __mul__(self, c) -> "Operator":
        if isinstance(c, Operator):
            return NotImplemented
        if self.is_exact and isinstance(c, (float, complex)):
            return Operator(self.fact, self.entries.to_complex() * c)
        if not self.is_exact and isinstance(c, (Fraction, GaussianRational)):
            c = complex(c)
        return Operator(self.fact, self.entries * c)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "Operator":
        if self.is_exact and isinstance(c, (int, Rational, GaussianRational)):
            return Operator(self.fact, self.entries / c)
        return self * (1.0 / complex(c))

    def dagger(self) -> "Operator":
        return Operator(self.fact, self.entries.conj().T)

    def trace(self):
        t = self.entries.trace()
        return t if self.is_exact else complex(t)

    # ---- predicates ----------------------------------------------------
    def equals(self, other: "Operator", tol: float = TOL) -> bool:
        if self.fact != other.fact:
            return False
        if self.is_exact and other.is_exact:
            return self.entries.array_equal(other.entries)
        return bool(np.max(np.abs(self.to_numpy() - other.to_numpy()), initial=0.0) <= tol)

    def is_hermitian(self, tol: float = TOL) -> bool:
        return self.equals(self.dagger(), tol)

    def is_projector(self, tol: float = TOL) -> bool:
        return self.is_hermitian(tol) and self.equals(self @ self, tol)

    def rank(self, tol: float = 1e-7) -> int:
        return int(np.linalg.matrix_rank(self.to_numpy(), tol=tol))

    def __repr__(self):
        return f"Operator(dims={list(self.dims)}, backend={self.backend})"


def trace_product(a: Operator, b: Operator):
    """``Tr(a b)`` without forming the product."""
    x, y = a._pair(b)
    t = (x * y.T).sum()
    return t if _is_exact_array(x) else complex(t)


def partial_trace(M: Operator, S) -> Operator:
    """``Tr_S(M)``: trace out the factors in ``S``, leaving an operator on ``V_{S^c}``."""
    fact = M.fact
    n = fact.n
    mask = as_mask(S, n)
    if mask == 0:
        return M
    drop, keep = _axes(mask, n)
    dims = fact.dims
    dk = math.prod(dims[i] for i in keep)
    ds = math.prod(dims[i] for i in drop)
    perm = keep + drop + [n + i for i in keep] + [n + i for i in drop]
    t = M.entries.reshape(dims + dims).transpose(tuple(perm)).reshape((dk, ds, dk, ds))
    out = t.trace(axis1=1, axis2=3)
    return Operator(fact.restrict(complement(mask, n)), out)


def reduce_to(M: Operator, S) -> Operator:
    """``Tr_{S^c}(M)``, the operator on ``V_S``."""
    mask = as_mask(S, M.n)
    return partial_trace(M, complement(mask, M.n))


def _embed_array(a, fact: Factorization, mask: int):
    """Place ``a`` (shape ``(..., dS, dS)``) on ``V_S ⊗ 1_{S^c}``, factors in order."""
    n = fact.n
    inside, outside = _axes(mask, n)
    dims = fact.dims
    ds_dims = [dims[i] for i in inside]
    dc_dims = [dims[i] for i in outside]
    dc = math.prod(dc_dims)
    exact = _is_exact_array(a)
    batch = a.shape[:-2]
    nb = len(batch)
    ident = GaussianRationalArray.identity(dc) if exact else np.eye(dc, dtype=complex)
    a_t = a.reshape(tuple(batch) + tuple(ds_dims) * 2)
    i_t = ident.reshape(tuple(dc_dims) * 2)
    t = a_t.outer(i_t) if exact else np.multiply.outer(a_t, i_t)
    # current axis layout: batch, S rows, S cols, C rows, C cols
    k, m = len(inside), len(outside)
    pos = {}
    for j, i in enumerate(inside):
        pos[("r", i)] = nb + j
        pos[("c", i)] = nb + k + j
    for j, i in enumerate(outside):
        pos[("r", i)] = nb + 2 * k + j
        pos[("c", i)] = nb + 2 * k + m + j
    perm = list(range(nb)) + [pos[("r", i)] for i in range(n)] + [pos[("c", i)] for i in range(n)]
    d = fact.total_dim
    return t.transpose(tuple(perm)).reshape(tuple(batch) + (d, d))


def tensor_embed(M_S: Operator, S, fact: Factorization) -> Operator:
    """``M_S ⊗ 1_{S^c}`` on ``V`` with factor ordering restored."""
    mask = as_mask(S, fact.n)
    expected = fact.restrict(mask)
    if M_S.fact.dims != expected.dims:
        raise DimensionMismatchError(
            f"operator on dims {list(M_S.dims)} cannot act on factors {list(members(mask))} "
            f"with dims {list(expected.dims)}"
        )
    return Operator(fact, _embed_array(M_S.entries, fact, mask))


def _check_perm(perm, n: int) -> list[int]:
    p = [int(i) for i in perm]
    if sorted(p) != list(range(1, n + 1)):
        raise MalformedSubsetError(f"{perm!r} is not a permutation of 1..{n}")
    return [i - 1 for i in p]


def permute_factors(M: Operator, perm) -> Operator:
    """Reorder tensor factors: new factor ``j`` is old factor ``perm[j-1]`` (1-based)."""
    n = M.n
    p = _check_perm(perm, n)
    dims = M.dims
    t = M.entries.reshape(tuple(dims) * 2).transpose(tuple(p + [n + i for i in p]))
    new = Factorization(dims[i] for i in p)
    return Operator(new, t.reshape((new.total_dim, new.total_dim)))


def permute_vectors(vectors: np.ndarray, fact: Factorization, perm) -> tuple[np.ndarray, Factorization]:
    """Column vectors ``(N, K)`` with factors reordered as in :func:`permute_factors`."""
    p = _check_perm(perm, fact.n)
    k = vectors.shape[1]
    t = vectors.T.reshape(k, *fact.dims).transpose(0, *[1 + i for i in p])
    new = Factorization(fact.dims[i] for i in p)
    return t.reshape(k, new.total_dim).T.copy(), new


# ---------------------------------------------------------------------------
# rank-factored kernels


def _split(vectors: np.ndarray, fact: Factorization, mask: int) -> np.ndarray:
    """Reshape column vectors ``(N, K)`` into ``(K, dim(V_S), dim(V_{S^c}))``."""
    n = fact.n
    inside, outside = _axes(mask, n)
    k = vectors.shape[1]
    ds = fact.dim_of(mask)
    t = vectors.T.reshape(k, *fact.dims).transpose(0, *[1 + i for i in inside + outside])
    return t.reshape(k, ds, fact.total_dim // ds)


def gram_contraction(v, w, fact: Factorization, S) -> float:
    """``Tr(Tr_S(v v†) Tr_S(w w†))`` without any ``dim(V)``-sized matrix.

    With ``v, w`` reshaped to ``dim(V_S) x dim(V_{S^c})`` arrays this is the
    squared Frobenius norm of the cross-Gram ``v w†``; when ``S^c`` is the
    smaller side the equivalent ``Tr(G_v G_w)`` with ``G = vᵀ v̄`` is used.
    """
    v = np.asarray(v, dtype=complex).reshape(-1)
    w = np.asarray(w, dtype=complex).reshape(-1)
    if v.shape[0] != fact.total_dim or w.shape[0] != fact.total_dim:
        raise DimensionMismatchError(
            f"vectors of length {v.shape[0]}, {w.shape[0]} on a space of dimension {fact.total_dim}"
        )
    mask = as_mask(S, fact.n)
    V = _split(v[:, None], fact, mask)[0]
    W = _split(w[:, None], fact, mask)[0]
    ds, dc = V.shape
    if ds <= dc:
        m = V @ W.conj().T
        return float(np.sum(m.real ** 2 + m.imag ** 2))
    gv = V.T @ V.conj()
    gw = W.T @ W.conj()
    return float(np.sum(gv * gw.T).real)


def factored_trace_square(vectors: np.ndarray, fact: Factorization, S) -> float:
    """``Tr(Tr_S(P)^2)`` for ``P = Σ_k v_k v_k†`` given as columns of ``vectors``.

    Equal to ``Σ_{j,k} gram_contraction(v_j, v_k, S)``; evaluated on whichever
    side of the cut is cheaper.
    """
    mask = as_mask(S, fact.n)
    X = _split(np.asarray(vectors, dtype=complex), fact, mask)
    k, ds, dc = X.shape
    if dc <= k * ds:
        r = np.einsum("ksc,ksd->cd", X, X.conj())
        return float(np.sum(r.real ** 2 + r.imag ** 2))
    Y = X.reshape(k * ds, dc)
    g = Y @ Y.conj().T
    return float(np.sum(g.real ** 2 + g.imag ** 2))


# ---------------------------------------------------------------------------
# codes


@dataclass(frozen=True, eq=False)
class CodeStates:
    """A code given by ``K`` orthonormal codewords (columns of ``vectors``).

    ``exact_projector`` optionally carries the exact projector onto the span,
    available for stabilizer-derived codes; it lets enumerators stay exact
    even though normalized codewords are generally irrational.
    """

    fact: Factorization
    vectors: np.ndarray
    exact_projector: Operator | None = field(default=None)

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=complex)
        if v.ndim == 1:
            v = v[:, None]
        object.__setattr__(self, "vectors", v)
        if v.shape[0] != self.fact.total_dim:
            raise DimensionMismatchError(
                f"codewords of length {v.shape[0]} on a space of dimension {self.fact.total_dim}"
            )
        if v.shape[1] < 1:
            raise ContractError("a code needs at least one codeword")
        gram = v.conj().T @ v
        if np.max(np.abs(gram - np.eye(v.shape[1]))) > TOL:
            raise ContractError("codewords are not orthonormal")
        if self.exact_projector is not None:
            P = self.exact_projector
            if P.fact != self.fact or P.trace() != v.shape[1]:
                raise ContractError("exact projector does not match the codewords")

    @property
    def K(self) -> int:
        return self.vectors.shape[1]

    @property
    def n(self) -> int:
        return self.fact.n

    @property
    def dims(self) -> tuple[int, ...]:
        return self.fact.dims

    def projector(self, exact: bool = True) -> Operator:
        if exact and self.exact_projector is not None:
            return self.exact_projector
        v = self.vectors
        return Operator(self.fact, v @ v.conj().T)

    @classmethod
    def from_projector(cls, P: Operator, method: str = "columns") -> "CodeStates":
        """Orthonormal codewords spanning the range of projector ``P``.

        ``method="columns"`` runs Gram-Schmidt over the columns of ``P`` in basis
        order, giving a canonical basis; ``method="eigh"`` takes eigenvectors
        with eigenvalue above 1/2.
        """
        a = P.to_numpy()
        if not Operator(P.fact, a).is_projector(tol=1e-8):
            raise ContractError("operator is not an orthogonal projector")
        if method == "eigh":
            w, u = np.linalg.eigh(a)
            vecs = u[:, w > 0.5]
        elif method == "columns":
            vecs = _column_basis(a)
        else:
            raise ValueError(f"unknown method {method!r}")
        K = vecs.shape[1]
        if abs(complex(P.trace()) - K) > 1e-7:
            raise ContractError(f"projector trace {P.trace()} does not match rank {K}")
        return cls(P.fact, vecs, P if P.is_exact else None)

    @classmethod
    def from_state(cls, v, dims) -> "CodeStates":
        fact = dims if isinstance(dims, Factorization) else Factorization(dims)
        v = np.asarray(v, dtype=complex).reshape(-1)
        return cls(fact, (v / np.linalg.norm(v))[:, None])

    def __repr__(self):
        return f"CodeStates(dims={list(self.dims)}, K={self.K})"


def _column_basis(a: np.ndarray, tol: float = 1e-7) -> np.ndarray:
    basis: list[np.ndarray] = []
    for j in range(a.shape[1]):
        c = a[:, j].copy()
        for b in basis:
            c -= (b.conj() @ c) * b
        for b in basis:
            c -= (b.conj() @ c) * b
        nrm = np.linalg.norm(c)
        if nrm > tol:
            # fix the global phase so the first sizeable entry is real positive
            idx = np.flatnonzero(np.abs(c) > tol)[0]
            c = c * (abs(c[idx]) / c[idx]) / nrm
            basis.append(c)
    if not basis:
        return np.zeros((a.shape[0], 0), dtype=complex)
    return np.stack(basis, axis=1)


# ---------------------------------------------------------------------------
# execution helpers


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("QENUM_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items: Sequence) -> list:
    """``[fn(x) for x in items]``, spread over ``QENUM_THREADS`` worker threads."""
    workers = thread_count()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
