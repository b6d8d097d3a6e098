"""Shortening, one-factor extension, and concatenation of codes.

Shortening and extension act on factor 1; callers wanting another factor pass
``factor=`` and the code is permuted so that factor comes first.  Each
construction checks the identities its correctness rests on and raises
:class:`ConsistencyError` rather than return a silently wrong code.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .analysis import certify_distance, check_purity, saturated
from .enumerators import subset_to_weight, unitary_tables
from .errors import ConsistencyError, DimensionMismatchError, PreconditionError
from .hilbert import (
    TOL,
    CodeStates,
    Factorization,
    all_subsets,
    partial_trace,
    permute_factors,
    permute_vectors,
)


@dataclass(frozen=True)
class CodeParams:
    """``((n, K, d))`` with block size ``D`` (``None`` for mixed dimensions)."""

    n: int
    K: int
    d: int
    D: int | None

    def __post_init__(self):
        if self.D is not None and not 1 <= self.K <= self.D ** self.n:
            raise PreconditionError(f"K={self.K} outside 1..D^n")
        if not 1 <= self.d <= max(self.n, 1):
            raise PreconditionError(f"d={self.d} outside 1..n")

    def __str__(self):
        return f"(({self.n},{self.K},{self.d}))"


def code_params(C: CodeStates) -> CodeParams:
    D = C.dims[0] if C.fact.is_uniform() and C.n else None
    return CodeParams(C.n, C.K, certify_distance(C).d, D)


def move_to_front(C: CodeStates, factor: int) -> CodeStates:
    """The same code with ``factor`` (1-based) relabelled as factor 1."""
    if factor == 1:
        return C
    perm = [factor] + [i for i in range(1, C.n + 1) if i != factor]
    vecs, fact = permute_vectors(C.vectors, C.fact, perm)
    P = C.exact_projector
    return CodeStates(fact, vecs, None if P is None else permute_factors(P, perm))


def _close(x, y, tol=TOL) -> bool:
    return saturated(x, y, tol)


# ---------------------------------------------------------------------------


def shorten(C: CodeStates, factor: int = 1, tol: float = TOL) -> CodeStates:
    """Pure ``((n, K, d))`` to pure ``((n-1, DK, d-1))`` with projector ``D·Tr_1(P)``."""
    if C.n < 2:
        raise PreconditionError("shortening needs at least two factors")
    C = move_to_front(C, factor)
    cert = certify_distance(C, tol=tol)
    d = cert.d
    if d < 2:
        raise PreconditionError(f"shortening needs distance >= 2, got {d}")
    if not check_purity(C, d, tol):
        raise PreconditionError("shortening needs a pure code")

    D, K, n = C.dims[0], C.K, C.n
    P = C.projector(exact=True)
    Pp = partial_trace(P, 1) * D
    tr = Pp.trace()
    tr2 = (Pp @ Pp).trace()
    if not (_close(tr, D * K, tol) and _close(tr2, D * K, tol)):
        raise ConsistencyError(f"D·Tr_1(P) is not a projector: Tr = {tr}, Tr(P'^2) = {tr2}")

    # B'_R(P) = K D^{-|R|} for every R containing factor 1 with |R| <= d-1
    exact = P.is_exact
    for R in all_subsets(n):
        if not R & 1 or R.bit_count() > d - 1:
            continue
        got = (partial_trace(P, R) @ partial_trace(P, R)).trace()
        want = Fraction(K, D ** R.bit_count()) if exact else K / D ** R.bit_count()
        if not _close(got, want, tol):
            raise ConsistencyError(f"B'_R = {got} for R = {R:b}, expected {want}")

    out = CodeStates.from_projector(Pp, method="eigh")
    if out.K != D * K:
        raise ConsistencyError(f"shortened code has dimension {out.K}, expected {D * K}")
    new = certify_distance(out, tol=tol)
    if new.d < d - 1 or not check_purity(out, new.d, tol):
        raise ConsistencyError(f"shortened code certifies d={new.d}, pure={check_purity(out, new.d, tol)}")
    return out


def extend(C: CodeStates, basis: np.ndarray | None = None, tol: float = TOL) -> CodeStates:
    """Rank-``D`` code on ``n`` factors to the state ``Σ_i D^{-1/2} w_i ⊗ v_i`` on ``n+1``.

    The new factor has dimension ``D = K`` and comes first; ``w_i`` are the
    columns of ``basis`` (standard basis by default).  The result is checked
    against ``D·Tr_1(P') = P`` and the enumerator identity
    ``A'_{R}(C') = D^{-2} A'_R(C)``, ``A'_{{1}∪R}(C') = D^{-2} B'_R(C)``
    for ``R`` inside the old factors, which sums to the weight form
    ``A'_i(C') = D^{-2}(A'_i(C) + B'_{i-1}(C))``.
    """
    D = C.K
    if D < 2:
        raise PreconditionError("extension needs a code of rank K = D >= 2")
    W = np.eye(D, dtype=complex) if basis is None else np.asarray(basis, dtype=complex)
    if W.shape != (D, D) or np.max(np.abs(W.conj().T @ W - np.eye(D))) > 1e-9:
        raise PreconditionError(f"basis for the new factor must be a {D}x{D} unitary")
    v = np.einsum("ai,ni->an", W, C.vectors).reshape(-1) / np.sqrt(D)
    fact = Factorization((D, *C.dims))
    out = CodeStates(fact, v[:, None])

    P = C.projector(exact=False)
    Pp = out.projector(exact=False)
    if not (partial_trace(Pp, 1) * D).equals(P, tol):
        raise ConsistencyError("D·Tr_1(P') differs from P")

    ap_old, bp_old = unitary_tables(P, P)
    ap_new, _ = unitary_tables(Pp, Pp)
    n = C.n
    for R in all_subsets(n):
        lhs0, rhs0 = ap_new[R << 1], ap_old[R] / D ** 2
        lhs1, rhs1 = ap_new[(R << 1) | 1], bp_old[R] / D ** 2
        if not (_close(lhs0, rhs0, tol) and _close(lhs1, rhs1, tol)):
            raise ConsistencyError(f"extension enumerator identity fails at R = {R:b}")
    return out


def extension_weight_identity(C: CodeStates, Cext: CodeStates) -> list[tuple[complex, complex]]:
    """Pairs ``(A'_i(C'), D^{-2}(A'_i(C) + B'_{i-1}(C)))`` for ``i = 0..n+1`` (uniform dims)."""
    D = C.K
    P = C.projector(exact=False)
    ap, bp = unitary_tables(P, P)
    a = subset_to_weight(ap).coeffs + [0]
    b = [0] + subset_to_weight(bp).coeffs
    Pp = Cext.projector(exact=False)
    new = subset_to_weight(unitary_tables(Pp, Pp)[0]).coeffs
    return [(new[i], (a[i] + b[i]) / D ** 2) for i in range(C.n + 2)]


def concatenate(C1: CodeStates, encoder: np.ndarray, n2: int, D2: int = 2) -> CodeStates:
    """Encode every factor of ``C1`` with the isometry ``encoder`` (``D2^n2 x D1``).

    Factor ``i`` of the outer code becomes factors ``(i-1)·n2+1 .. i·n2``.
    """
    E = np.asarray(encoder, dtype=complex)
    N2 = D2 ** n2
    if E.ndim != 2 or E.shape[0] != N2:
        raise DimensionMismatchError(f"encoder has shape {E.shape}, expected ({N2}, D1)")
    D1 = E.shape[1]
    if any(d != D1 for d in C1.dims):
        raise DimensionMismatchError(f"outer factors {list(C1.dims)} do not match encoder input {D1}")
    if np.max(np.abs(E.conj().T @ E - np.eye(D1))) > 1e-9:
        raise PreconditionError("encoder is not an isometry")

    n1, K = C1.n, C1.K
    t = C1.vectors.T.reshape(K, *([D1] * n1))
    for j in range(n1):
        t = np.moveaxis(np.tensordot(E, t, axes=([1], [j + 1])), 0, j + 1)
    vecs = t.reshape(K, N2 ** n1).T
    return CodeStates(Factorization([D2] * (n1 * n2)), vecs)

