"""Random unitaries, operators and projectors for oracles and property tests."""

from __future__ import annotations

import numpy as np

from .gaussian import GaussianRationalArray
from .hilbert import Factorization, Operator, tensor_embed


def _rng(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def ginibre(d: int, rng, size: tuple[int, ...] = ()) -> np.ndarray:
    rng = _rng(rng)
    shape = (*size, d, d)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def haar_unitary(d: int, rng=None, size: tuple[int, ...] = ()) -> np.ndarray:
    """Haar-distributed ``d x d`` unitaries: QR of a Ginibre matrix with R's diagonal phases removed."""
    z = ginibre(d, rng, size)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phases = diag / np.abs(diag)
    return q * phases[..., None, :]


def random_operator(fact: Factorization, rng=None) -> Operator:
    rng = _rng(rng)
    return Operator(fact, ginibre(fact.total_dim, rng))


def random_hermitian(fact: Factorization, rng=None) -> Operator:
    g = ginibre(fact.total_dim, _rng(rng))
    return Operator(fact, (g + g.conj().T) / 2)


def random_psd(fact: Factorization, rng=None, rank: int | None = None) -> Operator:
    """``G G†`` with ``G`` complex Gaussian of ``rank`` columns (uniform in 1..dim when omitted)."""
    rng = _rng(rng)
    d = fact.total_dim
    if rank is None:
        rank = int(rng.integers(1, d + 1))
    g = (rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))) / np.sqrt(2)
    return Operator(fact, g @ g.conj().T)


def random_projector(fact: Factorization, rng=None, rank: int | None = None) -> Operator:
    rng = _rng(rng)
    d = fact.total_dim
    if rank is None:
        rank = int(rng.integers(1, d + 1))
    u = haar_unitary(d, rng)[:, :rank]
    return Operator(fact, u @ u.conj().T)


def random_isometry(d_out: int, d_in: int, rng=None) -> np.ndarray:
    return haar_unitary(d_out, rng)[:, :d_in]


def random_gaussian_integers(shape, rng=None, bound: int = 3) -> GaussianRationalArray:
    rng = _rng(rng)
    re = rng.integers(-bound, bound + 1, size=shape)
    im = rng.integers(-bound, bound + 1, size=shape)
    return GaussianRationalArray(re, im)


def random_exact_operator(fact: Factorization, rng=None, bound: int = 3, hermitian: bool = False) -> Operator:
    a = random_gaussian_integers((fact.total_dim, fact.total_dim), rng, bound)
    if hermitian:
        a = a + a.conj().T
    return Operator(fact, a)


def exact_projector(columns: GaussianRationalArray, fact: Factorization) -> Operator:
    """Exact orthogonal projector onto the span of ``columns`` (shape ``(dim, m)``).

    Gram-Schmidt without normalization keeps every vector in ``Q(i)^dim``,
    so ``P = Σ u u† / (u† u)`` is exact.
    """
    d = fact.total_dim
    basis: list[tuple[GaussianRationalArray, object]] = []
    for j in range(columns.shape[1]):
        u = columns[:, j].reshape(d, 1)
        for b, bb in basis:
            u = u - b * ((b.conj() * u).sum() / bb)
        norm2 = (u.conj() * u).sum()
        if norm2 != 0:
            basis.append((u, norm2))
    P = GaussianRationalArray.zeros((d, d))
    for u, norm2 in basis:
        P = P + (u @ u.conj().T) / norm2
    return Operator(fact, P)


def random_exact_projector(fact: Factorization, rng=None, rank: int | None = None, bound: int = 2) -> Operator:
    rng = _rng(rng)
    d = fact.total_dim
    if rank is None:
        rank = int(rng.integers(1, d + 1))
    while True:
        P = exact_projector(random_gaussian_integers((d, rank), rng, bound), fact)
        if P.trace() == rank:
            return P


def random_local_unitary(fact: Factorization, rng=None) -> np.ndarray:
    """A tensor product of independent Haar unitaries, one per factor."""
    rng = _rng(rng)
    u = np.ones((1, 1), dtype=complex)
    for d in fact.dims:
        u = np.kron(u, haar_unitary(d, rng))
    return u


def single_factor_unitary(fact: Factorization, factor: int, rng=None) -> np.ndarray:
    """Haar unitary on factor ``factor`` (1-based), identity elsewhere."""
    u = haar_unitary(fact.dims[factor - 1], _rng(rng))
    return tensor_embed(Operator(fact.restrict([factor]), u), [factor], fact).entries
