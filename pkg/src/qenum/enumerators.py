"""Subset and weight enumerators for codes on arbitrary tensor factorizations.

Unitary enumerators come straight from partial traces:

    A'_S(M, N) = Tr(Tr_{S^c} M · Tr_{S^c} N)
    B'_S(M, N) = Tr(Tr_S M · Tr_S N)

The Shor-Laflamme pair generalizes through the averaging projections
``M'_S = Tr_{S^c}(M) ⊗ 1 / dim(V_{S^c})`` and their Möbius differences
``M_S``: ``A_S = dim(V) Tr(M_S N_S)``, while ``B_S`` is obtained from ``B'`` by
Möbius inversion over the subset lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ContractError, DimensionMismatchError, UnsupportedDimensionError
from .hilbert import (
    TOL,
    CodeStates,
    Factorization,
    Operator,
    _embed_array,
    all_subsets,
    as_mask,
    complement,
    factored_trace_square,
    parallel_map,
    partial_trace,
    reduce_to,
    submasks,
    tensor_embed,
    trace_product,
)

A, B, AP, BP = "A", "B", "A'", "B'"
KINDS = (A, B, AP, BP)
_ALIASES = {"Ap": AP, "Bp": BP, "A_prime": AP, "B_prime": BP}


def _kind(kind: str) -> str:
    kind = _ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise ContractError(f"unknown enumerator kind {kind!r}")
    return kind


def _check_pair(M1: Operator, M2: Operator):
    if M1.fact != M2.fact:
        raise DimensionMismatchError(f"factorizations differ: {M1.fact} vs {M2.fact}")


def _exactify(x, exact: bool):
    if exact:
        return x
    return complex(x)


@dataclass
class SubsetEnumTable:
    """Enumerator values indexed by subset mask."""

    fact: Factorization
    kind: str
    values: dict[int, object] = field(default_factory=dict)

    def __getitem__(self, S):
        return self.values[as_mask(S, self.fact.n)]

    def __len__(self):
        return len(self.values)

    def items(self):
        """``(mask, value)`` pairs by popcount, then numeric mask."""
        for m in sorted(self.values, key=lambda m: (m.bit_count(), m)):
            yield m, self.values[m]

    def to_weights(self) -> "WeightDistribution":
        return subset_to_weight(self)


@dataclass
class WeightDistribution:
    """``coeffs[d] = Σ_{|S|=d}`` of the subset values."""

    kind: str
    coeffs: list

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, d):
        return self.coeffs[d]

    def __len__(self):
        return len(self.coeffs)


def subset_to_weight(table: SubsetEnumTable) -> WeightDistribution:
    if not table.fact.is_uniform():
        raise UnsupportedDimensionError(
            f"weight aggregation needs equal subsystem dimensions, got {list(table.fact.dims)}"
        )
    n = table.fact.n
    coeffs = [0] * (n + 1)
    for m, v in table.items():
        coeffs[m.bit_count()] = coeffs[m.bit_count()] + v
    return WeightDistribution(table.kind, coeffs)


# ---------------------------------------------------------------------------
# unitary enumerators


def unitary_enum_subset(M1: Operator, M2: Operator, S, kind: str = AP):
    """``A'_S`` or ``B'_S`` by partial traces."""
    _check_pair(M1, M2)
    kind = _kind(kind)
    mask = as_mask(S, M1.n)
    if kind == AP:
        return trace_product(reduce_to(M1, mask), reduce_to(M2, mask))
    if kind == BP:
        return trace_product(partial_trace(M1, mask), partial_trace(M2, mask))
    raise ContractError(f"{kind} is not a unitary enumerator")


def unitary_enum_subset_factored(C: CodeStates, S, kind: str = AP) -> float:
    """``A'_S(P,P)`` or ``B'_S(P,P)`` for ``P = Σ v v†`` from the codewords alone."""
    kind = _kind(kind)
    mask = as_mask(S, C.n)
    if kind == AP:
        return factored_trace_square(C.vectors, C.fact, complement(mask, C.n))
    if kind == BP:
        return factored_trace_square(C.vectors, C.fact, mask)
    raise ContractError(f"{kind} is not a unitary enumerator")


def unitary_tables(M1: Operator, M2: Operator) -> tuple[SubsetEnumTable, SubsetEnumTable]:
    """``A'`` and ``B'`` over all subsets; ``B'_S`` is read off as ``A'_{S^c}``."""
    _check_pair(M1, M2)
    fact = M1.fact
    n = fact.n
    masks = all_subsets(n)
    # reduce onto the smaller side of each cut; A'_S and B'_{S^c} are the same trace
    vals = parallel_map(lambda m: unitary_enum_subset(M1, M2, m, AP), masks)
    ap = dict(zip(masks, vals))
    bp = {m: ap[complement(m, n)] for m in masks}
    return SubsetEnumTable(fact, AP, ap), SubsetEnumTable(fact, BP, bp)


def factored_unitary_tables(C: CodeStates, max_size: int | None = None) -> tuple[SubsetEnumTable, SubsetEnumTable]:
    """``A'`` and ``B'`` of the code projector for every ``|S| <= max_size``."""
    n = C.n
    masks = [m for m in all_subsets(n) if max_size is None or m.bit_count() <= max_size]
    ap = parallel_map(lambda m: unitary_enum_subset_factored(C, m, AP), masks)
    bp = parallel_map(lambda m: unitary_enum_subset_factored(C, m, BP), masks)
    return (SubsetEnumTable(C.fact, AP, dict(zip(masks, ap))),
            SubsetEnumTable(C.fact, BP, dict(zip(masks, bp))))


# ---------------------------------------------------------------------------
# averaging projections and the Shor-Laflamme family


def _primed(M: Operator, mask: int) -> Operator:
    fact = M.fact
    dc = fact.dim_of(complement(mask, fact.n))
    reduced = reduce_to(M, mask)
    emb = tensor_embed(reduced, mask, fact)
    return emb / dc if M.is_exact else emb * (1.0 / dc)


def mobius_transform(values: dict[int, object], n: int, inverse: bool = True) -> dict[int, object]:
    """Subset-lattice zeta (``inverse=False``) or Möbius (``inverse=True``) transform.

    Zeta: ``g_S = Σ_{T⊆S} f_T``.  Möbius: ``g_S = Σ_{T⊆S} (-1)^{|S|-|T|} f_T``.
    Runs in ``n 2^n`` additions; values only need ``+`` and ``-``.
    """
    out = dict(values)
    for i in range(n):
        bit = 1 << i
        for m in range(1 << n):
            if m & bit:
                out[m] = out[m] - out[m ^ bit] if inverse else out[m] + out[m ^ bit]
    return out


def mobius_projection(M: Operator, S, which: str = "primed") -> Operator:
    """``M'_S`` (``which="primed"``) or ``M_S = Σ_{T⊆S} (-1)^{|S|-|T|} M'_T``."""
    mask = as_mask(S, M.n)
    if which == "primed":
        return _primed(M, mask)
    if which != "unprimed":
        raise ContractError(f"which must be 'primed' or 'unprimed', got {which!r}")
    out = None
    s = mask.bit_count()
    for t in submasks(mask):
        term = _primed(M, t)
        term = term if (s - t.bit_count()) % 2 == 0 else -term
        out = term if out is None else out + term
    return out


def _all_unprimed(M: Operator) -> dict[int, Operator]:
    n = M.n
    primed = {m: _primed(M, m) for m in range(1 << n)}
    return mobius_transform(primed, n, inverse=True)


def sl_enum_subset(M1: Operator, M2: Operator, S, kind: str = A):
    """Shor-Laflamme ``A_S`` or ``B_S`` through the projection calculus."""
    _check_pair(M1, M2)
    kind = _kind(kind)
    fact = M1.fact
    mask = as_mask(S, fact.n)
    if kind == A:
        m1 = mobius_projection(M1, mask, "unprimed")
        m2 = mobius_projection(M2, mask, "unprimed")
        return fact.total_dim * trace_product(m1, m2)
    if kind == B:
        s = mask.bit_count()
        total = 0
        for t in submasks(mask):
            term = fact.dim_of(t) * unitary_enum_subset(M1, M2, t, BP)
            total = total + (term if (s - t.bit_count()) % 2 == 0 else -term)
        return total
    raise ContractError(f"{kind} is not a Shor-Laflamme enumerator")


def sl_tables(M1: Operator, M2: Operator, bp: SubsetEnumTable | None = None) -> tuple[SubsetEnumTable, SubsetEnumTable]:
    """``A`` and ``B`` over all subsets."""
    _check_pair(M1, M2)
    fact = M1.fact
    n = fact.n
    d = fact.total_dim
    u1 = _all_unprimed(M1)
    u2 = u1 if M2 is M1 else _all_unprimed(M2)
    masks = all_subsets(n)
    avals = parallel_map(lambda m: d * trace_product(u1[m], u2[m]), masks)
    if bp is None:
        _, bp = unitary_tables(M1, M2)
    scaled = {m: fact.dim_of(m) * bp.values[m] for m in masks}
    bvals = mobius_transform(scaled, n, inverse=True)
    return SubsetEnumTable(fact, A, dict(zip(masks, avals))), SubsetEnumTable(fact, B, bvals)


def enumerator_tables(M1: Operator, M2: Operator | None = None) -> dict[str, SubsetEnumTable]:
    """All four subset tables, keyed by kind."""
    M2 = M1 if M2 is None else M2
    ap, bp = unitary_tables(M1, M2)
    a, b = sl_tables(M1, M2, bp)
    return {A: a, B: b, AP: ap, BP: bp}


def weight_enumerators(M1: Operator, M2: Operator | None = None) -> dict[str, WeightDistribution]:
    return {k: subset_to_weight(t) for k, t in enumerator_tables(M1, M2).items()}


# ---------------------------------------------------------------------------
# consistency of the conversions


@dataclass
class ConversionReport:
    exact: bool
    residuals: dict[str, float]
    tolerance: float = TOL

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def ok(self) -> bool:
        if self.exact:
            return self.max_residual == 0
        return self.max_residual <= self.tolerance


def _absdiff(x, y) -> float:
    d = x - y
    if d == 0:
        return 0.0
    return float(abs(complex(d)))


def conversion_check(M1: Operator, M2: Operator, tol: float = TOL) -> ConversionReport:
    """Evaluate both sides of every subset-sum identity between the families.

    Checked over all subsets: ``A'_S = dim(V_S)^-1 Σ_{T⊆S} A_T`` (and for
    ``B``), the inverse direction for ``A`` against the direct ``dim(V) Tr(M_S
    N_S)`` value, ``A'_S = B'_{S^c}``, the weight-level binomial form when all
    dimensions agree, and the error-basis sums on qubit inputs.
    """
    _check_pair(M1, M2)
    exact = M1.is_exact and M2.is_exact
    fact = M1.fact
    n = fact.n
    tables = enumerator_tables(M1, M2)
    a, b, ap, bp = (tables[k].values for k in KINDS)
    res: dict[str, float] = {}

    zeta_a = mobius_transform(a, n, inverse=False)
    zeta_b = mobius_transform(b, n, inverse=False)
    res["A' from A"] = max(_absdiff(ap[m] * fact.dim_of(m), zeta_a[m]) for m in a)
    res["B' from B"] = max(_absdiff(bp[m] * fact.dim_of(m), zeta_b[m]) for m in b)
    inv_a = mobius_transform({m: fact.dim_of(m) * ap[m] for m in ap}, n, inverse=True)
    res["A from A'"] = max(_absdiff(inv_a[m], a[m]) for m in a)
    res["A' = B' dual"] = max(
        _absdiff(ap[m], unitary_enum_subset(M1, M2, complement(m, n), BP)) for m in ap
    )
    if fact.is_uniform():
        D = fact.dims[0]
        aw = subset_to_weight(tables[A]).coeffs
        apw = subset_to_weight(tables[AP]).coeffs
        bw = subset_to_weight(tables[B]).coeffs
        bpw = subset_to_weight(tables[BP]).coeffs
        worst = 0.0
        for d in range(n + 1):
            scale = Fraction(1, D ** d) if exact else D ** -d
            sa = sum((math.comb(n - i, n - d) * aw[i] for i in range(d + 1)), 0) * scale
            sb = sum((math.comb(n - i, n - d) * bw[i] for i in range(d + 1)), 0) * scale
            worst = max(worst, _absdiff(sa, apw[d]), _absdiff(sb, bpw[d]))
        res["weight binomial form"] = worst
    if all(d == 2 for d in fact.dims):
        from .pauli import pauli_subset_tables

        pa, pb = pauli_subset_tables(M1, M2)
        res["A error-basis path"] = max(_absdiff(pa[m], a[m]) for m in a)
        res["B error-basis path"] = max(_absdiff(pb[m], b[m]) for m in b)
    return ConversionReport(exact, res, tol)


# ---------------------------------------------------------------------------
# Monte-Carlo Haar oracle


@dataclass
class HaarEstimate:
    mean: complex
    stderr: float
    samples: int

    def agrees(self, value, sigmas: float = 5.0, floor: float = 1e-9) -> bool:
        return abs(complex(value) - self.mean) <= sigmas * self.stderr + floor


def _haar_batches(d: int, samples: int, seed, chunk: int):
    from .sampling import haar_unitary

    ss = np.random.SeedSequence(seed)
    nchunks = -(-samples // chunk)
    children = ss.spawn(nchunks)
    sizes = [min(chunk, samples - i * chunk) for i in range(nchunks)]
    return [(np.random.default_rng(c), s) for c, s in zip(children, sizes)], haar_unitary


def _summarize(vals: np.ndarray) -> HaarEstimate:
    n = len(vals)
    mean = complex(vals.mean())
    var = vals.real.var(ddof=1) + vals.imag.var(ddof=1) if n > 1 else 0.0
    return HaarEstimate(mean, float(np.sqrt(var / n)), n)


def haar_oracle(M1: Operator, M2: Operator, S, kind: str = AP, samples: int = 10_000,
                seed=0, chunk: int = 2_000) -> HaarEstimate:
    """Monte-Carlo ``dim(V_S) E_{U_S}[...]`` with ``U_S`` Haar on ``V_S`` (identity elsewhere).

    ``A'``: ``Tr(M1 U_S) Tr(M2 U_S†)``; ``B'``: ``Tr(M1 U_S M2 U_S†)``.  Works on
    the full space, independent of the partial-trace path.
    """
    _check_pair(M1, M2)
    kind = _kind(kind)
    if kind not in (AP, BP):
        raise ContractError("the local Haar oracle estimates A' or B'")
    if samples < 2:
        raise ContractError("need at least two samples")
    fact = M1.fact
    mask = as_mask(S, fact.n)
    m1, m2 = M1.to_numpy(), M2.to_numpy()
    if mask == 0:
        exact = np.trace(m1) * np.trace(m2) if kind == AP else np.trace(m1 @ m2)
        return HaarEstimate(complex(exact), 0.0, samples)
    ds = fact.dim_of(mask)
    batches, haar = _haar_batches(ds, samples, seed, chunk)

    def run(batch):
        rng, size = batch
        u = _embed_array(haar(ds, rng, (size,)), fact, mask)
        if kind == AP:
            t1 = np.einsum("ab,kba->k", m1, u)
            t2 = np.einsum("ab,kab->k", m2, u.conj())
            return ds * t1 * t2
        return ds * np.einsum("ab,kbc,cd,kad->k", m1, u, m2, u.conj(), optimize=True)

    vals = np.concatenate(parallel_map(run, batches))
    return _summarize(vals)


def haar_oracle_global(M1: Operator, M2: Operator, S, kind: str = BP, samples: int = 10_000,
                       seed=0, chunk: int = 500) -> HaarEstimate:
    """Monte-Carlo ``dim(V) E_{U ∈ U(V)}`` of ``A'_S(M1 U, M2 U†)`` (kind ``B'``) or ``A_S(M1 U, M2 U†)`` (kind ``B``)."""
    _check_pair(M1, M2)
    kind = _kind(kind)
    if kind not in (BP, B):
        raise ContractError("the global Haar oracle estimates B' or B")
    fact = M1.fact
    mask = as_mask(S, fact.n)
    d = fact.total_dim
    m1, m2 = M1.to_numpy(), M2.to_numpy()
    batches, haar = _haar_batches(d, samples, seed, chunk)
    coeffs = {t: ((-1) ** (mask.bit_count() - t.bit_count())) * fact.dim_of(t) for t in submasks(mask)}

    def a_prime_batch(x, y, t):
        # Tr(Tr_{T^c} x · Tr_{T^c} y) for stacks x, y
        n = fact.n
        dims = fact.dims
        inside = [i for i in range(n) if t >> i & 1]
        outside = [i for i in range(n) if not t >> i & 1]
        dt = fact.dim_of(t)
        dc = d // dt
        perm = [0] + [1 + i for i in inside + outside] + [1 + n + i for i in inside + outside]
        rx = x.reshape(-1, *dims, *dims).transpose(perm).reshape(-1, dt, dc, dt, dc)
        ry = y.reshape(-1, *dims, *dims).transpose(perm).reshape(-1, dt, dc, dt, dc)
        px = np.einsum("kacbc->kab", rx)
        py = np.einsum("kacbc->kab", ry)
        return np.einsum("kab,kba->k", px, py)

    def run(batch):
        rng, size = batch
        u = haar(d, rng, (size,))
        x = m1 @ u
        y = m2 @ np.conj(np.swapaxes(u, -1, -2))
        if kind == BP:
            return d * a_prime_batch(x, y, mask)
        total = 0
        for t, c in coeffs.items():
            total = total + c * a_prime_batch(x, y, t)
        return d * total

    vals = np.concatenate(parallel_map(run, batches))
    return _summarize(vals)
