"""Distance certification, purity, erasure correctability and inequality audits.

Small codes are evaluated on the dense projector (exactly, when the code
carries an exact projector); larger ones through the rank-factored kernels,
scanning subsets in order of size and stopping at the first failure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .enumerators import (
    A,
    AP,
    B,
    BP,
    KINDS,
    WeightDistribution,
    enumerator_tables,
    subset_to_weight,
    unitary_enum_subset,
    unitary_enum_subset_factored,
)
from .errors import ConsistencyError, ContractError, UnsupportedDimensionError
from .hilbert import TOL, CodeStates, all_subsets, complement, members, submasks, subsets_of_size

DENSE_MAX_DIM = 256


def _real(x):
    if isinstance(x, (Fraction, int)):
        return x
    return x.real


def saturated(kb, a, tol: float = TOL) -> bool:
    """``K·B == A``: exact equality on rationals, else ``|K·B - A| <= tol·max(1, |A|)``."""
    if isinstance(kb, (Fraction, int)) and isinstance(a, (Fraction, int)):
        return kb == a
    return abs(complex(kb) - complex(a)) <= tol * max(1.0, abs(complex(a)))


def _is_zero(x, tol: float = TOL) -> bool:
    if isinstance(x, (Fraction, int)):
        return x == 0
    return abs(complex(x)) <= tol


class _Evaluator:
    """Lazily evaluates ``A'_S(P,P)`` and ``B'_S(P,P)`` for a code, caching by mask."""

    def __init__(self, C: CodeStates, dense: bool | None = None):
        self.C = C
        self.n = C.n
        self.K = C.K
        if dense is None:
            dense = C.fact.total_dim <= DENSE_MAX_DIM
        self.dense = dense
        self.P = C.projector(exact=True) if dense else None
        self.exact = bool(dense and self.P.is_exact)
        self._ap: dict[int, object] = {}
        self._tables = None

    def ap(self, mask: int):
        if mask not in self._ap:
            if self.dense:
                v = unitary_enum_subset(self.P, self.P, mask, AP)
                self._ap[mask] = _real(v)
            else:
                self._ap[mask] = unitary_enum_subset_factored(self.C, mask, AP)
        return self._ap[mask]

    def bp(self, mask: int):
        return self.ap(complement(mask, self.n))

    def tables(self):
        if self._tables is None:
            if not self.dense:
                raise ContractError("full enumerator tables need the dense path")
            t = enumerator_tables(self.P, self.P)
            for table in t.values():
                table.values = {m: _real(v) for m, v in table.values.items()}
            self._tables = t
        return self._tables

    def sl(self, mask: int, kind: str):
        """``A_S`` or ``B_S`` by Möbius inversion over the cached primed values."""
        s = mask.bit_count()
        total = 0
        for t in submasks(mask):
            val = self.ap(t) if kind == A else self.bp(t)
            term = self.C.fact.dim_of(t) * val
            total = total + (term if (s - t.bit_count()) % 2 == 0 else -term)
        return total


# ---------------------------------------------------------------------------
# distance


@dataclass
class DistanceCertificate:
    d: int
    witness: int | None
    vacuous: bool
    method: str
    lower_bound: bool = False
    criteria_agree: bool | None = None
    primed_distance: int | None = None


def certify_distance(C: CodeStates, max_scan: int | None = None, tol: float = TOL,
                     dense: bool | None = None) -> DistanceCertificate:
    """Largest ``d <= n`` with ``K B_i = A_i`` for every ``i < d``.

    ``witness`` is the first weight where equality fails.  A one-dimensional
    code never fails (``K=1`` forces ``A = B``); it is reported with ``d = n``
    and ``vacuous=True``.  With ``max_scan`` only subset sizes up to
    ``max_scan`` are examined and a clean scan yields the lower bound
    ``d >= max_scan + 1``.

    On uniform dense codes the weight criterion on ``A/B`` and the one on
    ``A'/B'`` are both evaluated; ``criteria_agree`` records whether they pick
    the same ``d``.
    """
    ev = _Evaluator(C, dense)
    n, K = C.n, C.K
    top = n - 1 if max_scan is None else min(max_scan, n - 1)

    if ev.dense and C.fact.is_uniform():
        tabs = ev.tables()
        aw = subset_to_weight(tabs[A]).coeffs
        bw = subset_to_weight(tabs[B]).coeffs
        apw = subset_to_weight(tabs[AP]).coeffs
        bpw = subset_to_weight(tabs[BP]).coeffs
        d_sl = next((i for i in range(top + 1) if not saturated(K * bw[i], aw[i], tol)), None)
        d_pr = next((i for i in range(top + 1) if not saturated(K * bpw[i], apw[i], tol)), None)
        d, witness = _finish(d_sl, top, n)
        d8, _ = _finish(d_pr, top, n)
        return DistanceCertificate(
            d, witness, vacuous=(witness is None and K == 1), method="weights",
            lower_bound=(witness is None and top < n - 1), criteria_agree=(d == d8), primed_distance=d8,
        )

    fail = None
    for i in range(top + 1):
        if any(not saturated(K * ev.bp(m), ev.ap(m), tol) for m in subsets_of_size(n, i)):
            fail = i
            break
    d, witness = _finish(fail, top, n)
    return DistanceCertificate(
        d, witness, vacuous=(witness is None and K == 1),
        method="subsets-dense" if ev.dense else "subsets-factored",
        lower_bound=(witness is None and top < n - 1),
    )


def _finish(fail, top, n):
    if fail is not None:
        return fail, fail
    return (top + 1 if top < n - 1 else n), None


# ---------------------------------------------------------------------------
# purity and erasures


def check_purity(C: CodeStates, d: int | None = None, tol: float = TOL) -> bool:
    """``A_S(P,P) = 0`` for every ``1 <= |S| <= d-1`` (weights when dims agree)."""
    if d is None:
        d = certify_distance(C, tol=tol).d
    ev = _Evaluator(C)
    if ev.dense and C.fact.is_uniform():
        aw = subset_to_weight(ev.tables()[A]).coeffs
        return all(_is_zero(aw[i], tol * max(1.0, abs(complex(aw[0])))) for i in range(1, d))
    scale = max(1.0, float(C.K) ** 2)
    for i in range(1, d):
        for m in subsets_of_size(C.n, i):
            if not _is_zero(ev.sl(m, A), tol * scale):
                return False
    return True


def erasure_report(C: CodeStates, max_size: int | None = None, distance: int | None = None,
                   tol: float = TOL) -> dict[int, bool]:
    """Mask -> whether erasing those factors is correctable (``K B'_S = A'_S``).

    With ``distance`` given, every subset of size ``<= distance-1`` must come
    out correctable; otherwise :class:`ConsistencyError` is raised.
    """
    n = C.n
    max_size = n if max_size is None else max_size
    if not 0 <= max_size <= n:
        raise ContractError(f"max_size {max_size} outside 0..{n}")
    ev = _Evaluator(C)
    out = {}
    for m in all_subsets(n):
        if m.bit_count() > max_size:
            continue
        out[m] = saturated(C.K * ev.bp(m), ev.ap(m), tol)
    if distance is not None:
        bad = [m for m, ok in out.items() if not ok and m.bit_count() <= distance - 1]
        if bad:
            raise ConsistencyError(
                f"distance {distance} certified but erasure of {list(members(bad[0]))} is not correctable"
            )
    return out


# ---------------------------------------------------------------------------
# inequality audit


@dataclass
class InequalityAudit:
    min_gap: float
    min_value: float
    k1_max_gap: float | None
    gaps: dict[str, float] = field(default_factory=dict)
    tolerance: float = TOL

    @property
    def ok(self) -> bool:
        k1 = self.k1_max_gap is None or self.k1_max_gap <= self.tolerance
        return self.min_gap >= -self.tolerance and self.min_value >= -self.tolerance and k1


def audit_tables(tables: dict, K, tol: float = TOL) -> InequalityAudit:
    """Audit precomputed enumerator tables of a projector of rank ``K``."""
    gaps = {}
    mins = []
    k1 = 0.0
    for lo, hi in ((A, B), (AP, BP)):
        a, b = tables[lo].values, tables[hi].values
        gaps[f"K{hi}-{lo}"] = min(float(K * _real(b[m]) - _real(a[m])) for m in a)
        mins.append(min(float(_real(a[m])) for m in a))
        if K == 1:
            k1 = max(k1, max(abs(complex(b[m] - a[m])) for m in a))
    return InequalityAudit(min(gaps.values()), min(mins), k1 if K == 1 else None, gaps, tol)


def audit_inequalities(C, tol: float = TOL) -> InequalityAudit:
    """Minimum over subsets of ``K·B - A`` and ``K·B' - A'``, and of ``A``, ``A'``.

    ``C`` is a code or a bare projector operator.  For ``K = 1`` the largest
    ``|B - A|`` and ``|B' - A'|`` is recorded as well; both must vanish.
    """
    if isinstance(C, CodeStates):
        return audit_tables(_Evaluator(C).tables(), C.K, tol)
    K = C.trace()
    K = K if isinstance(K, Fraction) and K.denominator == 1 else round(complex(K).real)
    tables = enumerator_tables(C, C)
    for table in tables.values():
        table.values = {m: _real(v) for m, v in table.values.items()}
    return audit_tables(tables, int(K), tol)


# ---------------------------------------------------------------------------
# Knill-Laflamme brute force


def knill_laflamme_violation(C: CodeStates, weight: int, tol: float = 1e-9):
    """First Pauli error of the given weight with ``<v_i|E|v_j> != δ_ij c_E``, else ``None``.

    Qubit codes only; works on the codeword vectors directly.
    """
    from .pauli import enumerate_errors

    if any(d != 2 for d in C.dims):
        raise UnsupportedDimensionError("the Knill-Laflamme brute force is implemented for qubits")
    V = C.vectors
    idx = np.arange(1 << C.n)
    parity = np.array([bin(i).count("1") & 1 for i in range(1 << C.n)])
    eye = np.eye(C.K)
    for e in enumerate_errors(C.fact, weight=weight):
        x, z, ny = e._bits()
        # (E v)[r] = (-i)^nY (-1)^{|r & z|} v[r ^ x]
        ph = (-1j) ** ny * (1 - 2 * parity[idx & z])
        G = V.conj().T @ (ph[:, None] * V[idx ^ x, :])
        if np.max(np.abs(G - (np.trace(G) / C.K) * eye)) > tol:
            return e
    return None


def knill_laflamme_distance(C: CodeStates) -> int:
    """Distance by brute force over Pauli errors, under the same ``d <= n`` cap."""
    for w in range(1, C.n):
        if knill_laflamme_violation(C, w) is not None:
            return w
    return C.n


# ---------------------------------------------------------------------------
# full report


@dataclass
class CodeReport:
    n: int
    K: int
    dims: list[int]
    distance: int
    witness: int | None
    vacuous: bool
    pure: bool
    erasure_correctable: dict[int, bool]
    inequality_audit: float
    enum_tables: dict[str, WeightDistribution] | None
    criteria_agree: bool | None = None

    def to_dict(self) -> dict:
        from .io import scalar_to_json

        return {
            "n": self.n,
            "K": self.K,
            "dims": list(self.dims),
            "d": self.distance,
            "witness": self.witness,
            "vacuous": self.vacuous,
            "pure": self.pure,
            "criteria_agree": self.criteria_agree,
            "inequality_audit": self.inequality_audit,
            "erasure_correctable": [
                {"subset": list(members(m)), "correctable": ok}
                for m, ok in sorted(self.erasure_correctable.items(), key=lambda kv: (kv[0].bit_count(), kv[0]))
            ],
            "enumerators": None if self.enum_tables is None else {
                k: [scalar_to_json(c) for c in w.coeffs] for k, w in self.enum_tables.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def analyze(C: CodeStates, tol: float = TOL) -> CodeReport:
    cert = certify_distance(C, tol=tol)
    pure = check_purity(C, cert.d, tol)
    erasures = erasure_report(C, distance=cert.d, tol=tol)
    ev = _Evaluator(C)
    if ev.dense:
        tabs = ev.tables()
        audit = audit_tables(tabs, C.K, tol).min_gap
        weights = {k: subset_to_weight(tabs[k]) for k in KINDS} if C.fact.is_uniform() else None
    else:
        audit = min(float(C.K * ev.bp(m) - ev.ap(m)) for m in erasures)
        weights = None
    return CodeReport(C.n, C.K, list(C.dims), cert.d, cert.witness, cert.vacuous, pure, erasures,
                      audit, weights, cert.criteria_agree)
