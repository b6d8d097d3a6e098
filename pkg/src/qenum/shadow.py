"""Subset shadow enumerators and a randomized search for negative values.

``S_T(M, N) = Σ_R (-1)^{|R ∩ T^c|} A'_R(M, N)`` (``convention="definition"``).
The alternative sign ``(-1)^{|R ∩ T|}`` (``convention="conjecture"``) is the
same family with ``T`` replaced by its complement; both are available so the
relabelling can be checked rather than assumed.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .enumerators import unitary_tables
from .errors import ContractError
from .gaussian import GaussianRationalArray
from .hilbert import Factorization, Operator, all_subsets, as_mask, complement, parallel_map

DEFINITION = "definition"
CONJECTURE = "conjecture"
VIOLATION_TOL = 1e-7


def _sign_mask(T: int, n: int, convention: str) -> int:
    if convention == DEFINITION:
        return complement(T, n)
    if convention == CONJECTURE:
        return T
    raise ContractError(f"unknown sign convention {convention!r}")


def _real(x):
    return x if isinstance(x, Fraction) else getattr(x, "real", x)


@dataclass
class ShadowTable:
    fact: Factorization
    values: dict[int, object]
    convention: str = DEFINITION

    def __getitem__(self, T):
        return self.values[as_mask(T, self.fact.n)]

    def minimum(self):
        return min(self.values.items(), key=lambda kv: _real(kv[1]))

    def weights(self) -> list:
        """``Σ_{|T|=d} S_T`` for each ``d``; equals the shadow polynomial's coefficients."""
        out = [0] * (self.fact.n + 1)
        for m, v in self.values.items():
            out[m.bit_count()] = out[m.bit_count()] + v
        return out


def _signed_sums(ap: dict[int, object], n: int, convention: str) -> dict[int, object]:
    out = {}
    for T in all_subsets(n):
        sm = _sign_mask(T, n, convention)
        total = 0
        for R, v in ap.items():
            total = total - v if (R & sm).bit_count() & 1 else total + v
        out[T] = total
    return out


def shadow_table(M: Operator, N: Operator, convention: str = DEFINITION) -> ShadowTable:
    ap, _ = unitary_tables(M, N)
    vals = {m: _real(v) for m, v in ap.values.items()}
    return ShadowTable(M.fact, _signed_sums(vals, M.n, convention), convention)


def shadow_subset(M: Operator, N: Operator, T, convention: str = DEFINITION):
    """``S_T(M, N)`` under the chosen sign convention."""
    return shadow_table(M, N, convention)[T]


def conventions_related(M: Operator, N: Operator, tol: float = 1e-9) -> bool:
    """Whether the two sign conventions agree under ``T -> T^c``."""
    a = shadow_table(M, N, DEFINITION)
    b = shadow_table(M, N, CONJECTURE)
    n = M.n
    for T, v in a.values.items():
        w = b.values[complement(T, n)]
        if isinstance(v, Fraction) and isinstance(w, Fraction):
            if v != w:
                return False
        elif abs(complex(v) - complex(w)) > tol * max(1.0, abs(complex(v))):
            return False
    return True


# ---------------------------------------------------------------------------
# fuzzing


@dataclass
class FuzzRecord:
    trial: int
    seed: list[int]
    dims: list[int]
    ranks: list[int]
    sampling: str
    min_value: float
    min_subset: list[int]
    flagged: bool
    exact_min: float | None = None
    violation: bool = False
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _gaussian(rng, d, r):
    return (rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))) / np.sqrt(2)


def _exact_gram(G: np.ndarray, bits: int) -> GaussianRationalArray:
    # dyadic rounding keeps one shared denominator, so the Gram stays small
    scale = 1 << bits
    re = np.rint(G.real * scale).astype(np.int64).astype(object)
    im = np.rint(G.imag * scale).astype(np.int64).astype(object)
    g = GaussianRationalArray(re, im, scale)
    return g @ g.conj().T


def _members(mask: int) -> list[int]:
    return [i + 1 for i in range(mask.bit_length()) if mask >> i & 1]


def _one_trial(args) -> FuzzRecord:
    trial, child, max_n, max_D, convention, bits, recheck_all = args
    rng = np.random.default_rng(child)
    n = int(rng.integers(1, max_n + 1))
    dims = [int(x) for x in rng.integers(2, max_D + 1, size=n)]
    fact = Factorization(dims)
    d = fact.total_dim
    ranks = [int(rng.integers(1, d + 1)) for _ in range(2)]
    G = [_gaussian(rng, d, r) for r in ranks]
    ops = []
    for g in G:
        m = g @ g.conj().T
        ops.append(Operator(fact, m / np.trace(m).real))
    table = shadow_table(ops[0], ops[1], convention)
    T, v = table.minimum()
    rec = FuzzRecord(
        trial=trial, seed=[int(x) for x in child.spawn_key], dims=dims, ranks=ranks,
        sampling="M = G G^dagger / Tr(G G^dagger), G complex Gaussian with rank columns",
        min_value=float(_real(v)), min_subset=_members(T), flagged=float(_real(v)) < -VIOLATION_TOL,
    )
    if rec.flagged or recheck_all:
        exact = [Operator(fact, _exact_gram(g, bits)) for g in G]
        et = shadow_table(exact[0], exact[1], convention)
        eT, ev = et.minimum()
        rec.exact_min = float(ev)
        rec.violation = ev < 0
        rec.extra["exact_min_subset"] = _members(eT)
    return rec


def fuzz_conjecture(max_n: int = 3, max_D: int = 3, trials: int = 1000, seed: int = 0,
                    convention: str = DEFINITION, ledger=None, bits: int = 20,
                    recheck_all: bool = False) -> list[FuzzRecord]:
    """Random PSD pairs on random factorizations; records the smallest ``S_T`` per trial.

    Each trial draws from its own ``SeedSequence`` child, so records depend
    only on ``seed`` and the trial index.  Values below ``-1e-7`` are
    recomputed exactly from a dyadic rounding (``bits`` fractional bits) of the Gaussian factors
    (which keeps the operators exactly PSD); only an exact negative counts as
    a violation (``recheck_all`` forces the exact pass on every trial).
    ``ledger`` is a path or text stream for JSON lines.
    """
    if not 1 <= max_n <= 4:
        raise ContractError("max_n must lie in 1..4")
    if max_D < 2:
        raise ContractError("max_D must be at least 2")
    if trials < 1:
        raise ContractError("need at least one trial")
    children = np.random.SeedSequence(seed).spawn(trials)
    jobs = [(i, c, max_n, max_D, convention, bits, recheck_all) for i, c in enumerate(children)]
    records = parallel_map(_one_trial, jobs)
    if ledger is not None:
        _append(ledger, records)
    return records


def _append(ledger, records):
    lines = "".join(r.to_json() + "\n" for r in records)
    if hasattr(ledger, "write"):
        ledger.write(lines)
    else:
        with open(ledger, "a", encoding="utf-8") as fh:
            fh.write(lines)


def sign_pattern_counterexample(n: int = 1, D: int = 2):
    """Search diagonal ``±1`` Hermitian pairs for a negative ``S_T``.

    Returns ``(M, N, T, value)`` for the first negative value found, showing
    that positivity needs the PSD hypothesis; ``None`` if there is none.
    """
    fact = Factorization([D] * n)
    d = fact.total_dim
    patterns = list(itertools.product((1, -1), repeat=d))
    for p in patterns:
        M = Operator.exact(np.diag(p).tolist(), fact.dims)
        for q in patterns:
            N = Operator.exact(np.diag(q).tolist(), fact.dims)
            T, v = shadow_table(M, N).minimum()
            if v < 0:
                return M, N, T, v
    return None
