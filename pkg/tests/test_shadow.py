import io
import json
from fractions import Fraction

import pytest

from qenum.codes import named_code
from qenum.enumerators import weight_enumerators
from qenum.errors import ContractError
from qenum.hilbert import Factorization, Operator, all_subsets, complement
from qenum.polynomials import from_weights, shadow_poly
from qenum.sampling import random_exact_operator, random_psd
from qenum.shadow import (
    CONJECTURE,
    DEFINITION,
    conventions_related,
    fuzz_conjecture,
    shadow_subset,
    shadow_table,
    sign_pattern_counterexample,
)


def test_single_factor_values(rng):
    I = Operator.identity([2])
    assert shadow_subset(I, I, []) == 2
    assert shadow_subset(I, I, [1]) == 6
    M = random_psd(Factorization([3]), rng)
    v = shadow_subset(M, M, [1])
    assert v == pytest.approx((M.trace() ** 2 + (M @ M).trace()).real)


def test_bell_table_and_polynomial_route():
    P = named_code("bell").projector()
    t = shadow_table(P, P)
    assert t.values == {0: 1, 1: 0, 2: 0, 3: 3}
    s = shadow_poly(from_weights(weight_enumerators(P)["A'"]))
    assert list(s.coeffs) == t.weights() == [1, 0, 3]
    assert t[[1, 2]] == s.coeffs[2]


@pytest.mark.parametrize("name", ["[[4,2,2]]", "[[5,1,3]]"])
def test_grouped_sums_reproduce_shadow_polynomial(name):
    P = named_code(name).projector()
    s = shadow_poly(from_weights(weight_enumerators(P)["A'"]))
    assert shadow_table(P, P).weights() == list(s.coeffs)


def test_grouped_sums_random_qubit_operators(rng):
    for n in (1, 2, 3):
        M = random_exact_operator(Factorization.qubits(n), rng, hermitian=True)
        s = shadow_poly(from_weights(weight_enumerators(M)["A'"]))
        assert shadow_table(M, M).weights() == list(s.coeffs)


def test_conventions_are_complements(rng):
    fact = Factorization([2, 3])
    M, N = random_psd(fact, rng), random_psd(fact, rng)
    assert conventions_related(M, N)
    a = shadow_table(M, N, DEFINITION)
    b = shadow_table(M, N, CONJECTURE)
    assert any(abs(a.values[T] - b.values[T]) > 1e-6 for T in all_subsets(2))
    for T in all_subsets(2):
        assert a.values[T] == pytest.approx(b.values[complement(T, 2)])
    with pytest.raises(ContractError):
        shadow_table(M, N, "other")


def test_fuzz_small_run_and_reproducibility():
    a = fuzz_conjecture(3, 3, trials=60, seed=7)
    b = fuzz_conjecture(3, 3, trials=60, seed=7)
    assert [r.to_json() for r in a] == [r.to_json() for r in b]
    assert not any(r.violation for r in a)
    assert all(1 <= len(r.dims) <= 3 and all(2 <= d <= 3 for d in r.dims) for r in a)


def test_fuzz_exact_recheck_path():
    recs = fuzz_conjecture(2, 2, trials=10, seed=1, recheck_all=True)
    for r in recs:
        assert r.exact_min is not None and r.exact_min >= 0 and not r.violation


def test_fuzz_ledger_lines(tmp_path):
    path = tmp_path / "ledger.jsonl"
    fuzz_conjecture(1, 2, trials=5, seed=0, ledger=path)
    fuzz_conjecture(1, 2, trials=5, seed=1, ledger=path)
    lines = path.read_text().splitlines()
    assert len(lines) == 10 and json.loads(lines[0])["trial"] == 0
    buf = io.StringIO()
    fuzz_conjecture(1, 2, trials=2, seed=0, ledger=buf)
    assert buf.getvalue().splitlines() == lines[:2]


def test_fuzz_contract():
    with pytest.raises(ContractError):
        fuzz_conjecture(max_n=5)
    with pytest.raises(ContractError):
        fuzz_conjecture(trials=0)


def test_single_factor_never_negative():
    recs = fuzz_conjecture(1, 3, trials=300, seed=3)
    assert min(r.min_value for r in recs) >= 0


def test_non_psd_can_be_negative():
    M, N, T, v = sign_pattern_counterexample()
    assert v < 0 and isinstance(v, Fraction)
    diag = Operator.exact([[1, 0], [0, -1]], [2])
    assert shadow_subset(diag, diag, []) == -2
