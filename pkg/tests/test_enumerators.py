from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import trace_pair
from qenum.codes import named_code
from qenum.enumerators import (
    A,
    AP,
    B,
    BP,
    conversion_check,
    enumerator_tables,
    factored_unitary_tables,
    haar_oracle,
    haar_oracle_global,
    mobius_projection,
    sl_enum_subset,
    subset_to_weight,
    unitary_enum_subset,
    unitary_enum_subset_factored,
    weight_enumerators,
)
from qenum.errors import DimensionMismatchError, UnsupportedDimensionError
from qenum.hilbert import CodeStates, Factorization, Operator, all_subsets, complement, submasks
from qenum.sampling import random_exact_operator, random_operator, random_projector


def _bell():
    return named_code("bell").projector()


def test_unitary_examples():
    P = _bell()
    assert unitary_enum_subset(P, P, 0, AP) == 1
    assert unitary_enum_subset(P, P, [1], AP) == Fraction(1, 2)
    I = Operator.identity([2])
    assert unitary_enum_subset(I, I, [1], AP) == 2
    with pytest.raises(DimensionMismatchError):
        unitary_enum_subset(P, I, 0, AP)


@given(st.lists(st.integers(2, 3), min_size=1, max_size=3), st.integers(0, 9999))
def test_duality_against_einsum(dims, seed):
    fact = Factorization(dims)
    rng = np.random.default_rng(seed)
    M, N = random_operator(fact, rng), random_operator(fact, rng)
    n = fact.n
    for S in all_subsets(n):
        ap = unitary_enum_subset(M, N, S, AP)
        traced_for_b = [i for i in range(n) if complement(S, n) >> i & 1]
        oracle_b = trace_pair(M.entries, N.entries, dims, traced_for_b)
        assert abs(ap - oracle_b) <= 1e-9 * max(1, abs(ap))


def test_factored_matches_dense():
    C = named_code("[[5,1,3]]")
    P = C.projector()
    for S in all_subsets(5):
        for kind in (AP, BP):
            assert unitary_enum_subset_factored(C, S, kind) == pytest.approx(
                float(unitary_enum_subset(P, P, S, kind)), abs=1e-12
            )
    ap, bp = factored_unitary_tables(C, max_size=2)
    assert all(abs(bp.values[S] - 0.5) < 1e-12 for S in bp.values if S.bit_count() == 2)
    state = CodeStates.from_state(np.arange(1, 9), [2, 2, 2])
    assert unitary_enum_subset_factored(state, 0b111, BP) == pytest.approx(1.0)


def test_mobius_projection_laws(rng):
    fact = Factorization([2, 2])
    M = random_exact_operator(fact, rng)
    p1 = mobius_projection(M, [1])
    assert mobius_projection(p1, [1]).entries.array_equal(p1.entries)
    assert mobius_projection(p1, [2]).entries.array_equal(mobius_projection(M, []).entries)
    assert mobius_projection(M, [1, 2]).entries.array_equal(M.entries)
    total = Operator.identity([2, 2]) * (M.trace() / 4)
    assert mobius_projection(M, []).entries.array_equal(total.entries)
    for S in all_subsets(2):
        acc = None
        for T in submasks(S):
            u = mobius_projection(M, T, "unprimed")
            acc = u if acc is None else acc + u
        assert acc.entries.array_equal(mobius_projection(M, S).entries)


def test_mobius_projection_composition_mixed_dims(rng):
    fact = Factorization([2, 3, 2])
    M = random_exact_operator(fact, rng)
    for S in all_subsets(3):
        for T in all_subsets(3):
            lhs = mobius_projection(mobius_projection(M, S), T)
            assert lhs.entries.array_equal(mobius_projection(M, S & T).entries)


def test_sl_examples():
    P = _bell()
    assert sl_enum_subset(P, P, 0, A) == 1 and sl_enum_subset(P, P, 0, B) == 1
    assert sl_enum_subset(P, P, [1, 2], A) == 3
    Q = named_code("[[4,2,2]]").projector()
    w = weight_enumerators(Q)
    assert w[A].coeffs == [16, 0, 0, 0, 48] and w[B].coeffs[0] == 4


def test_five_qubit_weights():
    w = weight_enumerators(named_code("[[5,1,3]]").projector())
    assert w[A].coeffs == [4, 0, 0, 0, 60, 0]
    assert w[B].coeffs == [2, 0, 0, 60, 30, 36]
    assert w[AP].coeffs == [4, 10, 10, 5, 5, 2]
    assert w[AP].coeffs == w[BP].coeffs[::-1]


def test_bell_weights():
    w = weight_enumerators(_bell())
    assert w[AP].coeffs == [1, 1, 1]
    with pytest.raises(UnsupportedDimensionError):
        subset_to_weight(enumerator_tables(Operator.identity([2, 3]))[A])


@pytest.mark.parametrize("dims", [(2, 2), (3, 3), (2, 3), (2, 2, 2)])
def test_conversion_check_exact(rng, dims):
    fact = Factorization(dims)
    rep = conversion_check(random_exact_operator(fact, rng, hermitian=True),
                           random_exact_operator(fact, rng, hermitian=True))
    assert rep.exact and rep.ok, rep.residuals
    if all(d == 2 for d in dims):
        assert "A error-basis path" in rep.residuals


def test_conversion_check_float(rng):
    fact = Factorization([3, 3])
    rep = conversion_check(random_operator(fact, rng), random_operator(fact, rng))
    assert not rep.exact and rep.ok, rep.residuals


def test_bell_saturation_arithmetic():
    # A'_1 = 2^{-1} [C(2,1) A_0 + A_1] = 1
    w = weight_enumerators(_bell())
    assert Fraction(2 * w[A].coeffs[0] + w[A].coeffs[1], 2) == w[AP].coeffs[1] == 1


@pytest.mark.parametrize("dims", [(2, 2), (3,), (2, 3), (2, 2, 2)])
def test_inequalities_on_random_projectors(rng, dims):
    fact = Factorization(dims)
    for _ in range(5):
        P = random_projector(fact, rng)
        K = round(P.trace().real)
        t = enumerator_tables(P)
        for S in all_subsets(fact.n):
            for lo, hi in ((A, B), (AP, BP)):
                a, b = t[lo].values[S].real, t[hi].values[S].real
                assert K * b - a >= -1e-9 and a >= -1e-9


def test_rank_one_collapse(rng):
    P = random_projector(Factorization([2, 3, 2]), rng, rank=1)
    t = enumerator_tables(P)
    for S in all_subsets(3):
        assert abs(t[A].values[S] - t[B].values[S]) < 1e-9
        assert abs(t[AP].values[S] - t[BP].values[S]) < 1e-9


def test_haar_oracle_examples():
    P = _bell()
    est0 = haar_oracle(P, P, 0, AP, samples=10)
    assert est0.stderr == 0 and est0.mean == 1
    est = haar_oracle(P, P, [1], AP, samples=10_000, seed=3)
    assert est.agrees(0.5)
    I4 = Operator.identity([2, 2], exact=False)
    est_b = haar_oracle(I4, I4, [1], BP, samples=10_000, seed=4)
    assert unitary_enum_subset(I4, I4, [1], BP) == pytest.approx(8)
    assert est_b.agrees(8)


def test_haar_oracle_deterministic():
    P = _bell()
    a = haar_oracle(P, P, [2], BP, samples=500, seed=11)
    b = haar_oracle(P, P, [2], BP, samples=500, seed=11)
    assert a.mean == b.mean and a.stderr == b.stderr


@pytest.mark.parametrize("dims", [(2, 2), (3, 2)])
def test_global_haar_validates_mobius_b(rng, dims):
    fact = Factorization(dims)
    M, N = random_operator(fact, rng), random_operator(fact, rng)
    t = enumerator_tables(M, N)
    for S in all_subsets(fact.n):
        est = haar_oracle_global(M, N, S, B, samples=6000, seed=S)
        assert est.agrees(t[B].values[S]), (S, est, t[B].values[S])
        est_p = haar_oracle_global(M, N, S, BP, samples=6000, seed=100 + S)
        assert est_p.agrees(t[BP].values[S])
