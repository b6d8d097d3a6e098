import numpy as np
import pytest

from qenum.analysis import certify_distance, check_purity
from qenum.codes import encoder, named_code
from qenum.constructions import (
    CodeParams,
    code_params,
    concatenate,
    extend,
    extension_weight_identity,
    move_to_front,
    shorten,
)
from qenum.enumerators import KINDS, factored_unitary_tables, weight_enumerators
from qenum.errors import DimensionMismatchError, PreconditionError
from qenum.hilbert import CodeStates, Factorization, Operator, partial_trace
from qenum.sampling import haar_unitary, random_isometry
from qenum.stabilizer import parse_stabilizer


def test_code_params_bounds():
    assert str(CodeParams(5, 2, 3, 2)) == "((5,2,3))"
    with pytest.raises(PreconditionError):
        CodeParams(2, 5, 1, 2)
    with pytest.raises(PreconditionError):
        CodeParams(2, 1, 3, 2)


@pytest.mark.parametrize("factor", [1, 2, 5])
def test_shorten_five_qubit(factor):
    S = shorten(named_code("[[5,1,3]]"), factor=factor)
    p = code_params(S)
    assert (p.n, p.K, p.d) == (4, 4, 2)
    assert check_purity(S, p.d)
    assert S.exact_projector is not None and S.exact_projector.is_exact


def test_shorten_bell_gives_full_qubit():
    S = shorten(named_code("bell"))
    assert S.K == 2 and S.projector().equals(Operator.identity([2]))
    assert certify_distance(S).d == 1


def test_shorten_rejects_impure_or_distance_one(rng):
    prod = CodeStates.from_state([1, 0, 0, 0], [2, 2])
    with pytest.raises(PreconditionError, match="pure"):
        shorten(prod)
    C = CodeStates(Factorization([2, 2]), random_isometry(4, 2, rng))
    with pytest.raises(PreconditionError, match="distance"):
        shorten(C)


def test_shorten_four_qubit_code():
    S = shorten(named_code("[[4,2,2]]"))
    assert (S.n, S.K) == (3, 8) and certify_distance(S).d == 1


def test_extend_five_qubit_identity():
    C = named_code("[[5,1,3]]")
    E = extend(C)
    assert E.n == 6 and E.K == 1
    for lhs, rhs in extension_weight_identity(C, E):
        assert abs(lhs - rhs) < 1e-9
    P = C.projector(exact=False)
    assert (partial_trace(E.projector(), 1) * 2).equals(P, 1e-12)


def test_extend_full_qubit_is_bell():
    C = CodeStates(Factorization([2]), np.eye(2))
    E = extend(C)
    assert np.allclose(E.vectors[:, 0], np.array([1, 0, 0, 1]) / np.sqrt(2))
    w = weight_enumerators(E.projector())
    assert np.allclose(np.array(w["A'"].coeffs, dtype=complex), [1, 1, 1])


def test_extend_basis_freedom_keeps_enumerators(rng):
    C = named_code("[[5,1,3]]")
    a = weight_enumerators(extend(C).projector())
    b = weight_enumerators(extend(C, basis=haar_unitary(2, rng)).projector())
    for k in KINDS:
        assert np.allclose(np.array(a[k].coeffs, dtype=complex), np.array(b[k].coeffs, dtype=complex), atol=1e-9)


def test_extend_qutrit_rank_three(rng):
    C = CodeStates(Factorization([3, 3]), random_isometry(9, 3, rng))
    E = extend(C)
    assert E.dims == (3, 3, 3)
    for lhs, rhs in extension_weight_identity(C, E):
        assert abs(lhs - rhs) < 1e-9


def test_extend_rank_mismatch():
    with pytest.raises(PreconditionError):
        extend(named_code("bell"))


def test_move_to_front_keeps_exact_projector():
    C = move_to_front(named_code("[[5,1,3]]"), 4)
    assert C.exact_projector is not None
    assert np.allclose(C.projector().to_numpy(), C.projector(exact=False).to_numpy())


def test_concatenate_identity_inner_is_noop():
    C = named_code("[[4,2,2]]")
    out = concatenate(C, np.eye(2), 1, 2)
    assert np.allclose(out.vectors, C.vectors)


def test_concatenate_block_order():
    # outer product state |0>|1> with a repetition-style inner encoder keeps blocks contiguous
    outer = CodeStates.from_state([0, 1, 0, 0], [2, 2])
    enc = np.zeros((4, 2))
    enc[0, 0] = enc[3, 1] = 1
    out = concatenate(outer, enc, 2, 2)
    want = np.zeros(16)
    want[0b0011] = 1
    assert np.allclose(out.vectors[:, 0], want)


def test_concatenate_contract_errors():
    with pytest.raises(PreconditionError):
        concatenate(named_code("bell"), np.ones((4, 2)), 2, 2)
    with pytest.raises(DimensionMismatchError):
        concatenate(named_code("bell"), np.eye(3)[:, :3], 1, 3)


def test_concatenate_bell_with_five_qubit():
    out = concatenate(named_code("bell"), encoder("[[5,1,3]]"), 5, 2)
    assert out.n == 10 and out.K == 1
    cert = certify_distance(out, max_scan=5)
    assert cert.d >= 6 and cert.lower_bound


def test_concatenate_non_vacuous_distance_product():
    inner = parse_stabilizer("XXXX, ZZZZ, ZZII")
    assert certify_distance(inner).d == 2
    out = concatenate(named_code("[[4,2,2]]"), inner.vectors, 4, 2)
    assert out.n == 16 and out.K == 4
    cert = certify_distance(out, max_scan=3)
    assert cert.d >= 4 and not cert.vacuous


def _partial_weights(C, max_size):
    ap, bp = factored_unitary_tables(C, max_size)
    return [sum(v for m, v in t.values.items() if m.bit_count() == k) for t in (ap, bp) for k in range(max_size + 1)]


@pytest.mark.parametrize("outer, inner, n2, scan", [
    ("bell", "[[5,1,3]]", 5, 10),
    ("[[4,2,2]]", "XXXX, ZZZZ, ZZII", 4, 2),
])
def test_concatenate_encoder_basis_freedom(rng, outer, inner, n2, scan):
    enc = encoder(inner) if inner.startswith("[") else parse_stabilizer(inner).vectors
    C1 = named_code(outer)
    ref = _partial_weights(concatenate(C1, enc, n2, 2), scan)
    for _ in range(2):
        got = _partial_weights(concatenate(C1, enc @ haar_unitary(2, rng), n2, 2), scan)
        assert np.allclose(got, ref, atol=1e-9)
