import numpy as np
import pytest

from qenum.codes import encoder, named_code
from qenum.errors import ContractError, StabilizerError
from qenum.stabilizer import SignedPauli, StabilizerGroup, parse_stabilizer


def test_signed_words():
    w = SignedPauli.parse("-yyii")
    assert w.sign == -1 and str(w) == "-YYII"
    with pytest.raises(StabilizerError, match="bad character"):
        SignedPauli.parse("XQ")


def test_five_qubit_code():
    C = parse_stabilizer("XZZXI, IXZZX, XIXZZ, ZXIXZ")
    assert C.K == 2 and C.projector().rank() == 2 and C.projector().is_exact


def test_four_qubit_code_from_lines():
    C = parse_stabilizer("# detection code\nXXXX\nZZZZ  # second\n")
    assert C.K == 4


@pytest.mark.parametrize("text, msg", [
    ("XI, ZI", "anticommute"),
    ("XX, XX", "dependent"),
    ("XX, ZZ, YY", "dependent"),
    ("XX, ZZZ", "unequal"),
    ("", "no generators"),
])
def test_rejections(text, msg):
    with pytest.raises(StabilizerError, match=msg):
        StabilizerGroup.parse(text)


def test_anticommuting_pair_is_named():
    with pytest.raises(StabilizerError, match=r"1 \(XI\) and 2 \(ZI\)"):
        StabilizerGroup.parse("XI, ZI")


def test_signs_change_the_code():
    plus = parse_stabilizer("ZZ").projector()
    minus = parse_stabilizer("-ZZ").projector()
    assert (plus + minus).equals(type(plus).identity([2, 2]))


def test_projector_is_group_average():
    group = StabilizerGroup.parse("XX, ZZ")
    P = group.projector().to_numpy()
    X, Z = np.array([[0, 1], [1, 0]]), np.diag([1, -1])
    Y = 1j * X @ Z
    group = [np.eye(4), np.kron(X, X), np.kron(Z, Z), np.kron(X, X) @ np.kron(Z, Z)]
    assert np.allclose(P, sum(group) / 4)
    assert np.allclose(np.kron(X, X) @ np.kron(Z, Z), -np.kron(Y, Y))


def test_named_codes_and_encoders():
    assert named_code("five_qubit").K == 2 and named_code("422").K == 4
    E = encoder("[[5,1,3]]")
    assert E.shape == (32, 2) and np.allclose(E.conj().T @ E, np.eye(2))
    assert np.allclose(encoder("513"), E)
    with pytest.raises(ContractError):
        named_code("steane")


@pytest.mark.parametrize("text", ["XX, ZZ", "XZZXI, IXZZX, XIXZZ, ZXIXZ", "-YYI, ZZI", "-XYZ", "YIY, -IYY"])
def test_permutation_projector_matches_dense_products(text):
    group = StabilizerGroup.parse(text)
    assert group.projector().entries.array_equal(group.projector_by_products().entries)
