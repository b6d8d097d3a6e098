import json

import numpy as np
import pytest

from qenum.analysis import (
    analyze,
    audit_inequalities,
    certify_distance,
    check_purity,
    erasure_report,
    knill_laflamme_distance,
    knill_laflamme_violation,
)
from qenum.codes import named_code
from qenum.enumerators import KINDS, weight_enumerators
from qenum.errors import ConsistencyError, ContractError
from qenum.hilbert import CodeStates, Factorization, Operator, permute_vectors
from qenum.sampling import random_isometry, random_local_unitary, random_projector
from qenum.stabilizer import parse_stabilizer


@pytest.mark.parametrize("name, d, witness", [("[[5,1,3]]", 3, 3), ("[[4,2,2]]", 2, 2), ("bell", 2, None)])
def test_certified_distances(name, d, witness):
    C = named_code(name)
    cert = certify_distance(C)
    assert (cert.d, cert.witness) == (d, witness)
    assert cert.criteria_agree
    assert cert.vacuous == (C.K == 1)
    assert certify_distance(C, dense=False).d == d


def test_five_qubit_witness_values():
    w = weight_enumerators(named_code("[[5,1,3]]").projector())
    assert 2 * w["B"].coeffs[3] == 120 and w["A"].coeffs[3] == 0


@pytest.mark.parametrize("name", ["bell", "[[4,2,2]]", "[[5,1,3]]"])
def test_knill_laflamme_agrees(name):
    C = named_code(name)
    d = certify_distance(C).d
    assert knill_laflamme_distance(C) == d
    for w in range(1, d):
        assert knill_laflamme_violation(C, w) is None


def test_knill_laflamme_agrees_on_random_codes(rng):
    for n, K in [(2, 2), (3, 2), (4, 2), (4, 3), (3, 1)]:
        fact = Factorization.qubits(n)
        C = CodeStates(fact, random_isometry(2 ** n, K, rng))
        assert knill_laflamme_distance(C) == certify_distance(C).d


def test_knill_laflamme_extra_stabilizer_codes():
    for text in ["XXXX, ZZZZ, ZZII", "ZZI, IZZ", "XXX, ZZI"]:
        C = parse_stabilizer(text)
        assert knill_laflamme_distance(C) == certify_distance(C).d


def test_purity():
    assert check_purity(named_code("[[5,1,3]]"))
    assert check_purity(named_code("[[4,2,2]]"))
    assert check_purity(named_code("bell"))
    # a product state has A_1 != 0 although its certified distance is n
    prod = CodeStates.from_state([1, 0, 0, 0], [2, 2])
    assert certify_distance(prod).d == 2 and not check_purity(prod)


SHOR = """ZZIIIIIII, IZZIIIIII, IIIZZIIII, IIIIZZIII, IIIIIIZZI, IIIIIIIZZ,
XXXXXXIII, IIIXXXXXX"""


def test_shor_code_is_degenerate():
    C = parse_stabilizer(SHOR)
    cert = certify_distance(C)
    assert cert.d == 3 and cert.method == "subsets-factored"
    assert not check_purity(C, cert.d)


def test_five_qubit_erasures():
    rep = erasure_report(named_code("[[5,1,3]]"), distance=3)
    sizes = {}
    for m, ok in rep.items():
        sizes.setdefault(m.bit_count(), set()).add(ok)
    assert sizes[0] == sizes[1] == sizes[2] == {True}
    assert sizes[3] == sizes[4] == sizes[5] == {False}
    assert sum(1 for m, ok in rep.items() if ok and m.bit_count() == 2) == 10


def test_bell_erasures():
    rep = erasure_report(named_code("bell"))
    assert rep[0b01] and rep[0b10] and rep[0]


def test_erasure_report_raises_on_inconsistent_distance():
    with pytest.raises(ConsistencyError):
        erasure_report(named_code("[[4,2,2]]"), distance=3)
    with pytest.raises(ContractError):
        erasure_report(named_code("bell"), max_size=3)


def test_audit_random_rank_three(rng):
    P = random_projector(Factorization([2, 2, 2]), rng, rank=3)
    audit = audit_inequalities(P)
    assert audit.ok and audit.k1_max_gap is None


def test_audit_rank_one_equalities(rng):
    P = random_projector(Factorization([2, 2, 2]), rng, rank=1)
    audit = audit_inequalities(P)
    assert audit.ok and audit.k1_max_gap < 1e-12


def test_identity_saturates():
    I = Operator.identity([2, 3])
    audit = audit_inequalities(I)
    assert audit.min_gap == 0 and audit.ok


def test_unequal_dims_use_subset_path(rng):
    fact = Factorization([2, 3, 2])
    C = CodeStates(fact, random_isometry(12, 2, rng))
    cert = certify_distance(C)
    assert cert.method == "subsets-dense" and cert.d == 1
    assert certify_distance(C, dense=False).d == 1


def test_equivalence_invariance(rng):
    C = named_code("[[5,1,3]]")
    ref = weight_enumerators(C.projector())
    U = random_local_unitary(C.fact, rng)
    vecs, fact = permute_vectors(U @ C.vectors, C.fact, [3, 1, 5, 2, 4])
    moved = weight_enumerators(CodeStates(fact, vecs).projector())
    for k in KINDS:
        assert np.allclose(np.array(moved[k].coeffs, dtype=complex), np.array(ref[k].coeffs, dtype=complex), atol=1e-9)


def test_report_json_is_deterministic():
    a = analyze(named_code("[[4,2,2]]")).to_json()
    b = analyze(named_code("[[4,2,2]]")).to_json()
    assert a == b
    doc = json.loads(a)
    assert doc["d"] == 2 and doc["pure"] and doc["enumerators"]["A"] == ["16", "0", "0", "0", "48"]
    assert doc["erasure_correctable"][1] == {"subset": [1], "correctable": True}
    assert list(doc) == sorted(doc)
