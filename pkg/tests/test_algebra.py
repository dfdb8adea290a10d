from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from bihom import corpus
from bihom.algebra import (
    AlgebraMorphism,
    adjoint_bimodule,
    algebra_violations,
    bimodule_violations,
    check_nary_identity,
    make_algebra,
    make_bimodule,
    matrix_algebra,
    morphism_violations,
    semidirect_product,
    tensor_product,
    validate_algebra,
    validate_bimodule,
    yau_twist,
    zero_bimodule,
)
from bihom.errors import (
    BimoduleAxiomViolation,
    BudgetExceeded,
    DimensionMismatch,
    InputNotAssociative,
    MorphismCheckFailed,
    NonCommutingTwists,
    NotBihomAssociative,
)
from bihom.io import algebra_from_json, algebra_to_json, bimodule_from_json, bimodule_to_json
from bihom.maps import budget
from bihom.operad import cochain_space_basis
from bihom.qarray import QArray

from oracles import dense, evaluate, matvec


def brute_force_associator_ok(A):
    mu, al, be = dense(A.mu), dense(A.alpha), dense(A.beta)
    d = A.dim
    e = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    for a, b, c in product(range(d), repeat=3):
        lhs = evaluate(mu, [matvec(al, e[a]), evaluate(mu, [e[b], e[c]])])
        rhs = evaluate(mu, [evaluate(mu, [e[a], e[b]]), matvec(be, e[c])])
        if lhs != rhs:
            return False
    return True


@pytest.mark.parametrize("name", corpus.ALGEBRAS)
def test_corpus_algebras_valid(name, algebras, adjoints):
    A = algebras[name]
    assert algebra_violations(A) == []
    assert brute_force_associator_ok(A)
    assert bimodule_violations(adjoints[name]) == []
    assert check_nary_identity(A, 3)


def test_q_example():
    A = validate_algebra({"dim": 1, "mu": [[[1]]], "alpha": [[1]], "beta": [[1]]})
    assert A.dim == 1


def test_t4_structure_constants(t4):
    for a, b in product(range(4), repeat=2):
        expect = [int(k == 2 * a + b) for k in range(4)]
        assert [t4.mu.entry((a, b, k)) for k in range(4)] == expect
    assert check_nary_identity(t4, 4)
    assert check_nary_identity(t4, 5)


def test_perturbed_t4_reports_witness():
    P = corpus.load("t4_perturbed")
    assert not brute_force_associator_ok(P)
    with pytest.raises(NotBihomAssociative) as exc:
        validate_algebra(P)
    assert exc.value.axiom == "bihom associativity"
    assert len(exc.value.witness) == 3
    assert not check_nary_identity(P, 3)


def test_witness_is_lexicographically_first():
    P = corpus.load("t4_perturbed")
    mu, al, be = dense(P.mu), dense(P.alpha), dense(P.beta)
    e = [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]
    first = next((a, b, c) for a, b, c in product(range(4), repeat=3)
                 if evaluate(mu, [matvec(al, e[a]), evaluate(mu, [e[b], e[c]])])
                 != evaluate(mu, [evaluate(mu, [e[a], e[b]]), matvec(be, e[c])]))
    bad = [v for v in algebra_violations(P) if isinstance(v, NotBihomAssociative)][0]
    assert bad.witness == first


def test_noncommuting_twists_and_shapes():
    with pytest.raises(NonCommutingTwists):
        validate_algebra(make_algebra(QArray.zeros((2, 2, 2)), [[1, 1], [0, 1]], [[1, 0], [0, 2]]))
    with pytest.raises(DimensionMismatch):
        make_algebra(QArray.zeros((2, 2, 2)), [[1]], [[1, 0], [0, 1]])


def test_yau_twist_t4_and_dual_numbers(t4):
    T = yau_twist(corpus.truncated_polynomial(4), corpus.squaring_map(4), np.eye(4, dtype=int).tolist())
    assert T.mu == t4.mu
    dual = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
    D = yau_twist(dual, [[1, 0], [0, -1]], [[1, 0], [0, 0]])
    assert [D.mu.entry((1, 1, k)) for k in range(2)] == [0, 0]
    assert [D.mu.entry((1, 0, k)) for k in range(2)] == [0, -1]
    assert [D.mu.entry((0, 1, k)) for k in range(2)] == [0, 0]
    I = yau_twist(dual, [[1, 0], [0, 1]], [[1, 0], [0, 1]])
    assert I.mu == QArray.from_values(dual)


def test_yau_twist_errors():
    not_assoc = [[[0, 1], [0, 0]], [[1, 0], [0, 0]]]
    with pytest.raises(InputNotAssociative):
        yau_twist(not_assoc, [[1, 0], [0, 1]], [[1, 0], [0, 1]])
    dual = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
    with pytest.raises(MorphismCheckFailed):
        yau_twist(dual, [[0, 1], [1, 0]], [[1, 0], [0, 1]])


def test_tensor_product(algebras, t4):
    Q, D = algebras["q"], algebras["dual_twist"]
    assert tensor_product(Q, t4).mu == t4.mu
    TD, DT = tensor_product(t4, D), tensor_product(D, t4)
    assert TD.dim == 8 and algebra_violations(TD) == []
    assert cochain_space_basis(TD, 1).dim == cochain_space_basis(DT, 1).dim


def test_matrix_algebra(algebras, t4):
    M2 = matrix_algebra(algebras["q"], 2)
    assert M2.mu == algebras["m2q"].mu
    assert matrix_algebra(t4, 1).mu == t4.mu
    big = matrix_algebra(t4, 2)
    assert big.dim == 16 and algebra_violations(big) == []


def test_bimodule_examples(t4, adjoints):
    assert validate_bimodule(t4, bimodule_to_json(adjoints["t4"])).dim == 4
    Z = zero_bimodule(t4, [[1, 0], [0, 2]], [[3, 0], [0, 1]])
    assert bimodule_violations(Z) == []
    left = adjoints["t4"].left.tolist()
    left[0][0][0] += 1
    bad = make_bimodule(t4, left, adjoints["t4"].right, t4.alpha, t4.beta)
    errs = bimodule_violations(bad)
    assert errs and all(isinstance(v, BimoduleAxiomViolation) for v in errs)
    assert "left bihom associativity" in [v.axiom for v in errs]
    assert all(v.witness is not None for v in errs)


def test_semidirect_product(algebras, t4, adjoints):
    Q = algebras["q"]
    S = semidirect_product(Q, adjoints["q"])
    # (m,a)(n,b) = (mb + an, ab): basis (m, a)
    assert [[S.mu.entry((i, j, k)) for k in range(2)] for i in range(2) for j in range(2)] == \
        [[0, 0], [1, 0], [1, 0], [0, 1]]
    assert algebra_violations(semidirect_product(t4, adjoints["t4"])) == []
    Z = zero_bimodule(t4, t4.alpha, t4.beta)
    SZ = semidirect_product(t4, Z)
    assert SZ.mu.num[:4].sum() == 0 and SZ.mu.num[:, :4].sum() == 0


def test_morphisms(t4):
    ident = AlgebraMorphism(t4, t4, QArray.identity(4))
    assert morphism_violations(ident) == []
    assert morphism_violations(AlgebraMorphism(t4, t4, t4.alpha)) == []
    assert morphism_violations(AlgebraMorphism(t4, t4, QArray.identity(4) * 2)) != []


def test_json_round_trip_bit_identical(algebras, adjoints):
    for name, A in algebras.items():
        B = algebra_from_json(algebra_to_json(A))
        assert B.mu == A.mu and B.alpha == A.alpha and B.beta == A.beta
        assert B.mu.num.dtype == A.mu.num.dtype and B.mu.den == A.mu.den
        M = bimodule_from_json(bimodule_to_json(adjoints[name]), B)
        assert M.left == adjoints[name].left


def test_nary_budget(t4):
    with budget(100):
        with pytest.raises(BudgetExceeded):
            check_nary_identity(t4, 4)


def test_adjoint_is_bimodule_for_constructions(algebras):
    for A in (tensor_product(algebras["dual_twist"], algebras["dual_twist"]),
              matrix_algebra(algebras["dual_twist"], 2)):
        assert bimodule_violations(adjoint_bimodule(A)) == []
