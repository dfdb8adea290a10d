import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bihom import corpus
from bihom.errors import ArityMismatch, PositionOutOfRange, TooManyArguments
from bihom.operad import (
    brace,
    circ,
    cochain,
    cochain_from_json,
    cochain_space_basis,
    cochain_to_json,
    gamma,
    gamma_nested,
    gerstenhaber_bracket,
    identity_cochain,
    is_multiplication,
    mu_cochain,
    partial_composition,
    random_cochain,
)
from bihom.qarray import QArray

import oracles as O


def sign(e):
    return -1 if e % 2 else 1


@pytest.mark.parametrize("name", ["q", "dual_twist", "t4", "m2q"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_basis_dimension_matches_sympy_oracle(algebras, name, n):
    A = algebras[name]
    if A.dim ** (n + 1) > 300:
        pytest.skip("oracle too slow for this size")
    B = cochain_space_basis(A, n)
    al, be = O.dense(A.alpha), O.dense(A.beta)
    assert B.dim == O.cochain_space_dim(al, be, al, be, n, A.dim, A.dim)
    for b in B.basis:
        assert b.is_twist_compatible()
    rows = [O.flat(O.dense(b.coeffs)) for b in B.basis]
    assert O.rank(rows) == B.dim


def test_q_and_untwisted_spaces(algebras):
    Q = algebras["q"]
    assert all(cochain_space_basis(Q, n).dim == 1 for n in (1, 2, 3, 4))
    M2 = algebras["m2q"]
    assert cochain_space_basis(M2, 2).dim == 4 ** 3


def test_t4_arity_one_contains_structure_maps(t4):
    B = cochain_space_basis(t4, 1)
    for m in (QArray.identity(4), t4.alpha, t4.beta):
        assert B.contains(cochain(t4, m.transpose((1, 0))))


def test_module_basis_matches_oracle(t4, adjoints):
    M = adjoints["t4"]
    B = cochain_space_basis(t4, 2, M)
    al, be = O.dense(t4.alpha), O.dense(t4.beta)
    assert B.dim == O.cochain_space_dim(al, be, O.dense(M.alpha_m), O.dense(M.beta_m), 2, 4, 4)


def test_mu_partial_compositions_are_associativity(t4):
    mu = mu_cochain(t4)
    assert partial_composition(mu, 1, mu) == partial_composition(mu, 2, mu)
    assert is_multiplication(t4)
    assert not is_multiplication(corpus.load("t4_perturbed"))
    assert circ(mu, mu).is_zero()


def test_identity_unit_laws(t4, rng):
    e = identity_cochain(t4)
    f = random_cochain(t4, 3, rng)
    for i in (1, 2, 3):
        assert partial_composition(f, i, e) == f
    assert partial_composition(e, 1, f) == f
    assert gamma(f, [e, e, e]) == f
    assert gamma(e, [f]) == f
    with pytest.raises(PositionOutOfRange):
        partial_composition(f, 4, e)
    with pytest.raises(ArityMismatch):
        gamma(f, [e])
    with pytest.raises(TooManyArguments):
        brace(e, [f, f])


@pytest.mark.parametrize("name", ["dual_twist", "t4"])
def test_compositions_match_oracle(algebras, name, rng):
    A = algebras[name]
    al, be, d = O.dense(A.alpha), O.dense(A.beta), A.dim
    f, g, h = (random_cochain(A, n, rng) for n in (3, 2, 1))
    F, G, H = (O.dense(c.coeffs) for c in (f, g, h))
    for i in (1, 2, 3):
        assert O.dense(partial_composition(f, i, g).coeffs) == O.partial_composition(F, 3, i, G, 2, al, be, d)
    assert O.dense(circ(f, g).coeffs) == O.circ(F, 3, G, 2, al, be, d)
    assert O.dense(gamma(f, [g, h, g]).coeffs) == O.gamma(F, 3, [(G, 2), (H, 1), (G, 2)], al, be, d)
    assert O.dense(brace(f, [g, h]).coeffs) == O.brace(F, 3, [(G, 2), (H, 1)], al, be, d)
    assert O.dense(brace(f, [g]).coeffs) == O.dense(circ(f, g).coeffs)
    assert brace(f, []) == f


def test_brace_reproduces_cup_sign(t4, rng):
    from bihom.cohomology import cup
    mu = mu_cochain(t4)
    for m, n in ((1, 1), (1, 2), (2, 1), (2, 2)):
        f, g = random_cochain(t4, m, rng), random_cochain(t4, n, rng)
        assert cup(t4, f, g) == brace(mu, [f, g]) * sign(f.degree + 1)


def test_bracket_examples(algebras, rng):
    Q = algebras["q"]
    e = identity_cochain(Q)
    assert circ(e, e) == e
    assert gerstenhaber_bracket(e, e).is_zero()
    A = algebras["t4"]
    mu = mu_cochain(A)
    assert gerstenhaber_bracket(mu, mu) == circ(mu, mu) * 2
    f = random_cochain(A, 2, rng)
    assert gerstenhaber_bracket(f, f) == circ(f, f) * 2
    g = random_cochain(A, 3, rng)
    assert gerstenhaber_bracket(f, g) == gerstenhaber_bracket(g, f) * -sign(f.degree * g.degree)


def _triple(A, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2 ** 32 - 1)))
    arities = [data.draw(st.integers(1, 3)) for _ in range(3)]
    return [random_cochain(A, n, rng) for n in arities]


@settings(max_examples=25, deadline=None)
@given(st.data(), st.sampled_from(["dual_twist", "t4"]))
def test_operad_axioms_property(data, name):
    A = corpus.load(name)
    f, g, h = _triple(A, data)
    m, n = f.arity, g.arity
    i = data.draw(st.integers(1, m))
    j = data.draw(st.integers(1, n))
    assert partial_composition(partial_composition(f, i, g), i + j - 1, h) == \
        partial_composition(f, i, partial_composition(g, j, h))
    if m >= 2:
        i, j = sorted(data.draw(st.lists(st.integers(1, m), min_size=2, max_size=2, unique=True)))
        assert partial_composition(partial_composition(f, i, g), j + n - 1, h) == \
            partial_composition(partial_composition(f, j, h), i, g)
    gs = [g] + [h] * (m - 1)
    assert gamma(f, gs) == gamma_nested(f, gs)


@settings(max_examples=25, deadline=None)
@given(st.data(), st.sampled_from(["dual_twist", "t4"]))
def test_pre_lie_and_jacobi_property(data, name):
    A = corpus.load(name)
    f, g, h = _triple(A, data)
    lhs = circ(circ(f, g), h) - circ(f, circ(g, h))
    rhs = circ(circ(f, h), g) - circ(f, circ(h, g))
    assert lhs == rhs * sign(g.degree * h.degree)
    br = gerstenhaber_bracket
    F, G, H = f.degree, g.degree, h.degree
    jac = br(br(f, g), h) * sign(F * H) + br(br(g, h), f) * sign(G * F) + br(br(h, f), g) * sign(H * G)
    assert jac.is_zero()


def test_closure_under_operations(t4, rng):
    f, g = random_cochain(t4, 2, rng), random_cochain(t4, 2, rng)
    for c in (partial_composition(f, 1, g), gamma(f, [g, g]), brace(f, [g]), circ(f, g),
              gerstenhaber_bracket(f, g)):
        assert c.is_twist_compatible()


def test_cochain_json_round_trip(t4, adjoints, rng):
    f = random_cochain(t4, 2, rng)
    assert cochain_from_json(cochain_to_json(f), t4) == f
    g = random_cochain(t4, 1, rng, adjoints["t4"])
    assert cochain_from_json(cochain_to_json(g), t4, adjoints["t4"]) == g
