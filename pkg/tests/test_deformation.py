import pytest

from bihom.cohomology import coboundary, is_cocycle
from bihom.deformation import (
    FormalAutomorphism,
    TruncatedDeformation,
    check_equivalence,
    circ_residual,
    deformation_from_json,
    deformation_to_json,
    elementwise_residual,
    extend_deformation,
    inverse_series,
    obstruction,
    obstruction_certificate,
    transport_deformation,
    trivial_deformation,
    trivialize_first_order,
    verify_deformation,
)
from bihom.errors import ArityMismatch, NotVerified, OrderMismatch
from bihom.operad import circ, cochain, mu_cochain, random_cochain, zero_cochain
from bihom.selftest import cocycle_basis as cocycles


def test_trivial_deformation(t4):
    D = trivial_deformation(t4, 3)
    rep = verify_deformation(D)
    assert rep.verified and rep.formulations_agree
    assert obstruction(D).is_zero()
    assert extend_deformation(D).is_zero()


@pytest.mark.parametrize("name", ["q", "dual_twist", "t4"])
def test_order_one_residual_is_delta(algebras, name, rng):
    A = algebras[name]
    for _ in range(5):
        mu1 = random_cochain(A, 2, rng)
        D = TruncatedDeformation(A, [mu1])
        assert elementwise_residual(D, 1) == coboundary(A, None, mu1)
        assert circ_residual(D, 1) == -coboundary(A, None, mu1)
        assert verify_deformation(D).verified == is_cocycle(A, None, mu1)
        assert verify_deformation(D).formulations_agree


def test_q_scaled_product(algebras):
    Q = algebras["q"]
    mu = mu_cochain(Q)
    D = TruncatedDeformation(Q, [mu, zero_cochain(Q, 2)])
    assert circ(mu, mu).is_zero()
    assert verify_deformation(D).verified


@pytest.mark.parametrize("name", ["dual_twist", "t4"])
def test_obstructions_are_cocycles(algebras, name):
    A = algebras[name]
    for z in cocycles(A, None, 2):
        D = TruncatedDeformation(A, [z])
        ob = obstruction(D)
        assert ob == -circ(z, z)
        assert is_cocycle(A, None, ob)
        nxt = extend_deformation(D)
        if nxt is None:
            assert obstruction_certificate(D) is not None
            continue
        assert coboundary(A, None, nxt) == -ob
        D2 = D.extended(nxt)
        assert verify_deformation(D2).verified
        assert is_cocycle(A, None, obstruction(D2))


def test_q_extends_to_order_four(algebras):
    Q = algebras["q"]
    D = TruncatedDeformation(Q, [mu_cochain(Q) * 3])
    while D.order < 4:
        D = D.extended(extend_deformation(D))
        assert verify_deformation(D).verified


def test_obstruction_requires_verified(t4, rng):
    D = TruncatedDeformation(t4, [random_cochain(t4, 2, rng)])
    with pytest.raises(NotVerified):
        obstruction(D)
    with pytest.raises(ArityMismatch):
        TruncatedDeformation(t4, [random_cochain(t4, 1, rng)])


def test_equivalence(t4, rng):
    z = cocycles(t4, None, 2)[0]
    D = TruncatedDeformation(t4, [z])
    ident = FormalAutomorphism(t4, [zero_cochain(t4, 1)])
    assert check_equivalence(D, D, ident)
    phi1 = random_cochain(t4, 1, rng)
    Phi = FormalAutomorphism(t4, [phi1])
    D2 = transport_deformation(D, Phi)
    assert check_equivalence(D, D2, Phi)
    assert verify_deformation(D2).verified
    # infinitesimals of equivalent deformations differ by a coboundary
    assert D.term(1) - D2.term(1) == coboundary(t4, None, phi1)
    bad = D2.term(1).coeffs.tolist()
    bad[0][0][0] += 1
    D3 = TruncatedDeformation(t4, [cochain(t4, bad)])
    assert not check_equivalence(D, D3, Phi)
    with pytest.raises(OrderMismatch):
        check_equivalence(D, D.extended(zero_cochain(t4, 2)), Phi)


def test_order_two_transport_and_inverse(t4, rng):
    z = cocycles(t4, None, 2)[0]
    D = TruncatedDeformation(t4, [z])
    D = D.extended(extend_deformation(D))
    Phi = FormalAutomorphism(t4, [random_cochain(t4, 1, rng), random_cochain(t4, 1, rng)])
    D2 = transport_deformation(D, Phi)
    assert verify_deformation(D2).verified
    assert check_equivalence(D, D2, Phi)
    psi = inverse_series(Phi)
    Psi = FormalAutomorphism(t4, psi)
    assert check_equivalence(D2, D, Psi)


def test_trivialize(algebras, t4, rng):
    g = random_cochain(t4, 1, rng)
    D = TruncatedDeformation(t4, [coboundary(t4, None, g)])
    phi = trivialize_first_order(D)
    assert phi is not None and coboundary(t4, None, phi) == D.term(1)
    Q = algebras["q"]
    for c in (1, -2):
        D = TruncatedDeformation(Q, [mu_cochain(Q) * c])
        assert trivialize_first_order(D) is not None
    # H^2(T4) != 0: some cocycle is not a coboundary
    assert any(trivialize_first_order(TruncatedDeformation(t4, [z])) is None
               for z in cocycles(t4, None, 2))


def test_json_round_trip(algebras):
    Q = algebras["q"]
    D = TruncatedDeformation(Q, [mu_cochain(Q), zero_cochain(Q, 2)])
    raw = deformation_to_json(D)
    D2 = deformation_from_json(raw, Q)
    assert [t.coeffs for t in D2.terms] == [t.coeffs for t in D.terms]
    raw["order"] = 5
    with pytest.raises(OrderMismatch):
        deformation_from_json(raw, Q)
