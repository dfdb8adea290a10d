"""Truncated formal deformations ``mu_t = mu + mu_1 t + ... + mu_n t^n``.

Two residuals are computed for each order ``m``: the elementwise one,

    sum_{i+j=m} mu_i(alpha a, mu_j(b, c)) - mu_i(mu_j(a, b), beta c),

and ``sum_{i+j=m} mu_i o mu_j``.  With the circle product used here the
second is exactly the negative of the first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import BihomAlgebra
from .cohomology import class_certificate, coboundary, find_primitive
from .errors import ArityMismatch, NotVerified, OrderMismatch, TargetMismatch
from .maps import apply_inputs, apply_output, insert
from .operad import Cochain, _same, circ, cochain, identity_cochain, mu_cochain, zero_cochain


def _mat(c: Cochain):
    """Matrix of an arity-1 cochain (coefficients are stored input-first)."""
    return c.coeffs.transpose((1, 0))


def _check_terms(A: BihomAlgebra, terms: Sequence[Cochain], arity: int) -> None:
    for t in terms:
        if t.arity != arity:
            raise ArityMismatch(f"expected arity-{arity} terms, got arity {t.arity}")
        if t.module is not None or not _same(t.base, A):
            raise TargetMismatch("deformation terms must be self-cochains of the base")


@dataclass(frozen=True, eq=False)
class TruncatedDeformation:
    base: BihomAlgebra
    terms: tuple  # (mu_1, ..., mu_n)

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        _check_terms(self.base, self.terms, 2)

    @property
    def order(self) -> int:
        return len(self.terms)

    def term(self, i: int) -> Cochain:
        return mu_cochain(self.base) if i == 0 else self.terms[i - 1]

    def extended(self, mu_next: Cochain) -> "TruncatedDeformation":
        return TruncatedDeformation(self.base, self.terms + (mu_next,))


def trivial_deformation(A: BihomAlgebra, order: int) -> TruncatedDeformation:
    return TruncatedDeformation(A, [zero_cochain(A, 2)] * order)


@dataclass(frozen=True, eq=False)
class FormalAutomorphism:
    base: BihomAlgebra
    terms: tuple  # (phi_1, ..., phi_n)

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        _check_terms(self.base, self.terms, 1)

    @property
    def order(self) -> int:
        return len(self.terms)

    def term(self, i: int) -> Cochain:
        return identity_cochain(self.base) if i == 0 else self.terms[i - 1]


# -- verification -----------------------------------------------------------

def elementwise_residual(D: TruncatedDeformation, m: int) -> Cochain:
    A = D.base
    total = zero_cochain(A, 3)
    for i in range(m + 1):
        mi, mj = D.term(i).coeffs, D.term(m - i).coeffs
        left = insert(mi, 1, mj, [A.alpha, None])
        right = insert(mi, 0, mj, [None, A.beta])
        total = total + Cochain(left - right, A)
    return total


def circ_residual(D: TruncatedDeformation, m: int) -> Cochain:
    total = zero_cochain(D.base, 3)
    for i in range(m + 1):
        total = total + circ(D.term(i), D.term(m - i))
    return total


@dataclass(frozen=True)
class OrderCheck:
    order: int
    elementwise_zero: bool
    circ_zero: bool
    witness: tuple | None

    @property
    def ok(self) -> bool:
        return self.elementwise_zero and self.circ_zero


@dataclass(frozen=True)
class DeformationReport:
    orders: tuple = field(default_factory=tuple)

    @property
    def verified(self) -> bool:
        return all(o.ok for o in self.orders)

    @property
    def formulations_agree(self) -> bool:
        return all(o.elementwise_zero == o.circ_zero for o in self.orders)

    def to_json(self) -> dict:
        return {"verified": self.verified,
                "orders": [{"order": o.order, "elementwise_zero": o.elementwise_zero,
                            "circ_zero": o.circ_zero,
                            "witness": list(o.witness) if o.witness else None}
                           for o in self.orders]}


def verify_deformation(D: TruncatedDeformation) -> DeformationReport:
    out = []
    for m in range(1, D.order + 1):
        e = elementwise_residual(D, m)
        c = circ_residual(D, m)
        out.append(OrderCheck(m, e.is_zero(), c.is_zero(), e.coeffs.first_nonzero()))
    return DeformationReport(tuple(out))


# -- obstructions and extension ---------------------------------------------

def obstruction(D: TruncatedDeformation) -> Cochain:
    """``-sum_{i+j=n+1, i,j>=1} mu_i o mu_j`` for a verified order-``n`` deformation."""
    if not verify_deformation(D).verified:
        raise NotVerified("obstruction needs a verified deformation")
    n = D.order
    total = zero_cochain(D.base, 3)
    for i in range(1, n + 1):
        total = total - circ(D.term(i), D.term(n + 1 - i))
    return total


def extend_deformation(D: TruncatedDeformation) -> Cochain | None:
    """A next term ``mu_{n+1}``, or None when the obstruction class is nonzero.

    The order-``n+1`` equation reads ``mu o mu_{n+1} + mu_{n+1} o mu = Ob``,
    and the left side is ``-delta mu_{n+1}``, so we solve ``delta x = -Ob``.
    """
    ob = obstruction(D)
    if ob.is_zero():
        return zero_cochain(D.base, 2)
    return find_primitive(D.base, None, -ob)


def obstruction_certificate(D: TruncatedDeformation) -> list[Fraction] | None:
    """Functional separating the obstruction from all coboundaries, if any."""
    return class_certificate(D.base, None, obstruction(D))


# -- equivalence ------------------------------------------------------------

def _equivalence_sides(D, D2, Phi, m: int) -> tuple[Cochain, Cochain]:
    A = D.base
    lhs = zero_cochain(A, 2)
    for i in range(m + 1):
        lhs = lhs + Cochain(apply_output(D.term(m - i).coeffs, _mat(Phi.term(i))), A)
    rhs = zero_cochain(A, 2)
    for i in range(m + 1):
        for j in range(m + 1 - i):
            k = m - i - j
            t = apply_inputs(D2.term(i).coeffs, [_mat(Phi.term(j)), _mat(Phi.term(k))])
            rhs = rhs + Cochain(t, A)
    return lhs, rhs


def check_equivalence(D: TruncatedDeformation, D2: TruncatedDeformation,
                      Phi: FormalAutomorphism) -> bool:
    """Whether ``phi_t(mu_t(a, b)) = mu'_t(phi_t a, phi_t b)`` modulo ``t^(n+1)``."""
    if not (_same(D.base, D2.base) and _same(D.base, Phi.base)):
        raise TargetMismatch("deformations and automorphism need a common base")
    if not D.order == D2.order == Phi.order:
        raise OrderMismatch(f"orders {D.order}, {D2.order}, {Phi.order}")
    for m in range(1, D.order + 1):
        lhs, rhs = _equivalence_sides(D, D2, Phi, m)
        if lhs != rhs:
            return False
    return True


def inverse_series(Phi: FormalAutomorphism) -> list[Cochain]:
    """Terms ``psi_1..psi_n`` of ``phi_t^{-1}`` modulo ``t^(n+1)``."""
    A = Phi.base
    psi = [identity_cochain(A)]
    for m in range(1, Phi.order + 1):
        acc = zero_cochain(A, 1)
        for i in range(1, m + 1):
            acc = acc - Cochain(apply_output(psi[m - i].coeffs, _mat(Phi.term(i))), A)
        psi.append(acc)
    return psi[1:]


def transport_deformation(D: TruncatedDeformation, Phi: FormalAutomorphism) -> TruncatedDeformation:
    """The deformation ``phi_t o mu_t o (phi_t^{-1} x phi_t^{-1})``, equivalent to ``D`` via ``Phi``."""
    if D.order != Phi.order:
        raise OrderMismatch(f"orders {D.order} and {Phi.order}")
    A = D.base
    psi = [identity_cochain(A)] + inverse_series(Phi)
    terms = []
    for m in range(1, D.order + 1):
        acc = zero_cochain(A, 2)
        for i in range(m + 1):
            for j in range(m + 1 - i):
                for k in range(m + 1 - i - j):
                    l = m - i - j - k
                    t = apply_inputs(D.term(j).coeffs, [_mat(psi[k]), _mat(psi[l])])
                    acc = acc + Cochain(apply_output(t, _mat(Phi.term(i))), A)
        terms.append(acc)
    return TruncatedDeformation(A, terms)


def trivialize_first_order(D: TruncatedDeformation) -> Cochain | None:
    """``phi_1`` with ``delta phi_1 = mu_1``, or None when ``mu_1`` is not a coboundary."""
    if D.order < 1:
        raise OrderMismatch("need a deformation of order at least 1")
    if not coboundary(D.base, None, D.term(1)).is_zero():
        raise NotVerified("mu_1 is not a cocycle")
    mu1 = D.term(1)
    if mu1.is_zero():
        return zero_cochain(D.base, 1)
    return find_primitive(D.base, None, mu1)


# -- serialization ----------------------------------------------------------

def deformation_to_json(D: TruncatedDeformation) -> dict:
    return {"kind": "deformation", "base": D.base.label, "order": D.order,
            "terms": [t.coeffs.to_json() for t in D.terms]}


def deformation_from_json(raw: dict, A: BihomAlgebra) -> TruncatedDeformation:
    terms = [cochain(A, t) for t in raw.get("terms", [])]
    D = TruncatedDeformation(A, terms)
    if "order" in raw and int(raw["order"]) != D.order:
        raise OrderMismatch(f"declared order {raw['order']} but {D.order} terms given")
    return D
