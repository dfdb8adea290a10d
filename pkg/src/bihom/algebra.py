"""Finite-dimensional bihom-associative algebras and their bimodules.

An algebra is a structure-constant tensor ``mu[i, j, k]`` plus two commuting
twist matrices; all axioms are checked on every basis tuple at once by
forming the residual tensor and reporting its first nonzero index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BimoduleAxiomViolation,
    DimensionMismatch,
    InputNotAssociative,
    MorphismCheckFailed,
    MorphismInvalid,
    NonCommutingTwists,
    NotBihomAssociative,
    NotMultiplicative,
    AxiomViolation,
)
from .maps import apply_inputs, apply_output, check_budget, insert
from .qarray import QArray, is_identity, kron, matrix_power, outer, block_diag


@dataclass(frozen=True, eq=False)
class BihomAlgebra:
    dim: int
    mu: QArray
    alpha: QArray
    beta: QArray
    label: str = ""
    _powers: dict = field(default_factory=dict, repr=False, compare=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BihomAlgebra):
            return NotImplemented
        return (self.dim == other.dim and self.mu == other.mu
                and self.alpha == other.alpha and self.beta == other.beta)

    __hash__ = object.__hash__

    def twist_power(self, which: str, k: int) -> QArray | None:
        """``alpha**k`` or ``beta**k``; None stands for the identity."""
        key = (which, k)
        if key not in self._powers:
            m = self.alpha if which == "alpha" else self.beta
            p = matrix_power(m, k) if k else None
            self._powers[key] = None if p is None or is_identity(p) else p
        return self._powers[key]

    def alpha_pow(self, k: int) -> QArray | None:
        return self.twist_power("alpha", k)

    def beta_pow(self, k: int) -> QArray | None:
        return self.twist_power("beta", k)

    def product(self, x: QArray, y: QArray) -> QArray:
        """``mu(x, y)`` for coordinate vectors."""
        return self.mu.tensordot(x, ([0], [0])).tensordot(y, ([0], [0]))

    def with_label(self, label: str) -> "BihomAlgebra":
        return BihomAlgebra(self.dim, self.mu, self.alpha, self.beta, label)


@dataclass(frozen=True, eq=False)
class Bimodule:
    dim: int
    left: QArray   # left[i, p, q]:  e_i . f_p = sum_q left[i,p,q] f_q
    right: QArray  # right[p, i, q]: f_p . e_i = sum_q right[p,i,q] f_q
    alpha_m: QArray
    beta_m: QArray
    base: BihomAlgebra
    label: str = ""
    _powers: dict = field(default_factory=dict, repr=False, compare=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Bimodule):
            return NotImplemented
        return (self.dim == other.dim and self.left == other.left
                and self.right == other.right and self.alpha_m == other.alpha_m
                and self.beta_m == other.beta_m and self.base == other.base)

    __hash__ = object.__hash__

    def twist_power(self, which: str, k: int) -> QArray | None:
        key = (which, k)
        if key not in self._powers:
            m = self.alpha_m if which == "alpha" else self.beta_m
            p = matrix_power(m, k) if k else None
            self._powers[key] = None if p is None or is_identity(p) else p
        return self._powers[key]


@dataclass(frozen=True, eq=False)
class AlgebraMorphism:
    source: BihomAlgebra
    target: BihomAlgebra
    matrix: QArray  # shape (target.dim, source.dim)


def _q(x) -> QArray:
    return x if isinstance(x, QArray) else QArray.from_values(x)


def make_algebra(mu, alpha, beta, label: str = "") -> BihomAlgebra:
    """Build without validating; shapes are checked."""
    mu, alpha, beta = _q(mu), _q(alpha), _q(beta)
    if mu.ndim != 3 or len(set(mu.shape)) != 1:
        raise DimensionMismatch(f"mu must be d x d x d, got {mu.shape}")
    d = mu.shape[0]
    for name, m in (("alpha", alpha), ("beta", beta)):
        if m.shape != (d, d):
            raise DimensionMismatch(f"{name} must be {d} x {d}, got {m.shape}")
    return BihomAlgebra(d, mu, alpha, beta, label)


def identity_algebra_twists(mu, label: str = "") -> BihomAlgebra:
    mu = _q(mu)
    d = mu.shape[0]
    return make_algebra(mu, QArray.identity(d), QArray.identity(d), label)


# -- residual tensors ---------------------------------------------------

def associator(A: BihomAlgebra) -> QArray:
    """``mu(alpha a, mu(b, c)) - mu(mu(a, b), beta c)`` indexed ``[a, b, c, k]``."""
    lhs = insert(A.mu, 1, A.mu, [A.alpha_pow(1), None])
    rhs = insert(A.mu, 0, A.mu, [None, A.beta_pow(1)])
    return lhs - rhs


def multiplicativity_defect(mu: QArray, m: QArray) -> QArray:
    return apply_output(mu, m) - apply_inputs(mu, [m, m])


def algebra_violations(A: BihomAlgebra) -> list[AxiomViolation]:
    out: list[AxiomViolation] = []
    comm = A.alpha @ A.beta - A.beta @ A.alpha
    w = comm.first_nonzero()
    if w is not None:
        out.append(NonCommutingTwists("twists commute", w, "alpha.beta != beta.alpha"))
    w = associator(A).first_nonzero()
    if w is not None:
        out.append(NotBihomAssociative("bihom associativity", w[:3],
                                       "mu(alpha a, mu(b,c)) != mu(mu(a,b), beta c)"))
    for name, m in (("alpha", A.alpha), ("beta", A.beta)):
        w = multiplicativity_defect(A.mu, m).first_nonzero()
        if w is not None:
            out.append(NotMultiplicative(f"{name} multiplicative", w[:2],
                                         f"{name}(mu(a,b)) != mu({name} a, {name} b)"))
    return out


def validate_algebra(spec) -> BihomAlgebra:
    """Parse (if needed) and validate; raises the first violated axiom."""
    if isinstance(spec, BihomAlgebra):
        A = spec
    else:
        from .io import algebra_from_json
        A = algebra_from_json(spec)
    bad = algebra_violations(A)
    if bad:
        bad[0].violations = bad
        raise bad[0]
    return A


def is_valid_algebra(A: BihomAlgebra) -> bool:
    return not algebra_violations(A)


# -- constructions --------------------------------------------------------

def yau_twist(mu_assoc, alpha, beta, label: str = "") -> BihomAlgebra:
    mu_assoc, alpha, beta = _q(mu_assoc), _q(alpha), _q(beta)
    base = identity_algebra_twists(mu_assoc)
    w = associator(base).first_nonzero()
    if w is not None:
        raise InputNotAssociative(f"input product is not associative at {w[:3]}")
    for name, m in (("alpha", alpha), ("beta", beta)):
        if m.shape != (base.dim, base.dim):
            raise DimensionMismatch(f"{name} has shape {m.shape}")
        if not multiplicativity_defect(mu_assoc, m).is_zero():
            raise MorphismCheckFailed(f"{name} is not an algebra morphism")
    if not (alpha @ beta - beta @ alpha).is_zero():
        raise MorphismCheckFailed("alpha and beta do not commute")
    mu = apply_inputs(mu_assoc, [alpha, beta])
    return validate_algebra(make_algebra(mu, alpha, beta, label))


def tensor_product(A: BihomAlgebra, B: BihomAlgebra, label: str = "") -> BihomAlgebra:
    d, e = A.dim, B.dim
    mu = outer(A.mu, B.mu).transpose((0, 3, 1, 4, 2, 5)).reshape((d * e,) * 3)
    T = make_algebra(mu, kron(A.alpha, B.alpha), kron(A.beta, B.beta),
                     label or f"{A.label}(x){B.label}")
    return validate_algebra(T)


def matrix_algebra(A: BihomAlgebra, n: int, label: str = "") -> BihomAlgebra:
    """``M_n(A)``; basis ``E_pq (x) e_i`` at index ``(p*n + q)*d + i``."""
    if n < 1:
        raise ValueError("n must be positive")
    d = A.dim
    D = n * n * d
    num = np.zeros((D, D, D), dtype=object)
    mu_num = A.mu.num
    for p in range(n):
        for q in range(n):
            for s in range(n):
                x0 = (p * n + q) * d
                y0 = (q * n + s) * d
                z0 = (p * n + s) * d
                num[x0:x0 + d, y0:y0 + d, z0:z0 + d] = mu_num
    mu = QArray(num, A.mu.den)
    eye = QArray.identity(n * n)
    M = make_algebra(mu, kron(eye, A.alpha), kron(eye, A.beta),
                     label or f"M{n}({A.label})")
    return validate_algebra(M)


# -- bimodules -------------------------------------------------------------

def make_bimodule(A: BihomAlgebra, left, right, alpha_m, beta_m, label: str = "") -> Bimodule:
    left, right, alpha_m, beta_m = _q(left), _q(right), _q(alpha_m), _q(beta_m)
    if alpha_m.ndim != 2 or alpha_m.shape[0] != alpha_m.shape[1]:
        raise DimensionMismatch(f"alpha_m must be square, got {alpha_m.shape}")
    m = alpha_m.shape[0]
    d = A.dim
    checks = (("left", left, (d, m, m)), ("right", right, (m, d, m)),
              ("beta_m", beta_m, (m, m)))
    for name, t, shape in checks:
        if t.shape != shape:
            raise DimensionMismatch(f"{name} must have shape {shape}, got {t.shape}")
    return Bimodule(m, left, right, alpha_m, beta_m, A, label)


def adjoint_bimodule(A: BihomAlgebra, label: str = "") -> Bimodule:
    return Bimodule(A.dim, A.mu, A.mu, A.alpha, A.beta, A, label or f"{A.label}-adj")


def zero_bimodule(A: BihomAlgebra, alpha_m, beta_m, label: str = "") -> Bimodule:
    alpha_m, beta_m = _q(alpha_m), _q(beta_m)
    m = alpha_m.shape[0]
    return make_bimodule(A, QArray.zeros((A.dim, m, m)), QArray.zeros((m, A.dim, m)),
                         alpha_m, beta_m, label)


def bimodule_violations(M: Bimodule) -> list[AxiomViolation]:
    A = M.base
    a, b = A.alpha, A.beta
    am, bm = M.alpha_m, M.beta_m
    l, r = M.left, M.right
    residuals = [
        ("module twists commute", am @ bm - bm @ am),
        ("left alpha-equivariance", apply_output(l, am) - apply_inputs(l, [a, am])),
        ("left beta-equivariance", apply_output(l, bm) - apply_inputs(l, [b, bm])),
        ("left bihom associativity",
         insert(l, 1, l, [a, None]) - insert(l, 0, A.mu, [None, bm])),
        ("right alpha-equivariance", apply_output(r, am) - apply_inputs(r, [am, a])),
        ("right beta-equivariance", apply_output(r, bm) - apply_inputs(r, [bm, b])),
        ("right bihom associativity",
         insert(r, 0, r, [None, b]) - insert(r, 1, A.mu, [am, None])),
        ("bimodule compatibility",
         insert(l, 1, r, [a, None]) - insert(r, 0, l, [None, b])),
    ]
    out = []
    for name, t in residuals:
        w = t.first_nonzero()
        if w is not None:
            witness = w if t.ndim == 2 else w[:-1]
            out.append(BimoduleAxiomViolation(name, witness))
    return out


def validate_bimodule(A: BihomAlgebra, spec) -> Bimodule:
    if isinstance(spec, Bimodule):
        M = spec
    else:
        from .io import bimodule_from_json
        M = bimodule_from_json(spec, A)
    bad = bimodule_violations(M)
    if bad:
        bad[0].violations = bad
        raise bad[0]
    return M


def direct_sum_bimodule(M: Bimodule, N: Bimodule, label: str = "") -> Bimodule:
    if M.base is not N.base and M.base != N.base:
        raise ValueError("bimodules over different algebras")
    A = M.base
    m, n = M.dim, N.dim
    d = A.dim
    left = np.zeros((d, m + n, m + n), dtype=object)
    right = np.zeros((m + n, d, m + n), dtype=object)
    lM, lN = M.left.tolist(), N.left.tolist()
    rM, rN = M.right.tolist(), N.right.tolist()
    for i in range(d):
        for p in range(m):
            for q in range(m):
                left[i, p, q] = lM[i][p][q]
                right[p, i, q] = rM[p][i][q]
        for p in range(n):
            for q in range(n):
                left[i, m + p, m + q] = lN[i][p][q]
                right[m + p, i, m + q] = rN[p][i][q]
    return make_bimodule(A, QArray.from_values(left), QArray.from_values(right),
                         block_diag([M.alpha_m, N.alpha_m]),
                         block_diag([M.beta_m, N.beta_m]), label)


def semidirect_product(A: BihomAlgebra, M: Bimodule, label: str = "") -> BihomAlgebra:
    """Algebra on ``M (+) A`` with module coordinates first."""
    return validate_algebra(_block_algebra(A, M, None, label or f"{M.label}x|{A.label}"))


def _block_algebra(A: BihomAlgebra, M: Bimodule, f: QArray | None, label: str) -> BihomAlgebra:
    m, d = M.dim, A.dim
    D = m + d
    parts = [A.mu, M.left, M.right] + ([f] if f is not None else [])
    from math import lcm
    from functools import reduce
    den = reduce(lcm, (p.den for p in parts), 1)

    def sc(p: QArray) -> np.ndarray:
        return p.num.astype(object) * (den // p.den)

    num = np.zeros((D, D, D), dtype=object)
    num[m:, m:, m:] = sc(A.mu)
    num[m:, :m, :m] = sc(M.left)
    num[:m, m:, :m] = sc(M.right)
    if f is not None:
        num[m:, m:, :m] = sc(f)
    mu = QArray(num, den)
    return make_algebra(mu, block_diag([M.alpha_m, A.alpha]),
                        block_diag([M.beta_m, A.beta]), label)


# -- n-ary identity ---------------------------------------------------------

def check_nary_identity(A: BihomAlgebra, n: int) -> bool:
    """Right-nested alpha-twisted product equals left-nested beta-twisted product."""
    if n < 3:
        raise ValueError("n must be at least 3")
    check_budget(A.dim ** (n + 1), f"{n}-ary identity scan")
    right = A.mu
    left = A.mu
    for j in range(2, n):
        right = insert(A.mu, 1, right, [A.alpha_pow(j - 1), None])
        left = insert(A.mu, 0, left, [None, A.beta_pow(j - 1)])
    return right == left


# -- morphisms --------------------------------------------------------------

def morphism_violations(phi: AlgebraMorphism) -> list[AxiomViolation]:
    S, T, P = phi.source, phi.target, phi.matrix
    if P.shape != (T.dim, S.dim):
        return [MorphismInvalid("shape", None, f"expected {(T.dim, S.dim)}, got {P.shape}")]
    checks = [
        ("preserves product", apply_output(S.mu, P) - apply_inputs(T.mu, [P, P])),
        ("commutes with alpha", P @ S.alpha - T.alpha @ P),
        ("commutes with beta", P @ S.beta - T.beta @ P),
    ]
    out = []
    for name, t in checks:
        w = t.first_nonzero()
        if w is not None:
            out.append(MorphismInvalid(name, w))
    return out


def validate_morphism(phi: AlgebraMorphism) -> AlgebraMorphism:
    bad = morphism_violations(phi)
    if bad:
        raise bad[0]
    return phi


def bimodule_morphism_violations(psi: QArray, M: Bimodule, N: Bimodule) -> list[AxiomViolation]:
    if psi.shape != (N.dim, M.dim):
        return [MorphismInvalid("shape", None, f"expected {(N.dim, M.dim)}, got {psi.shape}")]
    checks = [
        ("commutes with alpha", psi @ M.alpha_m - N.alpha_m @ psi),
        ("commutes with beta", psi @ M.beta_m - N.beta_m @ psi),
        ("preserves left action", apply_output(M.left, psi) - apply_inputs(N.left, [None, psi])),
        ("preserves right action", apply_output(M.right, psi) - apply_inputs(N.right, [psi, None])),
    ]
    out = []
    for name, t in checks:
        w = t.first_nonzero()
        if w is not None:
            out.append(MorphismInvalid(name, w))
    return out


def pullback_bimodule(phi: AlgebraMorphism, M: Bimodule, label: str = "") -> Bimodule:
    """``phi^* M``: the ``phi.target``-bimodule ``M`` seen over ``phi.source``."""
    validate_morphism(phi)
    P = phi.matrix
    left = apply_inputs(M.left, [P, None])
    right = apply_inputs(M.right, [None, P])
    return Bimodule(M.dim, left, right, M.alpha_m, M.beta_m, phi.source,
                    label or f"pullback({M.label})")
