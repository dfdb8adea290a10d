"""Hochschild cohomology of bihom-associative algebras.

The coboundary of an arity-``n`` cochain is

    (df)(a_1..a_{n+1}) = a^{n-1}(a_1) . f(a_2..a_{n+1})
                         + sum_i (-1)^i f(a a_1, .., mu(a_i, a_{i+1}), b a_{i+2}, ..)
                         + (-1)^{n+1} f(a_1..a_n) . b^{n-1}(a_{n+1})

where ``a``/``b`` are the twists and ``.`` the module actions.  The complex
starts in degree 1, so ``H^1`` is the full kernel of the first coboundary,
except when every twist is the identity: there the textbook degree-0 term
``m -> (a -> a.m - m.a)`` is included so the classical dimensions come out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import (
    AlgebraMorphism,
    BihomAlgebra,
    Bimodule,
    adjoint_bimodule,
    bimodule_morphism_violations,
    morphism_violations,
    pullback_bimodule,
    semidirect_product,
    yau_twist,
)
from .errors import NotInvertible, TargetMismatch
from .linalg import left_certificate, nullspace, rank, rows_from_qarray, solve, inverse
from .maps import apply_inputs, apply_output, check_budget, insert, twisted_insert
from .operad import (
    Cochain,
    CochainSpaceBasis,
    _constraint_rows,
    _same,
    circ,
    cochain_space_basis,
    mu_cochain,
)
from .qarray import QArray, is_identity


def _actions(A: BihomAlgebra, M: Bimodule | None) -> tuple[QArray, QArray]:
    if M is None:
        return A.mu, A.mu
    return M.left, M.right


def _raw_coboundary(mu: QArray, left: QArray, right: QArray, t: QArray,
                    alpha: QArray | None, beta: QArray | None,
                    alpha_n: QArray | None, beta_n: QArray | None) -> QArray:
    """Coboundary on a bare tensor; twists given as matrices or None for identity."""
    n = t.ndim - 1
    out = insert(left, 1, t, [alpha_n, None])
    for i in range(1, n + 1):
        term = twisted_insert(t, i - 1, mu, alpha, beta)
        out = out + term if i % 2 == 0 else out - term
    last = insert(right, 0, t, [None, beta_n])
    return out + last if (n + 1) % 2 == 0 else out - last


def coboundary(A: BihomAlgebra, M: Bimodule | None, f: Cochain) -> Cochain:
    """``delta f`` with coefficients in ``M`` (``None`` for ``A`` itself)."""
    if not _same(f.base, A) or not _same(f.module, M):
        raise TargetMismatch("cochain does not live in C(A, M)")
    n = f.arity
    left, right = _actions(A, M)
    t = _raw_coboundary(A.mu, left, right, f.coeffs, A.alpha_pow(1), A.beta_pow(1),
                        A.alpha_pow(n - 1), A.beta_pow(n - 1))
    return Cochain(t, A, M)


def is_cocycle(A: BihomAlgebra, M: Bimodule | None, f: Cochain) -> bool:
    return coboundary(A, M, f).is_zero()


# -- semidirect lift --------------------------------------------------------

def lift_to_semidirect(A: BihomAlgebra, M: Bimodule, f: Cochain,
                       total: BihomAlgebra | None = None) -> Cochain:
    """``f~((m_1,a_1),..) = (f(a_1,..), 0)`` as a self-cochain of ``M x| A``."""
    if not _same(f.module, M):
        raise TargetMismatch("lift needs a cochain into M")
    total = total or semidirect_product(A, M)
    m, n = M.dim, f.arity
    D = m + A.dim
    num = np.zeros((D,) * (n + 1), dtype=f.coeffs.num.dtype)
    num[(slice(m, None),) * n + (slice(0, m),)] = f.coeffs.num
    return Cochain(QArray(num, f.coeffs.den), total)


def restrict_from_semidirect(A: BihomAlgebra, M: Bimodule, g: Cochain) -> Cochain:
    """Inverse of the lift: restrict inputs to ``A`` and project the output to ``M``."""
    m = M.dim
    n = g.arity
    num = g.coeffs.num[(slice(m, None),) * n + (slice(0, m),)]
    return Cochain(QArray(np.ascontiguousarray(num), g.coeffs.den), A, M)


# -- complexes --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CochainComplexSlice:
    degree: int
    space: CochainSpaceBasis
    target: CochainSpaceBasis
    delta_matrix: QArray  # (dim C^{n+1}, dim C^n)


def complex_slice(A: BihomAlgebra, M: Bimodule | None, n: int) -> CochainComplexSlice:
    """Matrix of ``delta: C^n -> C^{n+1}`` in the twist-compatible bases."""
    key = ("slice", n, M)
    cached = A._powers.get(key)
    if cached is not None:
        return cached
    src = cochain_space_basis(A, n, M)
    tgt = cochain_space_basis(A, n + 1, M)
    check_budget(tgt.ambient_dim, f"C^{n + 1} ambient space")
    cols = [coboundary(A, M, b).coeffs.take(tgt.free) for b in src.basis]
    if cols:
        mat = QArray.stack(cols).transpose((1, 0))
    else:
        mat = QArray.zeros((tgt.dim, 0))
    sl = CochainComplexSlice(n, src, tgt, mat)
    A._powers[key] = sl
    return sl


def _rank(m: QArray) -> int:
    if m.size == 0:
        return 0
    return rank(rows_from_qarray(m))


@dataclass(frozen=True)
class CohomologyRow:
    n: int
    dimC: int
    rank: int
    ker: int
    H: int


KERNEL_NOTE = "complex starts at degree 1; H^1 is the full kernel of delta^1"
CLASSICAL_NOTE = "untwisted input: classical degree-0 term included, H^1 = ker delta^1 / im delta^0"


@dataclass
class CohomologyReport:
    coefficients: str
    rows: list = field(default_factory=list)
    note: str = KERNEL_NOTE

    def dims(self) -> dict[int, int]:
        return {r.n: r.H for r in self.rows}

    def to_json(self) -> dict:
        return {"coefficients": self.coefficients, "note": self.note,
                "rows": [{"n": r.n, "dimC": r.dimC, "rank": r.rank, "ker": r.ker, "H": r.H}
                         for r in self.rows]}

    def table(self) -> str:
        lines = [f"coefficients: {self.coefficients}", " n  dimC  rank  ker  H"]
        for r in self.rows:
            lines.append(f"{r.n:>2}  {r.dimC:>4}  {r.rank:>4}  {r.ker:>3}  {r.H}")
        return "\n".join(lines)


def _report(label: str, dims: list[int], ranks: list[int], rank0: int | None = None) -> CohomologyReport:
    rows = []
    prev = rank0 or 0
    for idx, (c, r) in enumerate(zip(dims, ranks)):
        ker = c - r
        rows.append(CohomologyRow(idx + 1, c, r, ker, ker - prev))
        prev = r
    return CohomologyReport(label, rows, KERNEL_NOTE if rank0 is None else CLASSICAL_NOTE)


def is_untwisted(A: BihomAlgebra, M: Bimodule | None = None) -> bool:
    mats = [A.alpha, A.beta] + ([] if M is None else [M.alpha_m, M.beta_m])
    return all(is_identity(m) for m in mats)


def degree0_matrix(A: BihomAlgebra, M: Bimodule | None = None) -> QArray:
    """Columns: coordinates in ``C^1`` of ``a -> a.m - m.a`` for each basis ``m``."""
    left, right = _actions(A, M)
    t = left - right.transpose((1, 0, 2))  # t[i, j, k]: e_i . m_j - m_j . e_i
    B = cochain_space_basis(A, 1, M)
    num = t.num
    cols = [QArray(np.ascontiguousarray(num[:, j, :]), t.den).take(B.free)
            for j in range(num.shape[1])]
    return QArray.stack(cols).transpose((1, 0))


def cohomology_dims(A: BihomAlgebra, M: Bimodule | None = None,
                    max_degree: int = 3, degree0: bool | None = None) -> CohomologyReport:
    """Exact dimensions of ``H^1..H^max_degree``.

    ``degree0=None`` includes the classical degree-0 term exactly when the
    input is untwisted; pass False to always use ``H^1 = ker delta^1``.
    """
    if degree0 is None:
        degree0 = is_untwisted(A, M)
    elif degree0 and not is_untwisted(A, M):
        raise ValueError("the degree-0 term is only defined for untwisted inputs")
    rank0 = _rank(degree0_matrix(A, M)) if degree0 else None
    dims, ranks = [], []
    for n in range(1, max_degree + 1):
        sl = complex_slice(A, M, n)
        dims.append(sl.space.dim)
        ranks.append(_rank(sl.delta_matrix))
    label = "self" if M is None else (M.label or "bimodule")
    return _report(label, dims, ranks, rank0)


def find_primitive(A: BihomAlgebra, M: Bimodule | None, f: Cochain) -> Cochain | None:
    """Some ``g`` with ``delta g = f``, free coordinates set to zero; None if none exists."""
    n = f.arity
    if n < 2:
        return None
    sl = complex_slice(A, M, n - 1)
    if not sl.target.contains(f):
        return None
    coords = solve(sl.delta_matrix, sl.target.coordinates(f).tolist())
    if coords is None:
        return None
    g = sl.space.combination(coords)
    if coboundary(A, M, g) != f:
        return None
    return g


def class_certificate(A: BihomAlgebra, M: Bimodule | None, f: Cochain) -> list[Fraction] | None:
    """A functional on ``C^n`` killing all coboundaries but not ``f``; None if ``f`` is exact."""
    n = f.arity
    sl_tgt = cochain_space_basis(A, n, M)
    rhs = sl_tgt.coordinates(f).tolist()
    if n < 2:
        return left_certificate(QArray.zeros((sl_tgt.dim, 0)), rhs) if any(rhs) else None
    sl = complex_slice(A, M, n - 1)
    return left_certificate(sl.delta_matrix, rhs)


# -- products and the second differential -----------------------------------

def cup(A: BihomAlgebra, f: Cochain, g: Cochain) -> Cochain:
    """``(-1)^(mn) mu(f(a^{n-1}..), g(b^{m-1}..))``."""
    if f.module is not None or g.module is not None:
        raise TargetMismatch("cup needs self coefficients")
    m, n = f.arity, g.arity
    fa = apply_inputs(f.coeffs, [A.alpha_pow(n - 1)] * m)
    gb = apply_inputs(g.coeffs, [A.beta_pow(m - 1)] * n)
    t = insert(insert(A.mu, 1, gb), 0, fa)
    return Cochain(t if (m * n) % 2 == 0 else -t, A)


def d_alpha_beta(A: BihomAlgebra, f: Cochain) -> Cochain:
    """``mu o f - (-1)^|f| f o mu``."""
    mu = mu_cochain(A)
    a = circ(mu, f)
    b = circ(f, mu)
    return a - b if f.degree % 2 == 0 else a + b


# -- functoriality ----------------------------------------------------------

def pullback(phi: AlgebraMorphism, M: Bimodule | None, f: Cochain) -> Cochain:
    """``f o phi^(x n)`` as a cochain of ``phi.source`` into ``phi^* M``."""
    bad = morphism_violations(phi)
    if bad:
        raise bad[0]
    if not _same(f.base, phi.target):
        raise TargetMismatch("cochain is not over the morphism's target")
    N = M if M is not None else adjoint_bimodule(phi.target, phi.target.label)
    if not _same(f.module, M):
        raise TargetMismatch("cochain does not land in M")
    pulled = _pulled_module(phi, N)
    t = apply_inputs(f.coeffs, [phi.matrix] * f.arity)
    return Cochain(t, phi.source, pulled)


def _pulled_module(phi: AlgebraMorphism, N: Bimodule) -> Bimodule:
    key = ("pullback", id(phi), N)
    cache = phi.source._powers
    hit = cache.get(key)
    if hit is None or hit[0] is not phi:
        hit = (phi, pullback_bimodule(phi, N))
        cache[key] = hit
    return hit[1]


def pushforward(psi: QArray, M: Bimodule, N: Bimodule, f: Cochain) -> Cochain:
    """``psi o f`` for a bimodule morphism ``psi: M -> N``."""
    bad = bimodule_morphism_violations(psi, M, N)
    if bad:
        raise bad[0]
    if not _same(f.module, M):
        raise TargetMismatch("cochain does not land in M")
    return Cochain(apply_output(f.coeffs, psi), f.base, N)


# -- restricted subcomplex of a Yau twist -----------------------------------

def _restricted_basis(d: int, n: int, alpha: QArray, beta: QArray):
    rows = []
    for m in (alpha, beta):
        if not is_identity(m):
            rows.extend(_constraint_rows(m, m, n, d, d))
    check_budget(d ** (n + 1), f"restricted C^{n}")
    return nullspace(rows, d ** (n + 1))


def classical_coboundary(mu_assoc: QArray, t: QArray) -> QArray:
    return _raw_coboundary(mu_assoc, mu_assoc, mu_assoc, t, None, None, None, None)


def restricted_subcomplex_dims(mu_assoc, alpha, beta, max_degree: int = 3) -> CohomologyReport:
    """Classical Hochschild coboundary on cochains commuting with ``alpha`` and ``beta``."""
    A = yau_twist(mu_assoc, alpha, beta)
    mu0 = QArray.from_values(mu_assoc) if not isinstance(mu_assoc, QArray) else mu_assoc
    if inverse(A.alpha) is None or inverse(A.beta) is None:
        raise NotInvertible("restricted complex needs invertible twists")
    d = A.dim
    dims, ranks = [], []
    bases = {n: _restricted_basis(d, n, A.alpha, A.beta) for n in range(1, max_degree + 2)}
    for n in range(1, max_degree + 1):
        free_s, mat_s = bases[n]
        free_t, _ = bases[n + 1]
        cols = []
        for r in range(len(free_s)):
            t = mat_s[r].reshape((d,) * (n + 1))
            cols.append(classical_coboundary(mu0, t).take(free_t))
        mat = QArray.stack(cols).transpose((1, 0)) if cols else QArray.zeros((len(free_t), 0))
        dims.append(len(free_s))
        ranks.append(_rank(mat))
    return _report("restricted", dims, ranks)


def transport(A: BihomAlgebra, f: Cochain) -> QArray:
    """``f o (alpha^-1 (x) beta^-1)`` on a 2-cochain of a Yau twist."""
    ai, bi = inverse(A.alpha), inverse(A.beta)
    if ai is None or bi is None:
        raise NotInvertible("transport needs invertible twists")
    return apply_inputs(f.coeffs, [ai, bi])


def untransport(A: BihomAlgebra, t: QArray) -> Cochain:
    """``g o (alpha (x) beta)``: the inverse of :func:`transport`."""
    return Cochain(apply_inputs(t, [A.alpha, A.beta]), A)
