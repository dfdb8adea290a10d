"""Abelian extensions ``0 -> M -> E -> A -> 0`` with a twist-compatible section.

Extensions are kept in block coordinates ``E = M (+) A`` (module first), so
``incl = [I; 0]`` and ``proj = [0 I]``; the section may be any matrix with
``proj s = I``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    BihomAlgebra,
    Bimodule,
    _block_algebra,
    algebra_violations,
    bimodule_violations,
    make_algebra,
    make_bimodule,
)
from .cohomology import is_cocycle
from .errors import ExtensionInvalid, NotACocycle, SplittingIncompatible, TargetMismatch
from .linalg import inverse, rank, rows_from_qarray, solve
from .maps import apply_inputs, apply_output
from .operad import Cochain, _same
from .qarray import QArray


def _canonical(m: int, d: int) -> tuple[QArray, QArray, QArray]:
    D = m + d
    incl = _embed(QArray.identity(m), D, 0)
    section = _embed(QArray.identity(d), D, m)
    proj = section.transpose((1, 0))
    return incl, proj, section


def _embed(block: QArray, rows: int, offset: int, cols: int | None = None,
           col_offset: int = 0) -> QArray:
    """Place ``block`` at ``(offset, col_offset)`` inside a zero matrix."""
    cols = block.shape[1] if cols is None else cols
    num = np.zeros((rows, cols), dtype=block.num.dtype)
    num[offset:offset + block.shape[0], col_offset:col_offset + block.shape[1]] = block.num
    return QArray(num, block.den)


@dataclass(frozen=True, eq=False)
class AbelianExtension:
    total: BihomAlgebra
    incl: QArray
    proj: QArray
    splitting: QArray
    fiber: Bimodule
    base: BihomAlgebra

    @property
    def fiber_dim(self) -> int:
        return self.incl.shape[1]

    def with_splitting(self, s: QArray) -> "AbelianExtension":
        return AbelianExtension(self.total, self.incl, self.proj, s, self.fiber, self.base)


def extension_from_cocycle(A: BihomAlgebra, M: Bimodule, f: Cochain,
                           label: str = "") -> AbelianExtension:
    """``mu_E((m,a),(n,b)) = (m.b + a.n + f(a,b), ab)`` on ``M (+) A``."""
    if not _same(f.module, M) or f.arity != 2:
        raise TargetMismatch("need a 2-cochain into M")
    if not f.is_twist_compatible() or not is_cocycle(A, M, f):
        raise NotACocycle("extension data must be a twist-compatible 2-cocycle")
    total = _block_algebra(A, M, f.coeffs, label or f"E({M.label},{A.label})")
    incl, proj, s = _canonical(M.dim, A.dim)
    return AbelianExtension(total, incl, proj, s, M, A)


def _fiber_part(E: AbelianExtension, t: QArray) -> QArray:
    """Module coordinates of a tensor whose outputs lie in ``im(incl)``."""
    rest = apply_output(t, E.proj)
    if not rest.is_zero():
        raise SplittingIncompatible("value does not lie in the fiber")
    return apply_output(t, E.incl.transpose((1, 0)))


def cocycle_from_extension(E: AbelianExtension) -> Cochain:
    """``f(a, b) = i^-1(mu_E(s a, s b) - s(ab))``."""
    bad = _splitting_violations(E)
    if bad:
        raise SplittingIncompatible(str(bad[0]))
    s = E.splitting
    t = apply_inputs(E.total.mu, [s, s]) - apply_output(E.base.mu, s)
    return Cochain(_fiber_part(E, t), E.base, E.fiber)


def induced_actions(E: AbelianExtension, s: QArray | None = None) -> Bimodule:
    """``a.m = mu_E(s a, i m)`` and ``m.a = mu_E(i m, s a)`` with the fiber twists."""
    s = E.splitting if s is None else s
    i = E.incl
    left = _fiber_part(E, apply_inputs(E.total.mu, [s, i]))
    right = _fiber_part(E, apply_inputs(E.total.mu, [i, s]))
    M = E.fiber
    return Bimodule(M.dim, left, right, M.alpha_m, M.beta_m, E.base, M.label)


def equivalence_from_1cochain(E: AbelianExtension, g: Cochain) -> tuple[AbelianExtension, QArray]:
    """Transport ``E`` along ``(m, a) -> (m + g(a), a)``; returns ``(E', phi)``."""
    if not _same(g.module, E.fiber) or g.arity != 1:
        raise TargetMismatch("need a 1-cochain into the fiber")
    m, d = E.fiber_dim, E.base.dim
    G = g.coeffs.transpose((1, 0))  # matrix of g: A -> M
    phi = QArray.identity(m + d) + _embed(G, m + d, 0, m + d, m)
    phi_inv = inverse(phi)
    mu2 = apply_output(apply_inputs(E.total.mu, [phi_inv, phi_inv]), phi)
    T = E.total
    total = make_algebra(mu2, T.alpha, T.beta, T.label + "'")
    return AbelianExtension(total, E.incl, E.proj, E.splitting, E.fiber, E.base), phi


# -- validation -------------------------------------------------------------

def _splitting_violations(E: AbelianExtension) -> list[ExtensionInvalid]:
    out = []
    s, T, A = E.splitting, E.total, E.base
    checks = [
        ("proj o s = id", E.proj @ s - QArray.identity(A.dim)),
        ("alpha_E o s = s o alpha", T.alpha @ s - s @ A.alpha),
        ("beta_E o s = s o beta", T.beta @ s - s @ A.beta),
    ]
    for name, t in checks:
        w = t.first_nonzero()
        if w is not None:
            out.append(ExtensionInvalid(name, w))
    return out


def extension_violations(E: AbelianExtension) -> list[ExtensionInvalid]:
    T, A, M = E.total, E.base, E.fiber
    m, d = M.dim, A.dim
    if T.dim != m + d or E.incl.shape != (m + d, m) or E.proj.shape != (d, m + d) \
            or E.splitting.shape != (m + d, d):
        return [ExtensionInvalid("shape", None, "matrices do not fit M (+) A")]
    out = [ExtensionInvalid("total algebra: " + v.axiom, v.witness) for v in algebra_violations(T)]
    checks = [
        ("proj o incl = 0", E.proj @ E.incl),
        ("incl intertwines alpha", T.alpha @ E.incl - E.incl @ M.alpha_m),
        ("incl intertwines beta", T.beta @ E.incl - E.incl @ M.beta_m),
        ("proj intertwines alpha", E.proj @ T.alpha - A.alpha @ E.proj),
        ("proj intertwines beta", E.proj @ T.beta - A.beta @ E.proj),
        ("proj preserves product", apply_output(T.mu, E.proj) - apply_inputs(A.mu, [E.proj, E.proj])),
        ("trivial fiber product", apply_inputs(T.mu, [E.incl, E.incl])),
    ]
    for name, t in checks:
        w = t.first_nonzero()
        if w is not None:
            out.append(ExtensionInvalid(name, w))
    if rank(rows_from_qarray(E.incl)) != m:
        out.append(ExtensionInvalid("incl injective"))
    if rank(rows_from_qarray(E.proj)) != d:
        out.append(ExtensionInvalid("proj surjective"))
    split_bad = _splitting_violations(E)
    out.extend(split_bad)
    if out:
        return out
    try:
        N = induced_actions(E)
    except SplittingIncompatible as exc:
        return [ExtensionInvalid("induced actions", None, str(exc))]
    out.extend(ExtensionInvalid("induced bimodule: " + v.axiom, v.witness)
               for v in bimodule_violations(N))
    for name, a, b in (("induced left action", N.left, M.left), ("induced right action", N.right, M.right)):
        w = (a - b).first_nonzero()
        if w is not None:
            out.append(ExtensionInvalid(name, w))
    return out


def validate_extension(E: AbelianExtension) -> bool:
    return not extension_violations(E)


# -- sections ---------------------------------------------------------------

def find_compatible_splitting(proj, alpha_e, beta_e, alpha, beta) -> QArray | None:
    """Solve ``proj s = I``, ``alpha_E s = s alpha``, ``beta_E s = s beta`` for ``s``."""
    P, aE, bE, a, b = (x if isinstance(x, QArray) else QArray.from_values(x)
                       for x in (proj, alpha_e, beta_e, alpha, beta))
    d, D = P.shape
    nv = D * d  # unknown s[r, c] at r * d + c
    eqs: list[list] = []
    rhs: list = []
    for k in range(d):
        for c in range(d):
            row = [0] * nv
            for r in range(D):
                row[r * d + c] += P.entry((k, r))
            eqs.append(row)
            rhs.append(1 if k == c else 0)
    for tE, t in ((aE, a), (bE, b)):
        for r in range(D):
            for c in range(d):
                row = [0] * nv
                for u in range(D):
                    row[u * d + c] += tE.entry((r, u))
                for u in range(d):
                    row[r * d + u] -= t.entry((u, c))
                eqs.append(row)
                rhs.append(0)
    sol = solve(QArray.from_values(eqs), rhs)
    if sol is None:
        return None
    return QArray.from_values([[sol[r * d + c] for c in range(d)] for r in range(D)])


def splitting_problem_from_json(raw: dict) -> tuple:
    return tuple(raw[k] for k in ("proj", "alpha_e", "beta_e", "alpha", "beta"))


def remark_extension() -> AbelianExtension:
    """The splitting counterexample as block data: ``E = <y, x>``, zero products, ``s(a) = x``."""
    A = make_algebra(QArray.zeros((1, 1, 1)), [[0]], [[1]], "remark_base")
    M = make_bimodule(A, QArray.zeros((1, 1, 1)), QArray.zeros((1, 1, 1)), [[0]], [[1]], "remark_fiber")
    T = make_algebra(QArray.zeros((2, 2, 2)), [[0, 1], [0, 0]], [[1, 0], [0, 1]], "remark_total")
    incl, proj, s = _canonical(1, 1)
    return AbelianExtension(T, incl, proj, s, M, A)
