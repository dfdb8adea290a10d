"""Truncated bihom-A-infinity algebras.

A structure lives on a graded space with degrees ``0..N-1``.  Each ``m_k`` is
stored as one dense tensor over the total space (degree-0 coordinates first)
and must vanish off the blocks where the output degree is the input degree
sum plus ``k - 2``; so ``m_k = 0`` for ``k > N + 1`` is enforced on input.
The relation of arity ``n`` is

    sum_{i+j=n+1} sum_{l=1..j} (-1)^(l(i+1) + i(|a_1|+..+|a_{l-1}|))
        m_j(alpha^{i-1} a_1, .., m_i(a_l, .., a_{l+i-1}), beta^{i-1} a_{l+i}, ..)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

import numpy as np
from math import lcm

from .algebra import (
    AlgebraMorphism,
    BihomAlgebra,
    Bimodule,
    algebra_violations,
    bimodule_violations,
    make_algebra,
    make_bimodule,
    morphism_violations,
)
from .cohomology import is_cocycle
from .errors import (
    AInftyViolation,
    CrossedModuleInvalid,
    MorphismCheckFailed,
    NotACocycle,
    NotSkeletal,
    NotStrict,
    ShapeMismatch,
    WellDefinednessFailure,
)
from .linalg import inverse
from .maps import apply_inputs, apply_output, check_budget, insert, twisted_insert
from .operad import Cochain, _same
from .qarray import QArray, is_identity, matrix_power


@dataclass(frozen=True)
class GradedSpace:
    dims: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if not self.dims or any(d < 0 for d in self.dims) or sum(self.dims) == 0:
            raise ShapeMismatch(f"bad graded dimensions {self.dims}")

    @property
    def total(self) -> int:
        return sum(self.dims)

    @property
    def top(self) -> int:
        return len(self.dims)

    def offset(self, deg: int) -> int:
        return sum(self.dims[:deg])

    def span(self, deg: int) -> slice:
        o = self.offset(deg)
        return slice(o, o + self.dims[deg])

    def degree_vector(self) -> np.ndarray:
        return np.repeat(np.arange(self.top), self.dims)


def _degree_mask(space: GradedSpace, k: int) -> np.ndarray:
    """Boolean array over ``(T,)*(k+1)``: True where a degree-(k-2) map may be nonzero."""
    deg = space.degree_vector()
    T = space.total
    acc = np.zeros((T,) * k, dtype=np.int64)
    for p in range(k):
        shape = [1] * k
        shape[p] = T
        acc = acc + deg.reshape(shape)
    want = acc + (k - 2)
    return want[..., None] == deg.reshape((1,) * k + (T,))


@dataclass(frozen=True, eq=False)
class AInftyStructure:
    space: GradedSpace
    products: Mapping  # k -> QArray over the total space
    alpha: QArray
    beta: QArray
    label: str = ""

    @property
    def dims(self) -> tuple:
        return self.space.dims

    @property
    def max_arity(self) -> int:
        nz = [k for k, t in self.products.items() if not t.is_zero()]
        return max(nz) if nz else 0

    def m(self, k: int) -> QArray | None:
        t = self.products.get(k)
        return None if t is None or t.is_zero() else t

    def block(self, k: int, degs: tuple, out: int | None = None) -> QArray:
        t = self.products.get(k)
        if out is None:
            out = sum(degs) + k - 2
        sp = self.space
        shape = tuple(sp.dims[d] for d in degs) + (sp.dims[out] if 0 <= out < sp.top else 0,)
        if t is None or not 0 <= out < sp.top:
            return QArray.zeros(shape)
        idx = tuple(sp.span(d) for d in degs) + (sp.span(out),)
        return QArray(np.ascontiguousarray(t.num[idx]), t.den)

    def twist_block(self, which: str, deg: int) -> QArray:
        m = self.alpha if which == "alpha" else self.beta
        s = self.space.span(deg)
        return QArray(np.ascontiguousarray(m.num[s, s]), m.den)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AInftyStructure):
            return NotImplemented
        if self.dims != other.dims or self.alpha != other.alpha or self.beta != other.beta:
            return False
        ks = set(self.products) | set(other.products)
        T = self.space.total
        for k in ks:
            a = self.products.get(k, QArray.zeros((T,) * (k + 1)))
            b = other.products.get(k, QArray.zeros((T,) * (k + 1)))
            if a != b:
                return False
        return True

    __hash__ = object.__hash__


def make_ainfty(dims, products: Mapping, alpha, beta, label: str = "") -> AInftyStructure:
    """Build a structure from dense total-space tensors, checking degree bookkeeping."""
    space = dims if isinstance(dims, GradedSpace) else GradedSpace(tuple(dims))
    T = space.total
    al = alpha if isinstance(alpha, QArray) else QArray.from_values(alpha)
    be = beta if isinstance(beta, QArray) else QArray.from_values(beta)
    for name, m in (("alpha", al), ("beta", be)):
        if m.shape != (T, T):
            raise ShapeMismatch(f"{name} must be {T}x{T}")
        deg = space.degree_vector()
        if np.any(m.num[deg[:, None] != deg[None, :]]):
            raise ShapeMismatch(f"{name} does not preserve degree")
    prods = {}
    for k, t in products.items():
        k = int(k)
        q = t if isinstance(t, QArray) else QArray.from_values(t)
        if q.shape != (T,) * (k + 1):
            raise ShapeMismatch(f"m_{k} must have shape {(T,) * (k + 1)}, got {q.shape}")
        bad = np.argwhere((q.num != 0) & ~_degree_mask(space, k))
        if len(bad):
            raise ShapeMismatch(f"m_{k} has an entry of the wrong degree at {tuple(int(x) for x in bad[0])}")
        prods[k] = q
    return AInftyStructure(space, prods, al, be, label)


def assemble(dims, blocks: Mapping, alpha_blocks, beta_blocks, label: str = "") -> AInftyStructure:
    """Build from blocks: ``blocks[k][degs] = tensor``; twists as per-degree matrices."""
    space = GradedSpace(tuple(dims))
    T = space.total
    prods = {}
    for k, bk in blocks.items():
        k = int(k)
        num = np.zeros((T,) * (k + 1), dtype=object)
        den = 1
        parts = []
        for degs, blk in bk.items():
            q = blk if isinstance(blk, QArray) else QArray.from_values(blk)
            parts.append((tuple(degs), q))
            den = lcm(den, q.den)
        for degs, q in parts:
            out = sum(degs) + k - 2
            if not 0 <= out < space.top:
                if not q.is_zero():
                    raise ShapeMismatch(f"m_{k} block {degs} has no target degree")
                continue
            idx = tuple(space.span(d) for d in degs) + (space.span(out),)
            want = tuple(space.dims[d] for d in degs) + (space.dims[out],)
            if q.shape != want:
                raise ShapeMismatch(f"m_{k} block {degs} must be {want}, got {q.shape}")
            num[idx] = q.num.astype(object) * (int(den) // q.den)
        prods[k] = QArray(num, int(den))

    def twist(bl):
        num = np.zeros((T, T), dtype=object)
        den = 1
        qs = [b if isinstance(b, QArray) else QArray.from_values(b) for b in bl]
        for q in qs:
            den = lcm(den, q.den)
        for deg, q in enumerate(qs):
            s = space.span(deg)
            if q.shape != (space.dims[deg],) * 2:
                raise ShapeMismatch(f"twist block {deg} must be square of size {space.dims[deg]}")
            num[s, s] = q.num.astype(object) * (int(den) // q.den)
        return QArray(num, int(den))

    return make_ainfty(space, prods, twist(alpha_blocks), twist(beta_blocks), label)


# -- relations --------------------------------------------------------------

def _signed(t: QArray, space: GradedSpace, upto: int, i: int) -> QArray:
    """Multiply by ``(-1)^(i * (deg a_1 + .. + deg a_upto))``."""
    if upto == 0 or i % 2 == 0:
        return t
    deg = space.degree_vector()
    par = np.zeros((space.total,) * upto, dtype=np.int64)
    for p in range(upto):
        shape = [1] * upto
        shape[p] = space.total
        par = par + deg.reshape(shape)
    sign = np.where(par % 2 == 0, 1, -1)
    sign = sign.reshape(sign.shape + (1,) * (t.ndim - upto))
    return QArray(t.num * sign, t.den)


def relation_residual(S: AInftyStructure, n: int) -> QArray:
    """Left side of the arity-``n`` relation as a tensor over the total space."""
    T = S.space.total
    check_budget(T ** (n + 1), f"arity-{n} relation")
    total = QArray.zeros((T,) * (n + 1))
    for i in range(1, n + 1):
        j = n + 1 - i
        mi, mj = S.m(i), S.m(j)
        if mi is None or mj is None:
            continue
        a = matrix_power(S.alpha, i - 1) if i > 1 else None
        b = matrix_power(S.beta, i - 1) if i > 1 else None
        for lam in range(1, j + 1):
            term = twisted_insert(mj, lam - 1, mi, a, b)
            term = _signed(term, S.space, lam - 1, i)
            total = total - term if (lam * (i + 1)) % 2 else total + term
    return total


def twist_violations(S: AInftyStructure) -> list[AInftyViolation]:
    out = []
    w = (S.alpha @ S.beta - S.beta @ S.alpha).first_nonzero()
    if w is not None:
        out.append(AInftyViolation("twists commute", w))
    for k in sorted(S.products):
        t = S.products[k]
        for name, m in (("alpha", S.alpha), ("beta", S.beta)):
            w = (apply_output(t, m) - apply_inputs(t, [m] * k)).first_nonzero()
            if w is not None:
                out.append(AInftyViolation(f"{name} commutes with m_{k}", w))
    return out


@dataclass
class AInftyReport:
    valid: bool
    n_max: int
    checked: list = field(default_factory=list)  # (n, ok)
    violation: AInftyViolation | None = None

    @property
    def differential(self) -> bool | None:
        """``m_1 o m_1 = 0`` (the arity-1 relation)."""
        return dict(self.checked).get(1)

    @property
    def derivation(self) -> bool | None:
        """``m_1`` is a derivation of ``m_2`` (the arity-2 relation)."""
        return dict(self.checked).get(2)

    def to_json(self) -> dict:
        return {"valid": self.valid, "n_max": self.n_max,
                "relations": [{"n": n, "ok": ok} for n, ok in self.checked],
                "violation": None if self.violation is None else self.violation.as_dict()}


def validate_ainfty(S: AInftyStructure, n_max: int | None = None) -> AInftyReport:
    """Check twist compatibility and the relations for arities ``1..n_max``."""
    n_max = S.space.top + 2 if n_max is None else n_max
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    tw = twist_violations(S)
    if tw:
        return AInftyReport(False, n_max, [], tw[0])
    checked = []
    first = None
    for n in range(1, n_max + 1):
        r = relation_residual(S, n)
        w = r.first_nonzero()
        checked.append((n, w is None))
        if w is not None and first is None:
            deg = S.space.degree_vector()
            degs = tuple(int(deg[x]) for x in w[:-1])
            first = AInftyViolation(f"relation n={n}", w, f"input degrees {degs}")
    return AInftyReport(first is None, n_max, checked, first)


# -- skeletal structures ----------------------------------------------------

def triple_to_skeletal(A: BihomAlgebra, M: Bimodule, theta: Cochain) -> AInftyStructure:
    """Degrees ``0`` (A) and ``n-1`` (M), ``m_2`` from ``mu`` and the actions, ``m_{n+1} = theta``."""
    if not _same(theta.module, M):
        raise NotACocycle("theta must take values in M")
    n = theta.arity - 1
    if n < 2:
        raise NotSkeletal("theta needs arity at least 3")
    if not is_cocycle(A, M, theta):
        raise NotACocycle("theta is not a cocycle")
    dims = [A.dim] + [0] * (n - 2) + [M.dim]
    top = n - 1
    blocks = {2: {(0, 0): A.mu, (0, top): M.left, (top, 0): M.right},
              n + 1: {(0,) * (n + 1): theta.coeffs}}
    zero_mid = [QArray.zeros((0, 0))] * (n - 2)
    return assemble(dims, blocks, [A.alpha] + zero_mid + [M.alpha_m],
                    [A.beta] + zero_mid + [M.beta_m], f"skeletal({A.label})")


def _skeletal_shape(S: AInftyStructure) -> int:
    dims = S.dims
    N = len(dims)
    if N < 2 or dims[0] == 0 or any(dims[1:-1]):
        raise NotSkeletal(f"degrees {dims} are not concentrated in 0 and top")
    if S.m(1) is not None:
        raise NotSkeletal("differential is nonzero")
    for k in S.products:
        if k not in (2, N + 1) and S.m(k) is not None:
            raise NotSkeletal(f"m_{k} is nonzero")
    return N - 1


def skeletal_to_triple(S: AInftyStructure) -> tuple[BihomAlgebra, Bimodule, Cochain]:
    top = _skeletal_shape(S)
    n = top + 1
    A = make_algebra(S.block(2, (0, 0)), S.twist_block("alpha", 0), S.twist_block("beta", 0),
                     S.label or "A0")
    bad = algebra_violations(A)
    if bad:
        raise bad[0]
    M = make_bimodule(A, S.block(2, (0, top)), S.block(2, (top, 0)),
                      S.twist_block("alpha", top), S.twist_block("beta", top), f"A{top}")
    bad = bimodule_violations(M)
    if bad:
        raise bad[0]
    theta = Cochain(S.block(n + 1, (0,) * (n + 1)), A, M)
    return A, M, theta


# -- other constructions ----------------------------------------------------

def algebra_as_ainfty(A: BihomAlgebra) -> AInftyStructure:
    """``A`` concentrated in degree 0 with ``m_2 = mu``."""
    return assemble([A.dim], {2: {(0, 0): A.mu}}, [A.alpha], [A.beta], A.label)


def yau_twist_dg(S: AInftyStructure, alpha, beta) -> AInftyStructure:
    """Yau twist of an untwisted dg structure: ``m_2 -> m_2 o (alpha x beta)``."""
    a = alpha if isinstance(alpha, QArray) else QArray.from_values(alpha)
    b = beta if isinstance(beta, QArray) else QArray.from_values(beta)
    if not (is_identity(S.alpha) and is_identity(S.beta)):
        raise MorphismCheckFailed("input must be untwisted")
    if any(S.m(k) is not None for k in S.products if k >= 3):
        raise MorphismCheckFailed("input must be dg (m_k = 0 for k >= 3)")
    probe = make_ainfty(S.space, S.products, a, b)
    if twist_violations(probe):
        raise MorphismCheckFailed(str(twist_violations(probe)[0]))
    prods = dict(S.products)
    if 2 in prods:
        prods[2] = apply_inputs(prods[2], [a, b])
    return make_ainfty(S.space, prods, a, b, f"yau({S.label})")


def _placement(dims: tuple, new_dims: tuple, shift: tuple) -> np.ndarray:
    """Total index of each coordinate of a summand inside the direct sum."""
    out = []
    offs = np.concatenate([[0], np.cumsum(new_dims)[:-1]])
    for deg, d in enumerate(dims):
        out.extend(int(offs[deg] + shift[deg] + r) for r in range(d))
    return np.array(out, dtype=np.int64)


def direct_sum(S: AInftyStructure, S2: AInftyStructure) -> AInftyStructure:
    N = max(S.space.top, S2.space.top)
    d1 = tuple(S.dims) + (0,) * (N - S.space.top)
    d2 = tuple(S2.dims) + (0,) * (N - S2.space.top)
    new = tuple(x + y for x, y in zip(d1, d2))
    p1 = _placement(d1, new, (0,) * N)
    p2 = _placement(d2, new, d1)
    T = sum(new)

    def place(parts, k):
        num = np.zeros((T,) * (k + 1), dtype=object)
        den = 1
        for q, _ in parts:
            den = lcm(den, q.den)
        for q, pos in parts:
            num[np.ix_(*([pos] * (k + 1)))] = q.num.astype(object) * (int(den) // q.den)
        return QArray(num, int(den))

    prods = {}
    for k in set(S.products) | set(S2.products):
        parts = [(t.products[k], p) for t, p in ((S, p1), (S2, p2)) if k in t.products]
        prods[k] = place(parts, k)
    al = place([(S.alpha, p1), (S2.alpha, p2)], 1)
    be = place([(S.beta, p1), (S2.beta, p2)], 1)
    return make_ainfty(new, prods, al, be, f"{S.label}+{S2.label}")


def transport(S: AInftyStructure, P: QArray) -> AInftyStructure:
    """Change of basis by a degree-preserving invertible ``P``: ``m_k -> P m_k (P^-1)^k``."""
    Pi = inverse(P)
    if Pi is None:
        raise ShapeMismatch("basis change is singular")
    prods = {k: apply_output(apply_inputs(t, [Pi] * k), P) for k, t in S.products.items()}
    return make_ainfty(S.space, prods, P @ S.alpha @ Pi, P @ S.beta @ Pi, S.label)


def random_basis_change(space: GradedSpace, rng: np.random.Generator, scale: int = 2) -> QArray:
    """Block-diagonal integer matrix with ones on the diagonal and random entries above."""
    T = space.total
    num = np.zeros((T, T), dtype=np.int64)
    for deg in range(space.top):
        s = space.span(deg)
        d = space.dims[deg]
        blk = np.triu(rng.integers(-scale, scale + 1, size=(d, d)), 1) + np.eye(d, dtype=np.int64)
        low = np.tril(rng.integers(-1, 2, size=(d, d)), -1)
        num[s, s] = blk @ (low + np.eye(d, dtype=np.int64))
    return QArray(num, 1)


# -- strict structures and crossed modules ----------------------------------

@dataclass(frozen=True, eq=False)
class CrossedModule:
    alg_a: BihomAlgebra
    alg_b: BihomAlgebra
    dt: QArray  # (dim B, dim A)
    action_left: QArray  # [b, m, q]: phi(b, m)
    action_right: QArray  # [m, b, q]: phi(m, b)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CrossedModule):
            return NotImplemented
        return (self.alg_a == other.alg_a and self.alg_b == other.alg_b and self.dt == other.dt
                and self.action_left == other.action_left and self.action_right == other.action_right)

    __hash__ = object.__hash__


def crossed_module_violations(C: CrossedModule) -> list[CrossedModuleInvalid]:
    A, B = C.alg_a, C.alg_b
    out: list[CrossedModuleInvalid] = []
    for tag, X in (("A", A), ("B", B)):
        out.extend(CrossedModuleInvalid(f"{tag}: {v.axiom}", v.witness) for v in algebra_violations(X))
    if C.dt.shape != (B.dim, A.dim):
        return out + [CrossedModuleInvalid("dt shape", None, f"expected {(B.dim, A.dim)}")]
    out.extend(CrossedModuleInvalid("dt: " + v.axiom, v.witness)
               for v in morphism_violations(AlgebraMorphism(A, B, C.dt)))
    M = Bimodule(A.dim, C.action_left, C.action_right, A.alpha, A.beta, B, "action")
    out.extend(CrossedModuleInvalid("action: " + v.axiom, v.witness) for v in bimodule_violations(M))
    dt, L, R = C.dt, C.action_left, C.action_right
    eqs = [
        ("dt(phi(b,m)) = m_B(b, dt m)", apply_output(L, dt) - apply_inputs(B.mu, [None, dt])),
        ("dt(phi(m,b)) = m_B(dt m, b)", apply_output(R, dt) - apply_inputs(B.mu, [dt, None])),
        ("phi(dt m, n) = m_A(m, n)", apply_inputs(L, [dt, None]) - A.mu),
        ("phi(m, dt n) = m_A(m, n)", apply_inputs(R, [None, dt]) - A.mu),
        ("phi(alpha b, m_A(m,n)) = m_A(phi(b,m), beta n)",
         _insert2(L, 1, A.mu, B.alpha, None) - _insert2(A.mu, 0, L, None, A.beta)),
        ("phi(m_A(m,n), beta b) = m_A(alpha m, phi(n,b))",
         _insert2(R, 0, A.mu, None, B.beta) - _insert2(A.mu, 1, R, A.alpha, None)),
    ]
    for name, t in eqs:
        w = t.first_nonzero()
        if w is not None:
            out.append(CrossedModuleInvalid(name, w))
    return out


def _insert2(outer: QArray, pos: int, inner: QArray, before, after) -> QArray:
    """Plug ``inner`` into slot ``pos`` of a binary ``outer``, twisting the other slot."""
    return insert(outer, pos, inner, [before, None] if pos == 1 else [None, after])


def validate_crossed_module(C: CrossedModule) -> bool:
    return not crossed_module_violations(C)


def _strict_shape(S: AInftyStructure) -> None:
    if len(S.dims) != 2:
        raise NotStrict(f"need a 2-term structure, got degrees {S.dims}")
    if S.m(3) is not None:
        raise NotStrict("m_3 is nonzero")
    for k in S.products:
        if k > 3 and S.m(k) is not None:
            raise NotStrict(f"m_{k} is nonzero")


def strict_to_crossed_module(S: AInftyStructure) -> CrossedModule:
    _strict_shape(S)
    d = S.block(1, (1,), 0).transpose((1, 0))  # matrix of d: A1 -> A0
    left = S.block(2, (0, 1))   # A0 x A1 -> A1
    right = S.block(2, (1, 0))  # A1 x A0 -> A1
    mA1 = apply_inputs(left, [d, None])    # m_2(dm, n)
    mA2 = apply_inputs(right, [None, d])   # m_2(m, dn)
    w = (mA1 - mA2).first_nonzero()
    if w is not None:
        raise WellDefinednessFailure("m_2(dm, n) = m_2(m, dn)", w)
    A = make_algebra(mA1, S.twist_block("alpha", 1), S.twist_block("beta", 1), "A1")
    B = make_algebra(S.block(2, (0, 0)), S.twist_block("alpha", 0), S.twist_block("beta", 0), "A0")
    return CrossedModule(A, B, d, left, right)


def crossed_module_to_strict(C: CrossedModule, label: str = "") -> AInftyStructure:
    bad = crossed_module_violations(C)
    if bad:
        raise bad[0]
    A, B = C.alg_a, C.alg_b
    blocks = {1: {(1,): C.dt.transpose((1, 0))}, 2: {(0, 0): B.mu, (0, 1): C.action_left, (1, 0): C.action_right}}
    return assemble([B.dim, A.dim], blocks, [B.alpha, A.alpha], [B.beta, A.beta], label or "strict")


def example_strict(A: BihomAlgebra) -> AInftyStructure:
    """``A_0 = A_1 = A``, ``d = id``, ``m_2 = mu`` on every block, twists doubled."""
    I = QArray.identity(A.dim)
    blocks = {1: {(1,): I}, 2: {(0, 0): A.mu, (0, 1): A.mu, (1, 0): A.mu}}
    return assemble([A.dim, A.dim], blocks, [A.alpha, A.alpha], [A.beta, A.beta],
                    f"example_strict({A.label})")


def ideal_strict(A: BihomAlgebra, ideal_basis: list[int]) -> AInftyStructure:
    """``A_1`` a twist-stable two-sided ideal spanned by basis vectors, ``d`` the inclusion."""
    I = QArray.identity(A.dim)
    inc = QArray(np.ascontiguousarray(I.num[:, ideal_basis]), 1)
    proj = inc.transpose((1, 0))
    left = apply_output(apply_inputs(A.mu, [None, inc]), proj)
    right = apply_output(apply_inputs(A.mu, [inc, None]), proj)
    for name, t in (("left", left), ("right", right)):
        if apply_output(t, inc) != apply_inputs(A.mu, [None, inc] if name == "left" else [inc, None]):
            raise ShapeMismatch("basis vectors do not span a two-sided ideal")
    a1 = proj @ A.alpha @ inc
    b1 = proj @ A.beta @ inc
    if A.alpha @ inc != inc @ a1 or A.beta @ inc != inc @ b1:
        raise ShapeMismatch("ideal is not twist-stable")
    blocks = {1: {(1,): proj}, 2: {(0, 0): A.mu, (0, 1): left, (1, 0): right}}
    return assemble([A.dim, len(ideal_basis)], blocks, [A.alpha, a1], [A.beta, b1],
                    f"ideal_strict({A.label})")


# -- serialization ----------------------------------------------------------

def _degree_tuples(space: GradedSpace, k: int):
    for degs in product(range(space.top), repeat=k):
        out = sum(degs) + k - 2
        if 0 <= out < space.top and all(space.dims[d] for d in degs) and space.dims[out]:
            yield degs


def ainfty_to_json(S: AInftyStructure) -> dict:
    prods = {}
    for k in sorted(S.products):
        bl = {}
        for degs in _degree_tuples(S.space, k):
            b = S.block(k, degs)
            if not b.is_zero():
                bl[",".join(map(str, degs))] = b.to_json()
        if bl:
            prods[str(k)] = bl
    return {"kind": "ainfty", "label": S.label, "dims": list(S.dims),
            "alpha": [S.twist_block("alpha", d).to_json() for d in range(S.space.top)],
            "beta": [S.twist_block("beta", d).to_json() for d in range(S.space.top)],
            "products": prods}


def ainfty_from_json(raw: Mapping) -> AInftyStructure:
    dims = raw["dims"]
    blocks = {}
    for k, bl in raw.get("products", {}).items():
        blocks[int(k)] = {tuple(int(x) for x in key.split(",")): v for key, v in bl.items()}
    return assemble(dims, blocks, raw["alpha"], raw["beta"], str(raw.get("label", "")))
