"""The bi-twisted endomorphism operad of a bihom-associative algebra.

Arity-``n`` elements are twist-compatible multilinear maps ``A^n -> A``
(or ``A^n -> M`` for a bimodule ``M``).  Partial composition inserts ``g``
into slot ``i`` of ``f`` and twists the untouched slots by
``alpha^(n-1)`` on the left and ``beta^(n-1)`` on the right; everything else
(gamma, braces, circle product, bracket) is built from it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .algebra import BihomAlgebra, Bimodule
from .errors import (
    ArityMismatch,
    PositionOutOfRange,
    TargetMismatch,
    TooManyArguments,
)
from .linalg import nullspace, _primitive
from .maps import apply_inputs, apply_output, apply_slot, check_budget, insert, twisted_insert
from .qarray import QArray, is_identity


def _same(a, b) -> bool:
    return a is b or (a is not None and b is not None and a == b)


@dataclass(frozen=True, eq=False)
class Cochain:
    coeffs: QArray
    base: BihomAlgebra
    module: Bimodule | None = None

    @property
    def arity(self) -> int:
        return self.coeffs.ndim - 1

    @property
    def degree(self) -> int:
        return self.arity - 1

    @property
    def target_dim(self) -> int:
        return self.base.dim if self.module is None else self.module.dim

    def target_twist(self, which: str, k: int = 1) -> QArray | None:
        if self.module is None:
            return self.base.twist_power(which, k)
        return self.module.twist_power(which, k)

    def _like(self, coeffs: QArray) -> "Cochain":
        return Cochain(coeffs, self.base, self.module)

    def _check(self, other: "Cochain") -> None:
        if self.arity != other.arity:
            raise ArityMismatch(f"arity {self.arity} vs {other.arity}")
        if not _same(self.module, other.module):
            raise TargetMismatch("cochains have different targets")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        return self._like(self.coeffs + other.coeffs)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        return self._like(self.coeffs - other.coeffs)

    def __neg__(self) -> "Cochain":
        return self._like(-self.coeffs)

    def __mul__(self, c) -> "Cochain":
        return self._like(self.coeffs.scale(c))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.coeffs == other.coeffs

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return self.coeffs.is_zero()

    def twist_defects(self) -> list[tuple[str, tuple]]:
        """Basis witnesses where ``tau o f != f o tau^n`` for tau = alpha, beta."""
        out = []
        A = self.base
        for which in ("alpha", "beta"):
            src = A.alpha if which == "alpha" else A.beta
            tgt = self.target_twist(which)
            lhs = apply_output(self.coeffs, tgt)
            rhs = apply_inputs(self.coeffs, [src] * self.arity)
            w = (lhs - rhs).first_nonzero()
            if w is not None:
                out.append((which, w))
        return out

    def is_twist_compatible(self) -> bool:
        return not self.twist_defects()


def zero_cochain(A: BihomAlgebra, n: int, M: Bimodule | None = None) -> Cochain:
    t = A.dim if M is None else M.dim
    return Cochain(QArray.zeros((A.dim,) * n + (t,)), A, M)


def identity_cochain(A: BihomAlgebra) -> Cochain:
    return Cochain(QArray.identity(A.dim), A)


def mu_cochain(A: BihomAlgebra) -> Cochain:
    return Cochain(A.mu, A)


def cochain(A: BihomAlgebra, coeffs, M: Bimodule | None = None) -> Cochain:
    q = coeffs if isinstance(coeffs, QArray) else QArray.from_values(coeffs)
    t = A.dim if M is None else M.dim
    if q.ndim < 2 or any(s != A.dim for s in q.shape[:-1]) or q.shape[-1] != t:
        raise ArityMismatch(f"coefficient tensor shape {q.shape} does not fit")
    return Cochain(q, A, M)


# -- cochain spaces ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CochainSpaceBasis:
    arity: int
    base: BihomAlgebra
    module: Bimodule | None
    free: list
    matrix: QArray  # one flattened basis cochain per row
    shape: tuple = field(default=())

    @property
    def dim(self) -> int:
        return len(self.free)

    @property
    def ambient_dim(self) -> int:
        return int(np.prod(self.shape))

    @property
    def basis(self) -> list[Cochain]:
        return [self.element(t) for t in range(self.dim)]

    def element(self, t: int) -> Cochain:
        return Cochain(self.matrix[t].reshape(self.shape), self.base, self.module)

    def combination(self, coords) -> Cochain:
        c = coords if isinstance(coords, QArray) else QArray.from_values(list(coords))
        if self.dim == 0:
            return zero_cochain(self.base, self.arity, self.module)
        flat = c.reshape((1, self.dim)) @ self.matrix
        return Cochain(flat.reshape(self.shape), self.base, self.module)

    def coordinates(self, f: Cochain) -> QArray:
        """Coordinates of ``f`` in this basis (its entries at the free positions)."""
        return f.coeffs.take(self.free)

    def contains(self, f: Cochain) -> bool:
        if f.coeffs.shape != self.shape:
            return False
        return self.combination(self.coordinates(f)) == f


def _constraint_rows(src: QArray, tgt: QArray, n: int, d: int, dt: int) -> list[dict]:
    """Rows of ``tgt o f - f o src^(x n) = 0`` over the flattened coefficients."""
    sn, sd = src.num, src.den
    tn, td = tgt.num, tgt.den
    colnz = [[(i, int(sn[i, j])) for i in range(d) if sn[i, j] != 0] for j in range(d)]
    tgt_nz = [[(k, int(tn[l, k])) for k in range(dt) if tn[l, k] != 0] for l in range(dt)]
    s_scale = sd ** n
    rows = []
    strides = [d ** (n - 1 - p) * dt for p in range(n)]
    for J in product(range(d), repeat=n):
        base_j = sum(j * s for j, s in zip(J, strides))
        combos = []
        for choice in product(*(colnz[j] for j in J)):
            idx = 0
            coef = 1
            for p, (i, v) in enumerate(choice):
                idx += i * strides[p]
                coef *= v
            combos.append((idx, coef))
        for l in range(dt):
            row: dict[int, int] = {}
            for k, v in tgt_nz[l]:
                row[base_j + k] = row.get(base_j + k, 0) + v * s_scale
            for idx, coef in combos:
                key = idx + l
                row[key] = row.get(key, 0) - coef * td
            row = {c: v for c, v in row.items() if v}
            if row:
                rows.append(_primitive(row))
    return rows


def cochain_space_basis(A: BihomAlgebra, n: int, M: Bimodule | None = None) -> CochainSpaceBasis:
    """Exact basis of ``C^n_{alpha,beta}(A, M)`` (``M = A`` when omitted)."""
    key = ("basis", n, M)
    cached = A._powers.get(key)
    if cached is not None:
        return cached
    if n < 1:
        raise ValueError("cochains start in arity 1")
    d = A.dim
    dt = d if M is None else M.dim
    shape = (d,) * n + (dt,)
    ambient = d ** n * dt
    check_budget(ambient, f"C^{n} ambient space")
    rows: list[dict] = []
    pairs = [(A.alpha, A.alpha if M is None else M.alpha_m),
             (A.beta, A.beta if M is None else M.beta_m)]
    for src, tgt in pairs:
        if is_identity(src) and is_identity(tgt):
            continue
        rows.extend(_constraint_rows(src, tgt, n, d, dt))
    free, mat = nullspace(rows, ambient)
    basis = CochainSpaceBasis(n, A, M, free, mat, shape)
    A._powers[key] = basis
    return basis


def random_cochain(A: BihomAlgebra, n: int, rng: np.random.Generator,
                   M: Bimodule | None = None, scale: int = 3) -> Cochain:
    """Seeded random element of ``C^n_{alpha,beta}``: small integer basis combination."""
    B = cochain_space_basis(A, n, M)
    coords = [int(x) for x in rng.integers(-scale, scale + 1, size=B.dim)]
    return B.combination(coords)


# -- operad structure -------------------------------------------------------

def _require_self(*cs: Cochain) -> None:
    for c in cs:
        if c.module is not None:
            raise TargetMismatch("operad operations need algebra-valued cochains")
    for c in cs[1:]:
        if not _same(c.base, cs[0].base):
            raise TargetMismatch("cochains over different algebras")


def partial_composition(f: Cochain, i: int, g: Cochain) -> Cochain:
    """``f o_i g`` with 1-based ``i``."""
    _require_self(f, g)
    m, n = f.arity, g.arity
    if not 1 <= i <= m:
        raise PositionOutOfRange(f"position {i} outside 1..{m}")
    A = f.base
    t = twisted_insert(f.coeffs, i - 1, g.coeffs, A.alpha_pow(n - 1), A.beta_pow(n - 1))
    return Cochain(t, A)


def gamma(f: Cochain, gs: Sequence[Cochain]) -> Cochain:
    """Full composition by the closed twist-power formula."""
    _require_self(f, *gs)
    k = f.arity
    if len(gs) != k:
        raise ArityMismatch(f"gamma needs {k} arguments, got {len(gs)}")
    A = f.base
    degs = [g.degree for g in gs]
    t = f.coeffs
    for i in range(k - 1, -1, -1):
        a = sum(degs[i + 1:])
        b = sum(degs[:i])
        inner = gs[i].coeffs
        tw = _compose_twists(A.alpha_pow(a), A.beta_pow(b))
        t = insert(t, i, apply_output(inner, tw))
    return Cochain(t, A)


def _compose_twists(x: QArray | None, y: QArray | None) -> QArray | None:
    if x is None:
        return y
    if y is None:
        return x
    return x @ y


def gamma_nested(f: Cochain, gs: Sequence[Cochain]) -> Cochain:
    """Full composition as right-to-left iterated partial compositions."""
    if len(gs) != f.arity:
        raise ArityMismatch(f"gamma needs {f.arity} arguments, got {len(gs)}")
    out = f
    for i in range(len(gs), 0, -1):
        out = partial_composition(out, i, gs[i - 1])
    return out


def brace(f: Cochain, gs: Sequence[Cochain]) -> Cochain:
    """``{f}{g_1, ..., g_k}``: signed sum of order-preserving insertions.

    The sign of an insertion is ``sum_p |g_p| * i_p`` where ``i_p`` counts the
    inputs of the composite that sit before the block of ``g_p``.
    """
    if not gs:
        return f
    _require_self(f, *gs)
    m, k = f.arity, len(gs)
    if k > m:
        raise TooManyArguments(f"{k} arguments for arity {m}")
    A = f.base
    ident = identity_cochain(A)
    total = zero_cochain(A, m + sum(g.degree for g in gs))
    for slots in combinations(range(m), k):
        hs = [ident] * m
        eps = 0
        before = 0
        for p, c in enumerate(slots):
            hs[c] = gs[p]
            eps += gs[p].degree * ((c - p) + before)
            before += gs[p].arity
        term = gamma(f, hs)
        total = total + term if eps % 2 == 0 else total - term
    return total


def circ(f: Cochain, g: Cochain) -> Cochain:
    """Gerstenhaber circle product ``sum_i (-1)^((n-1)(i-1)) f o_i g``."""
    _require_self(f, g)
    n = g.arity
    total = None
    for i in range(1, f.arity + 1):
        term = partial_composition(f, i, g)
        if (n - 1) * (i - 1) % 2:
            term = -term
        total = term if total is None else total + term
    return total


def gerstenhaber_bracket(f: Cochain, g: Cochain) -> Cochain:
    fg = circ(f, g)
    gf = circ(g, f)
    return fg - gf if (f.degree * g.degree) % 2 == 0 else fg + gf


def is_multiplication(A: BihomAlgebra) -> bool:
    m = mu_cochain(A)
    return circ(m, m).is_zero()


# -- serialization ----------------------------------------------------------

def cochain_to_json(f: Cochain) -> dict:
    out = {"kind": "cochain", "arity": f.arity, "base": f.base.label,
           "coeffs": f.coeffs.to_json()}
    if f.module is not None:
        out["module"] = f.module.label
    return out


def cochain_from_json(raw: dict, A: BihomAlgebra, M: Bimodule | None = None) -> Cochain:
    f = cochain(A, raw["coeffs"], M)
    if "arity" in raw and int(raw["arity"]) != f.arity:
        raise ArityMismatch(f"declared arity {raw['arity']} but tensor has arity {f.arity}")
    return f
