"""Exact linear algebra over the rationals by fraction-free elimination.

Rows are sparse ``{column: int}`` dicts.  Rational input rows are first
cleared of denominators (scaling a row does not change the row space) and
every intermediate row is divided by the gcd of its entries, so all work
happens on Python integers.

Pivoting is deterministic: rows are consumed in input order and each row
is reduced until its leading (lowest-column) entry has no pivot yet, which
then becomes that row's pivot.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from .qarray import QArray, as_fraction

Row = dict  # {column: int}, no zero values


def _primitive(row: Row) -> Row:
    if not row:
        return row
    g = reduce(gcd, row.values())
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        row = {k: v // g for k, v in row.items()}
    return row


def int_row(entries: Iterable[tuple[int, object]]) -> Row:
    """Integer row proportional to the given ``(column, rational)`` pairs."""
    fr = [(int(c), as_fraction(v)) for c, v in entries]
    fr = [(c, v) for c, v in fr if v != 0]
    if not fr:
        return {}
    den = reduce(lcm, (v.denominator for _, v in fr), 1)
    row: Row = {}
    for c, v in fr:
        row[c] = row.get(c, 0) + v.numerator * (den // v.denominator)
    return _primitive({c: v for c, v in row.items() if v})


def rows_from_qarray(m: QArray) -> list[Row]:
    """Sparse integer rows of a 2-d QArray (the common denominator drops out)."""
    out = []
    num = m.num
    for i in range(num.shape[0]):
        nz = np.nonzero(num[i])[0]
        out.append(_primitive({int(c): int(num[i, c]) for c in nz}))
    return out


def _eliminate(row: Row, piv: Row, col: int) -> Row:
    a, p = row[col], piv[col]
    g = gcd(a, p)
    fa, fp = p // g, a // g
    new = {k: v * fa for k, v in row.items()} if fa != 1 else dict(row)
    for k, v in piv.items():
        nv = new.get(k, 0) - fp * v
        if nv:
            new[k] = nv
        else:
            new.pop(k, None)
    return _primitive(new)


class Echelon:
    """Incremental row echelon form keyed by pivot column."""

    def __init__(self) -> None:
        self.pivots: dict[int, Row] = {}

    def reduce(self, row: Row) -> Row:
        while row:
            c = min(row)
            piv = self.pivots.get(c)
            if piv is None:
                return row
            row = _eliminate(row, piv, c)
        return row

    def add(self, row: Row) -> int | None:
        """Insert a row; returns its new pivot column, or None if dependent."""
        row = self.reduce(dict(row))
        if not row:
            return None
        c = min(row)
        self.pivots[c] = row
        return c

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def rref(self) -> dict[int, Row]:
        """Reduced form: each pivot column is zero in every other pivot row."""
        piv = {c: dict(r) for c, r in self.pivots.items()}
        cols = sorted(piv)
        for c in reversed(cols):
            pr = piv[c]
            for c2 in cols:
                if c2 >= c:
                    break
                if c in piv[c2]:
                    piv[c2] = _eliminate(piv[c2], pr, c)
        return piv


def echelon(rows: Iterable[Row]) -> Echelon:
    e = Echelon()
    for r in rows:
        if r:
            e.add(r)
    return e


def rank(rows: Iterable[Row]) -> int:
    return echelon(rows).rank


def nullspace(rows: Iterable[Row], ncols: int) -> tuple[list[int], QArray]:
    """Basis of ``{x : R x = 0}``.

    Returns ``(free, B)`` where ``B`` has one row per free column ``j``;
    that row has a 1 in column ``j`` and 0 in every other free column, so the
    coordinates of any kernel vector are simply its entries at ``free``.
    """
    rr = echelon(rows).rref()
    free = [j for j in range(ncols) if j not in rr]
    pos = {j: t for t, j in enumerate(free)}
    basis = np.zeros((len(free), ncols), dtype=object)
    entries: list[dict[int, Fraction]] = [{j: Fraction(1)} for j in free]
    for c, r in rr.items():
        p = r[c]
        for j, v in r.items():
            if j != c:
                entries[pos[j]][c] = Fraction(-v, p)
    den = reduce(lcm, (f.denominator for e in entries for f in e.values()), 1)
    for t, e in enumerate(entries):
        for j, f in e.items():
            basis[t, j] = f.numerator * (den // f.denominator)
    return free, QArray(basis.reshape(len(free), ncols), den)


def _augmented(m: QArray, rhs) -> list[Row]:
    b = rhs if isinstance(rhs, QArray) else QArray.from_values(list(rhs))
    if b.shape != (m.shape[0],):
        raise ValueError("right-hand side length mismatch")
    ncols = m.shape[1]
    out = []
    for i in range(m.shape[0]):
        r = {int(c): int(m.num[i, c]) * b.den for c in np.nonzero(m.num[i])[0]}
        if b.num[i] != 0:
            r[ncols] = int(b.num[i]) * m.den
        out.append(_primitive(r))
    return out


def solve(m: QArray, rhs) -> list[Fraction] | None:
    """A solution of ``m x = b`` with all free variables zero, or None."""
    ncols = m.shape[1]
    e = echelon(_augmented(m, rhs))
    if ncols in e.pivots:
        return None
    rr = e.rref()
    x = [Fraction(0)] * ncols
    for c, r in rr.items():
        x[c] = Fraction(r.get(ncols, 0), r[c])
    return x


def left_certificate(m: QArray, rhs) -> list[Fraction] | None:
    """A vector ``w`` with ``w m = 0`` and ``w . b != 0``; None when ``m x = b`` is solvable.

    Such a ``w`` is an exact witness that ``b`` lies outside the column space.
    """
    b = rhs if isinstance(rhs, QArray) else QArray.from_values(list(rhs))
    nrows = m.shape[0]
    _, basis = nullspace(rows_from_qarray(m.transpose((1, 0))), nrows)
    bl = b.tolist()
    for t in range(basis.shape[0]):
        w = basis[t].tolist()
        if sum(wi * bi for wi, bi in zip(w, bl)) != 0:
            return w
    return None


def inverse(m: QArray) -> QArray | None:
    """Exact inverse of a square matrix, or None when singular."""
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse needs a square matrix")
    num, den = m.num, m.den
    aug = []
    for i in range(n):
        r = {int(c): int(num[i, c]) for c in np.nonzero(num[i])[0]}
        r[n + i] = den
        aug.append(_primitive(r))
    e = echelon(aug)
    if any(c not in e.pivots for c in range(n)):
        return None
    rr = e.rref()
    out = [[Fraction(0)] * n for _ in range(n)]
    for c in range(n):
        r = rr[c]
        for j, v in r.items():
            if j >= n:
                out[c][j - n] = Fraction(v, r[c])
    return QArray.from_values(out)
