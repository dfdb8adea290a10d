"""Multilinear maps as coefficient tensors.

A map ``f : V_1 x ... x V_n -> W`` is the tensor ``t[i_1, ..., i_n, k]`` with
``f(e_{i_1}, ..., e_{i_n}) = sum_k t[..., k] e_k``.  Linear maps are matrices
acting on coordinate columns, ``phi(e_j) = sum_i phi[i, j] e_i``.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from typing import Sequence

from .errors import BudgetExceeded
from .qarray import QArray, tensordot

DEFAULT_BUDGET = 200_000
_budget_override: list[int] = []


def get_budget() -> int:
    if _budget_override:
        return _budget_override[-1]
    env = os.environ.get("BIHOM_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@contextmanager
def budget(entries: int):
    _budget_override.append(int(entries))
    try:
        yield
    finally:
        _budget_override.pop()


def check_budget(entries: int, what: str = "") -> None:
    cap = get_budget()
    if entries > cap:
        raise BudgetExceeded(entries, cap, what)


def apply_slot(t: QArray, slot: int, m: QArray | None) -> QArray:
    """Precompose input ``slot`` with the linear map ``m``."""
    if m is None:
        return t
    return tensordot(t, m, ([slot], [0])).moveaxis(-1, slot)


def apply_inputs(t: QArray, mats: Sequence[QArray | None]) -> QArray:
    for p, m in enumerate(mats):
        t = apply_slot(t, p, m)
    return t


def apply_output(t: QArray, m: QArray | None) -> QArray:
    """Postcompose with the linear map ``m``."""
    if m is None:
        return t
    return tensordot(t, m, ([t.ndim - 1], [1]))


def insert(outer: QArray, pos: int, inner: QArray,
           mats: Sequence[QArray | None] | None = None) -> QArray:
    """Plug ``inner``'s output into input ``pos`` (0-based) of ``outer``.

    ``mats`` optionally precomposes the remaining inputs of ``outer``
    (entry ``pos`` is ignored).  The result's inputs are ``outer``'s inputs
    before ``pos``, then ``inner``'s inputs, then the rest.
    """
    m = outer.ndim - 1
    if mats is not None:
        for p in range(m):
            if p != pos:
                outer = apply_slot(outer, p, mats[p])
    n = inner.ndim - 1
    res = tensordot(inner, outer, ([n], [pos]))
    perm = list(range(n, n + pos)) + list(range(n)) + list(range(n + pos, res.ndim))
    return res.transpose(perm)


def twisted_insert(outer: QArray, pos: int, inner: QArray,
                   before: QArray | None, after: QArray | None) -> QArray:
    m = outer.ndim - 1
    mats = [before if p < pos else after for p in range(m)]
    return insert(outer, pos, inner, mats)


def first_witness(t: QArray) -> tuple | None:
    return t.first_nonzero()
