"""Exact rational tensors.

A :class:`QArray` is an integer numerator array together with one positive
common denominator, kept in lowest terms (``gcd(den, all numerators) == 1``),
which makes the representation of a given rational tensor unique.  The
numerator array is ``int64`` whenever every entry is below ``2**62`` in
magnitude and a Python-int object array otherwise; each operation checks the
worst-case magnitude of its result before choosing the int64 route, so no
rounding or wrap-around can ever happen.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from . import kernels

LIMIT = 1 << 62


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (float, np.floating)):
        raise TypeError(f"refusing inexact float {x!r}; use an integer or 'p/q' string")
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot interpret {x!r} as a rational")


def _absmax(num: np.ndarray) -> int:
    if num.size == 0:
        return 0
    if num.dtype == object:
        return max(abs(v) for v in num.flat)
    return int(np.abs(num).max())


def _compact(num: np.ndarray) -> np.ndarray:
    if num.dtype == object and _absmax(num) < LIMIT:
        return num.astype(np.int64)
    return num


def _obj(num: np.ndarray) -> np.ndarray:
    return num if num.dtype == object else num.astype(object)


class QArray:
    """Immutable dense tensor of rationals."""

    __slots__ = ("num", "den")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, num: np.ndarray, den: int = 1, *, normalize: bool = True):
        num = np.asarray(num)
        if num.dtype != object and num.dtype != np.int64:
            num = num.astype(np.int64)
        den = int(den)
        if den <= 0:
            raise ValueError("denominator must be positive")
        if normalize:
            num = _compact(num)
            if num.size == 0 or not num.any():
                den = 1
            elif den != 1:
                g = gcd(den, int(np.gcd.reduce(num.reshape(-1))))
                if g > 1:
                    num = num // g
                    den //= g
        num.setflags(write=False)
        self.num = num
        self.den = den

    # -- construction -------------------------------------------------
    @classmethod
    def from_values(cls, data, shape: Sequence[int] | None = None) -> "QArray":
        arr = np.array(data, dtype=object)
        if shape is not None and tuple(arr.shape) != tuple(shape):
            raise ValueError(f"expected shape {tuple(shape)}, got {arr.shape}")
        fracs = [as_fraction(x) for x in arr.flat]
        den = reduce(lcm, (f.denominator for f in fracs), 1)
        num = np.empty(len(fracs), dtype=object)
        for i, f in enumerate(fracs):
            num[i] = f.numerator * (den // f.denominator)
        return cls(num.reshape(arr.shape), den)

    @classmethod
    def zeros(cls, shape: Sequence[int]) -> "QArray":
        return cls(np.zeros(tuple(shape), dtype=np.int64), 1, normalize=False)

    @classmethod
    def identity(cls, d: int) -> "QArray":
        return cls(np.eye(d, dtype=np.int64), 1, normalize=False)

    @classmethod
    def stack(cls, arrays: Sequence["QArray"]) -> "QArray":
        den = reduce(lcm, (a.den for a in arrays), 1)
        nums = [_scaled(a.num, den // a.den) for a in arrays]
        if any(n.dtype == object for n in nums):
            nums = [_obj(n) for n in nums]
        return cls(np.stack(nums), den)

    # -- basic protocol ----------------------------------------------
    @property
    def shape(self) -> tuple:
        return self.num.shape

    @property
    def ndim(self) -> int:
        return self.num.ndim

    @property
    def size(self) -> int:
        return self.num.size

    def __repr__(self) -> str:
        return f"QArray(shape={self.shape}, den={self.den})"

    def __getitem__(self, idx):
        sub = self.num[idx]
        if np.ndim(sub) == 0:
            return Fraction(int(sub), self.den)
        return QArray(np.array(sub), self.den)

    def entry(self, idx) -> Fraction:
        return Fraction(int(self.num[idx]), self.den)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QArray):
            return NotImplemented
        return (self.shape == other.shape and self.den == other.den
                and bool(np.array_equal(self.num, other.num)))

    def is_zero(self) -> bool:
        return not self.num.any()

    def first_nonzero(self) -> tuple | None:
        """Lexicographically first index holding a nonzero entry."""
        hits = np.argwhere(self.num != 0)
        if len(hits) == 0:
            return None
        return tuple(int(i) for i in hits[0])

    def absmax(self) -> int:
        return _absmax(self.num)

    # -- arithmetic --------------------------------------------------
    def _combine(self, other: "QArray", sign: int) -> "QArray":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        den = lcm(self.den, other.den)
        fa, fb = den // self.den, den // other.den
        if (self.num.dtype != object and other.num.dtype != object
                and self.absmax() * fa + other.absmax() * fb < LIMIT):
            num = self.num * fa + sign * (other.num * fb)
        else:
            num = _obj(self.num) * fa + sign * (_obj(other.num) * fb)
        return QArray(num, den)

    def __add__(self, other: "QArray") -> "QArray":
        return self._combine(other, 1)

    def __sub__(self, other: "QArray") -> "QArray":
        return self._combine(other, -1)

    def __neg__(self) -> "QArray":
        return QArray(-self.num, self.den, normalize=False)

    def scale(self, c) -> "QArray":
        c = as_fraction(c)
        if c == 0:
            return QArray.zeros(self.shape)
        p, q = c.numerator, c.denominator
        return QArray(_scaled(self.num, p), self.den * q)

    def __mul__(self, c) -> "QArray":
        return self.scale(c)

    __rmul__ = __mul__

    # -- shape manipulation ------------------------------------------
    def transpose(self, perm: Sequence[int]) -> "QArray":
        return QArray(self.num.transpose(perm), self.den, normalize=False)

    def moveaxis(self, src: int, dst: int) -> "QArray":
        return QArray(np.moveaxis(self.num, src, dst), self.den, normalize=False)

    def reshape(self, shape: Sequence[int]) -> "QArray":
        return QArray(self.num.reshape(tuple(shape)), self.den, normalize=False)

    def ravel(self) -> "QArray":
        return self.reshape((-1,))

    def take(self, flat_indices: Sequence[int]) -> "QArray":
        """Entries at the given positions of the flattened tensor."""
        return QArray(self.num.reshape(-1)[list(flat_indices)], self.den)

    # -- contraction -------------------------------------------------
    def tensordot(self, other: "QArray", axes) -> "QArray":
        return tensordot(self, other, axes)

    def __matmul__(self, other: "QArray") -> "QArray":
        return tensordot(self, other, ([self.ndim - 1], [0]))

    # -- export ------------------------------------------------------
    def tolist(self):
        return _map_nested(self.num, lambda v: Fraction(int(v), self.den))

    def to_json(self):
        return _map_nested(self.num, lambda v: encode_scalar(Fraction(int(v), self.den)))


def encode_scalar(f: Fraction):
    return f.numerator if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _map_nested(num: np.ndarray, fn):
    if num.ndim == 0:
        return fn(num[()])
    return [_map_nested(num[i], fn) for i in range(num.shape[0])]


def _scaled(num: np.ndarray, factor: int) -> np.ndarray:
    if factor == 1:
        return num
    if num.dtype != object and _absmax(num) * abs(factor) < LIMIT:
        return num * factor
    return _obj(num) * factor


def tensordot(a: QArray, b: QArray, axes) -> QArray:
    """Exact ``numpy.tensordot``; same axis conventions."""
    if isinstance(axes, int):
        ax_a = list(range(a.ndim - axes, a.ndim))
        ax_b = list(range(axes))
    else:
        ax_a = [x % a.ndim for x in axes[0]]
        ax_b = [x % b.ndim for x in axes[1]]
    if len(ax_a) != len(ax_b):
        raise ValueError("axes length mismatch")
    for x, y in zip(ax_a, ax_b):
        if a.shape[x] != b.shape[y]:
            raise ValueError(f"contracted dimensions differ: {a.shape[x]} vs {b.shape[y]}")
    free_a = [i for i in range(a.ndim) if i not in ax_a]
    free_b = [i for i in range(b.ndim) if i not in ax_b]
    k = int(np.prod([a.shape[x] for x in ax_a], dtype=np.int64)) if ax_a else 1
    ma = int(np.prod([a.shape[x] for x in free_a], dtype=np.int64)) if free_a else 1
    mb = int(np.prod([b.shape[x] for x in free_b], dtype=np.int64)) if free_b else 1
    out_shape = tuple(a.shape[x] for x in free_a) + tuple(b.shape[x] for x in free_b)
    if ma == 0 or mb == 0 or k == 0:
        return QArray.zeros(out_shape)
    a2 = a.num.transpose(free_a + ax_a).reshape(ma, k)
    b2 = b.num.transpose(ax_b + free_b).reshape(k, mb)
    if (a2.dtype != object and b2.dtype != object
            and a.absmax() * b.absmax() * k < LIMIT):
        c = kernels.matmul_int64(a2, b2)
    else:
        c = _obj(a2) @ _obj(b2)
    return QArray(c.reshape(out_shape), a.den * b.den)


def outer(a: QArray, b: QArray) -> QArray:
    return tensordot(a, b, 0)


def kron(a: QArray, b: QArray) -> QArray:
    """Kronecker product of two matrices, row index ``i*rows(b) + i'``."""
    (p, q), (r, s) = a.shape, b.shape
    return outer(a, b).transpose((0, 2, 1, 3)).reshape((p * r, q * s))


def matrix_power(m: QArray, k: int) -> QArray:
    out = QArray.identity(m.shape[0])
    base = m
    while k:
        if k & 1:
            out = out @ base
        k >>= 1
        if k:
            base = base @ base
    return out


def is_identity(m: QArray) -> bool:
    return m.ndim == 2 and m.shape[0] == m.shape[1] and m == QArray.identity(m.shape[0])


def block_diag(blocks: Iterable[QArray]) -> QArray:
    blocks = list(blocks)
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    den = reduce(lcm, (b.den for b in blocks), 1)
    num = np.zeros((rows, cols), dtype=object)
    r = c = 0
    for b in blocks:
        num[r:r + b.shape[0], c:c + b.shape[1]] = _obj(_scaled(b.num, den // b.den))
        r += b.shape[0]
        c += b.shape[1]
    return QArray(num, den)
