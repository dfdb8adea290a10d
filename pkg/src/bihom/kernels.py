"""Integer matrix-product kernels behind exact tensor contraction.

Every exact tensor is an integer numerator array over one common
denominator, so contraction reduces to an integer matrix product.  When
the caller has proven the product fits in int64, one of two kernels runs:

* a numba ``@njit`` loop that skips zero entries (structure constants are
  sparse), used when numba imports and ``BIHOM_JIT`` is not disabled;
* plain ``numpy`` ``@`` on int64 arrays.

``BIHOM_JIT=0`` forces the numpy path.  Results are bit-identical.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("BIHOM_JIT", "1").strip().lower()
JIT_REQUESTED = _FLAG not in ("0", "false", "no", "off")

try:  # pragma: no cover - depends on environment
    if not JIT_REQUESTED:
        raise ImportError
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None

JIT_ENABLED = njit is not None


def matmul_numpy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b


if JIT_ENABLED:

    @njit(cache=True)
    def _matmul_jit(a, b):
        n, k = a.shape
        m = b.shape[1]
        out = np.zeros((n, m), dtype=np.int64)
        for i in range(n):
            for p in range(k):
                x = a[i, p]
                if x != 0:
                    for j in range(m):
                        out[i, j] += x * b[p, j]
        return out

    def matmul_jit(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return _matmul_jit(np.ascontiguousarray(a), np.ascontiguousarray(b))

else:  # pragma: no cover
    matmul_jit = matmul_numpy


def matmul_int64(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of two int64 matrices; the caller guarantees no overflow."""
    if JIT_ENABLED:
        return matmul_jit(a, b)
    return matmul_numpy(a, b)


def backend_name() -> str:
    return "numba" if JIT_ENABLED else "numpy"
