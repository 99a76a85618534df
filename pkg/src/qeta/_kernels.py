"""Residue-ring inner loops.

Two interchangeable implementations live here: numba-compiled loops and a
pure-numpy path.  ``QETA_DISABLE_NUMBA=1`` (or a missing numba install)
selects numpy at import time; :func:`set_backend` switches at runtime so the
benchmark and the test-suite can compare both in one process.

All kernels take and return ``int64`` arrays whose entries lie in ``[0, m)``
with ``m < 2**31``.
"""

from __future__ import annotations

import os

import numpy as np

_INT64_LIMIT = 2**63 - 1
MAX_WORD_MODULUS = 2**31 - 1

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
_env_disabled = os.environ.get("QETA_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")
_backend = "numba" if HAVE_NUMBA and not _env_disabled else "numpy"


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _backend = name


# -- numpy path ---------------------------------------------------------------


def _np_conv_mod(a, b, n, m):
    la, lb = min(len(a), n), min(len(b), n)
    out = np.zeros(n, dtype=np.int64)
    if la == 0 or lb == 0:
        return out
    a, b = a[:la], b[:lb]
    terms = min(la, lb)
    if (m - 1) * (m - 1) * terms <= _INT64_LIMIT:
        full = np.convolve(a, b)[:n] % m
    else:
        # 16-bit limbs keep every partial sum below 2**63
        a0, a1 = a & 0xFFFF, a >> 16
        b0, b1 = b & 0xFFFF, b >> 16
        lo = np.convolve(a0, b0)[:n] % m
        mid = (np.convolve(a0, b1)[:n] % m + np.convolve(a1, b0)[:n] % m) % m
        hi = np.convolve(a1, b1)[:n] % m
        shift = pow(2, 16, m)
        full = (lo + (mid * shift) % m + (hi * (shift * shift % m)) % m) % m
    out[: len(full)] = full
    return out


def _np_sparse_div_mod(num, idx, val, m):
    n = len(num)
    out = np.array(num, dtype=np.int64) % m
    if len(idx) == 0:
        return out
    neg = (-val) % m
    for k in range(1, n):
        cut = np.searchsorted(idx, k, side="right")
        if cut:
            s = out[k - idx[:cut]] * neg[:cut] % m
            out[k] = (out[k] + int(s.sum())) % m
    return out


# -- numba path ---------------------------------------------------------------

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _nb_conv_mod(a, b, n, m):
        la = min(a.shape[0], n)
        lb = min(b.shape[0], n)
        out = np.zeros(n, dtype=np.int64)
        if m == 1:
            return out
        # products accumulated per reduction without overflowing int64; capped so
        # start + block cannot wrap either
        block = max(1, min(la + 1, (_INT64_LIMIT - m) // ((m - 1) * (m - 1))))
        # reversed copy turns b[k - i] into a forward, vectorizable stream
        br = b[:lb][::-1].copy()
        for k in range(n):
            lo = max(0, k - lb + 1)
            hi = min(k, la - 1)
            off = lb - 1 - k
            acc = 0
            start = lo
            while start <= hi:
                stop = min(start + block, hi + 1)
                s = 0
                for i in range(start, stop):
                    s += a[i] * br[off + i]
                acc = (acc + s % m) % m
                start = stop
            out[k] = acc
        return out

    @numba.njit(cache=True)
    def _nb_sparse_div_mod(num, idx, val, m):
        n = num.shape[0]
        out = np.empty(n, dtype=np.int64)
        for k in range(n):
            out[k] = num[k] % m
        neg = np.empty(val.shape[0], dtype=np.int64)
        for j in range(val.shape[0]):
            neg[j] = (-val[j]) % m
        for k in range(1, n):
            acc = out[k]
            for j in range(idx.shape[0]):
                e = idx[j]
                if e > k:
                    break
                acc = (acc + out[k - e] * neg[j]) % m
            out[k] = acc
        return out


def conv_mod(a: np.ndarray, b: np.ndarray, n: int, m: int) -> np.ndarray:
    """First ``n`` coefficients of ``a*b`` reduced mod ``m``."""
    if m > MAX_WORD_MODULUS:
        raise ValueError("modulus exceeds machine-word kernel range")
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    if _backend == "numba":
        return _nb_conv_mod(a, b, n, m)
    return _np_conv_mod(a, b, n, m)


def sparse_div_mod(num: np.ndarray, idx: np.ndarray, val: np.ndarray, m: int) -> np.ndarray:
    """Solve ``(1 + sum val[j] q**idx[j]) * y = num`` mod ``m``.

    ``idx`` must be strictly increasing and positive.
    """
    if m > MAX_WORD_MODULUS:
        raise ValueError("modulus exceeds machine-word kernel range")
    num = np.ascontiguousarray(num, dtype=np.int64)
    idx = np.ascontiguousarray(idx, dtype=np.int64)
    val = np.ascontiguousarray(val, dtype=np.int64) % m
    if _backend == "numba":
        return _nb_sparse_div_mod(num, idx, val, m)
    return _np_sparse_div_mod(num, idx, val, m)
