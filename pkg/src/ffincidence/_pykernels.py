"""numpy implementations of the hot loops; used when the compiled core is absent.

Signatures mirror ``_kernels.pyx`` exactly.  All arrays are int32 code arrays
except ``mask`` (uint8) and the int64 outputs.
"""
from __future__ import annotations

import numpy as np

# pair blocks are sized so one block of intermediates stays around 32 MB
_BLOCK = 1 << 22


def _rows_per_block(n: int, k: int) -> int:
    return max(1, _BLOCK // max(1, n * max(k, 1)))


def trace_hist(trmul, freqs, pts, p):
    """hist[i, t] = #{x in pts : sum_j trmul[freqs[i, j], x_j] = t (mod p)}."""
    nm, k = freqs.shape
    n = pts.shape[0]
    out = np.zeros((nm, p), dtype=np.int64)
    step = _rows_per_block(n, k)
    for lo in range(0, nm, step):
        f = freqs[lo:lo + step]
        acc = np.zeros((f.shape[0], n), dtype=np.int32)
        for j in range(k):
            acc += trmul[f[:, j][:, None], pts[:, j][None, :]]
        acc %= p
        acc += (np.arange(f.shape[0], dtype=np.int32) * p)[:, None]
        out[lo:lo + f.shape[0]] = np.bincount(acc.ravel(), minlength=f.shape[0] * p).reshape(-1, p)
    return out


def _pair_forms(xs, Y, sub, sqsign, add):
    k = Y.shape[1]
    acc = np.zeros((xs.shape[0], Y.shape[0]), dtype=np.int32)
    for j in range(k):
        acc = add[acc, sqsign[j][sub[xs[:, j][:, None], Y[:, j][None, :]]]]
    return acc


def pair_form_hist(X, Y, sub, sqsign, add):
    """Histogram over (x, y) in X x Y of sum_j sqsign[j, x_j - y_j]."""
    q = sub.shape[0]
    out = np.zeros(q, dtype=np.int64)
    step = _rows_per_block(Y.shape[0], Y.shape[1])
    for lo in range(0, X.shape[0], step):
        vals = _pair_forms(X[lo:lo + step], Y, sub, sqsign, add)
        out += np.bincount(vals.ravel(), minlength=q)
    return out


def pair_form_match(X, Y, target, sub, sqsign, add):
    """#{(x, y) in X x Y : sum_j sqsign[j, x_j - y_j] == target[y]}."""
    total = 0
    step = _rows_per_block(Y.shape[0], Y.shape[1])
    for lo in range(0, X.shape[0], step):
        vals = _pair_forms(X[lo:lo + step], Y, sub, sqsign, add)
        total += int(np.count_nonzero(vals == target[None, :]))
    return total


def shift_member_count(W, E, sub, mask, q):
    """sum over x in W, z in E of mask[index(x - z)]."""
    k = W.shape[1]
    total = 0
    step = _rows_per_block(E.shape[0], k)
    for lo in range(0, W.shape[0], step):
        xs = W[lo:lo + step]
        idx = np.zeros((xs.shape[0], E.shape[0]), dtype=np.int64)
        for j in range(k):
            idx = idx * q + sub[xs[:, j][:, None], E[:, j][None, :]]
        total += int(np.count_nonzero(mask[idx]))
    return total
