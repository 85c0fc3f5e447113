"""Pure numpy implementations of the hot kernels.

Same signatures as the compiled ``_speedups`` module. Everything is
vectorized over leading batch axes so that the per-subset loops stay in
numpy rather than in the interpreter.
"""
import numpy as np


def det_lu_batch(a):
    """Determinants of a stack of square matrices by LU with partial pivoting.

    Parameters
    ----------
    a : (..., n, n) array_like
        Complex matrices. Not modified.

    Returns
    -------
    (...) ndarray of complex128
    """
    a = np.array(a, dtype=np.complex128, copy=True)
    lead = a.shape[:-2]
    n = a.shape[-1]
    a = a.reshape((-1, n, n))
    nb = a.shape[0]
    rows = np.arange(nb)
    det = np.ones(nb, dtype=np.complex128)
    for k in range(n):
        p = np.argmax(np.abs(a[:, k:, k]), axis=1) + k
        swap = p != k
        if swap.any():
            top = a[rows, k, k:].copy()
            a[rows, k, k:] = a[rows, p, k:]
            a[rows, p, k:] = top
            det[swap] = -det[swap]
        piv = a[:, k, k]
        det *= piv
        safe = np.where(piv == 0, 1.0, piv)
        f = a[:, k + 1:, k] / safe[:, None]
        f[piv == 0] = 0.0
        a[:, k + 1:, k + 1:] -= f[:, :, None] * a[:, None, k, k + 1:]
    return det.reshape(lead)


def permanent_batch(a):
    """Permanents of a stack of square matrices (Ryser, Gray-code order)."""
    a = np.asarray(a, dtype=np.complex128)
    lead = a.shape[:-2]
    n = a.shape[-1]
    a = a.reshape((-1, n, n))
    rowsum = np.zeros(a.shape[:2], dtype=np.complex128)
    total = np.zeros(a.shape[0], dtype=np.complex128)
    g_prev = 0
    size = 0
    for k in range(1, 1 << n):
        g = k ^ (k >> 1)
        diff = g ^ g_prev
        j = diff.bit_length() - 1
        if g & diff:
            rowsum += a[:, :, j]
            size += 1
        else:
            rowsum -= a[:, :, j]
            size -= 1
        prod = np.prod(rowsum, axis=1)
        if (n - size) & 1:
            total -= prod
        else:
            total += prod
        g_prev = g
    return total.reshape(lead)


def det_lu(a):
    return complex(det_lu_batch(a))


def permanent_ryser(a):
    return complex(permanent_batch(a))


def _minors(sub, alternating):
    # sub: (..., M, C, n, n) -> per-factor det or per, shape (..., M, C)
    alt = np.asarray(alternating, dtype=bool)
    out = np.empty(sub.shape[:-2], dtype=np.complex128)
    if alt.any():
        out[..., alt, :] = det_lu_batch(sub[..., alt, :, :, :])
    if (~alt).any():
        out[..., ~alt, :] = permanent_batch(sub[..., ~alt, :, :, :])
    return out


def factored_terms(factors, alternating, combos, num_threads=1):
    """Per-subset products of squared moduli, shape (batch, n_subsets)."""
    f = np.asarray(factors, dtype=np.complex128)
    combos = np.asarray(combos, dtype=np.intp)
    if f.shape[0] * combos.shape[0] == 0:
        return np.empty((f.shape[0], combos.shape[0]))
    # (B, M, N, C, N) -> (B, M, C, N, N)
    sub = np.moveaxis(f[..., combos], 3, 2)
    z = _minors(sub, alternating)
    return np.prod(z.real ** 2 + z.imag ** 2, axis=1)


def principal_terms(h, alternating, combos, num_threads=1):
    """Per-subset products of principal minors / permanents, shape (n_subsets,)."""
    h = np.asarray(h, dtype=np.complex128)
    combos = np.asarray(combos, dtype=np.intp)
    if combos.shape[0] == 0:
        return np.empty(0, dtype=np.complex128)
    sub = h[:, combos[:, :, None], combos[:, None, :]]
    return np.prod(_minors(sub, alternating), axis=0)
