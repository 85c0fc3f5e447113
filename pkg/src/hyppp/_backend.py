"""Kernel backend selection.

The compiled ``_speedups`` extension is used when it imports; otherwise
the numpy fallback. ``HYPPP_PURE=1`` forces the fallback and
``HYPPP_THREADS`` caps the thread count of the compiled kernels.
"""
import os

import numpy as np

from . import _fallback

if os.environ.get("HYPPP_PURE") == "1":
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _speedups as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"


def num_threads():
    value = os.environ.get("HYPPP_THREADS")
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            pass
    return os.cpu_count() or 1


def get_impl(name=None):
    """Return the kernel module by name (``"compiled"``/``"python"``) or the active one."""
    if name is None:
        return _impl
    if name == "python":
        return _fallback
    if name == "compiled":
        from . import _speedups
        return _speedups
    raise ValueError(f"unknown backend {name!r}")


def available_backends():
    names = ["python"]
    try:
        from . import _speedups  # noqa: F401
        names.append("compiled")
    except ImportError:
        pass
    return names


def pairwise_sum(terms, axis=-1):
    """Sum along ``axis`` with a fixed binary-tree order.

    The order depends only on the number of terms, never on how they were
    produced, so sums are reproducible across backends and thread counts.
    """
    x = np.moveaxis(np.asarray(terms), axis, -1)
    if x.shape[-1] == 0:
        return np.zeros(x.shape[:-1], dtype=x.dtype)[()]
    while x.shape[-1] > 1:
        if x.shape[-1] % 2:
            pad = np.zeros(x.shape[:-1] + (1,), dtype=x.dtype)
            x = np.concatenate([x, pad], axis=-1)
        x = x[..., 0::2] + x[..., 1::2]
    return x[..., 0][()]


def det_lu(a):
    return _impl.det_lu(a)


def permanent_ryser(a):
    return _impl.permanent_ryser(a)


def factored_terms(factors, alternating, combos):
    return _impl.factored_terms(factors, alternating, combos, num_threads())


def principal_terms(h, alternating, combos):
    return _impl.principal_terms(h, alternating, combos, num_threads())
