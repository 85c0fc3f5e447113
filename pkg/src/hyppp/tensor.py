"""Dense complex containers: matrices and 2M-way hypercubic arrays.

Matrices are plain ``complex128`` numpy arrays. A hypercubic array keeps
its entries as an ndarray of shape ``(N,) * 2M`` whose first M axes are
the i-indices and last M axes the j-indices, so a row-major flatten gives
the fixed storage order. Public indices are 1-based.
"""
from dataclasses import dataclass
import string

import numpy as np

from .errors import ShapeError


def as_matrix(a, name="matrix"):
    """Coerce to a finite 2-D complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def as_square(a, name="matrix"):
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ShapeError(f"{name} must be square with side >= 1, got {m.shape}")
    return m


@dataclass(frozen=True, eq=False)
class HypercubicArray:
    """A 2M-way complex array with side N in every direction.

    Attributes
    ----------
    m : int
        Number of (i, j) direction pairs.
    n : int
        Side length.
    entries : ndarray
        Read-only array of shape ``(n,) * (2 * m)``.
    """

    m: int
    n: int
    entries: np.ndarray

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ShapeError(f"need m >= 1 and n >= 1, got m={self.m}, n={self.n}")
        e = np.array(self.entries, dtype=np.complex128)
        if e.size != self.n ** (2 * self.m):
            raise ShapeError(
                f"expected {self.n ** (2 * self.m)} entries, got {e.size}")
        e = e.reshape((self.n,) * (2 * self.m))
        if not np.all(np.isfinite(e)):
            raise ValueError("hypercubic array has non-finite entries")
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    @classmethod
    def from_flat(cls, m, n, flat):
        return cls(m, n, np.asarray(flat, dtype=np.complex128))

    @classmethod
    def from_matrix(cls, a):
        """The 2-way array (M = 1) holding a square matrix."""
        a = as_square(a)
        return cls(1, a.shape[0], a)

    def flat(self):
        return self.entries.reshape(-1)

    def __getitem__(self, idx):
        return array_get(self, idx)


def array_get(a, idx):
    """Entry at the 1-based index ``(i_1..i_M, j_1..j_M)``.

    ``idx`` may be a flat 2M-tuple or a pair ``(i_tuple, j_tuple)``.
    """
    if len(idx) == 2 and not np.isscalar(idx[0]):
        idx = tuple(idx[0]) + tuple(idx[1])
    idx = tuple(idx)
    if len(idx) != 2 * a.m:
        raise IndexError(f"index needs {2 * a.m} components, got {len(idx)}")
    for v in idx:
        if not 1 <= v <= a.n:
            raise IndexError(f"index component {v} outside 1..{a.n}")
    return complex(a.entries[tuple(v - 1 for v in idx)])


def from_factored(factors):
    """Build the array sum_l prod_m A_m[i_m, l] * conj(A_m[j_m, l]).

    Parameters
    ----------
    factors : sequence of M array_like, each N x L

    Returns
    -------
    HypercubicArray
    """
    mats = [as_matrix(f, "factor") for f in factors]
    if not mats:
        raise ShapeError("need at least one factor matrix")
    shape = mats[0].shape
    for f in mats[1:]:
        if f.shape != shape:
            raise ShapeError(f"factor shapes differ: {shape} vs {f.shape}")
    m = len(mats)
    n = shape[0]
    letters = string.ascii_letters
    if 2 * m + 1 > len(letters):
        raise ShapeError(f"too many factors ({m})")
    ell = letters[-1]
    ins = [letters[k] + ell for k in range(m)]
    ins += [letters[m + k] + ell for k in range(m)]
    out = letters[: 2 * m]
    operands = mats + [f.conj() for f in mats]
    entries = np.einsum(",".join(ins) + "->" + out, *operands)
    return HypercubicArray(m, n, entries)
