"""Determinants, permanents and Cayley's first hyperdeterminant.

Two routes to the hyperdeterminant are provided. ``hyperdet_direct``
sums over every tuple of permutations and is only meant as a reference
for tiny arrays. ``hyperdet_factored`` applies to arrays built by
``from_factored`` and reduces the sum to column subsets of the factors,
each contributing a product of squared determinants and permanents.
"""
from dataclasses import dataclass
from functools import lru_cache
import itertools
import math

import numpy as np

from . import _backend
from .errors import InvalidSignancy, ShapeError, TooLarge
from .tensor import HypercubicArray, as_matrix, as_square

CLAMP_TOL = 1e-12
DIRECT_GUARD = 5 * 10 ** 7


@dataclass(frozen=True)
class SignancySet:
    """Nonempty set of 1-based factor indices carrying the alternating sign."""

    m: int
    members: frozenset

    def __post_init__(self):
        members = frozenset(int(k) for k in self.members)
        object.__setattr__(self, "members", members)
        if self.m < 1:
            raise InvalidSignancy(f"factor count must be >= 1, got {self.m}")
        if not members:
            raise InvalidSignancy("signancy set must be nonempty")
        bad = sorted(k for k in members if not 1 <= k <= self.m)
        if bad:
            raise InvalidSignancy(f"signancy members {bad} outside 1..{self.m}")

    @classmethod
    def parse(cls, text, m):
        """Parse a comma-separated list such as ``"1,3"``."""
        try:
            members = [int(tok) for tok in str(text).split(",") if tok.strip()]
        except ValueError as exc:
            raise InvalidSignancy(f"cannot parse signancy {text!r}") from exc
        return cls(m, frozenset(members))

    def mask(self):
        """Boolean array over factors 1..M, True where alternating."""
        return np.array([k + 1 in self.members for k in range(self.m)], dtype=bool)

    def __str__(self):
        return ",".join(str(k) for k in sorted(self.members))


def det(a):
    """Determinant by LU factorization with partial pivoting."""
    return _backend.det_lu(as_square(a))


def permanent(a):
    """Permanent by Ryser's formula with Gray-code subset order."""
    return _backend.permanent_ryser(as_square(a))


@lru_cache(maxsize=None)
def permutations_with_sign(n):
    """All permutations of range(n) as an (n!, n) array, and their signs."""
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    signs = np.empty(len(perms), dtype=np.int8)
    for r, p in enumerate(perms):
        # parity from cycle decomposition
        seen = [False] * n
        parity = 0
        for s in range(n):
            if not seen[s]:
                length = 0
                t = s
                while not seen[t]:
                    seen[t] = True
                    t = p[t]
                    length += 1
                parity += length - 1
        signs[r] = -1 if parity % 2 else 1
    perms.flags.writeable = False
    signs.flags.writeable = False
    return perms, signs


@lru_cache(maxsize=None)
def subsets(n_items, size):
    """Sorted size-``size`` subsets of range(n_items), one per row."""
    rows = list(itertools.combinations(range(n_items), size))
    out = np.array(rows, dtype=np.intp).reshape(len(rows), size)
    out.flags.writeable = False
    return out


def _check_signancy(signancy, m):
    if not isinstance(signancy, SignancySet):
        signancy = SignancySet(m, frozenset(signancy))
    if signancy.m != m:
        raise ShapeError(f"signancy set is for M={signancy.m}, array has M={m}")
    return signancy


def hyperdet_direct(a, signancy):
    """Hyperdeterminant by summing over all 2M-tuples of permutations.

    Cost grows like (N!)^(2M); a guard raises ``TooLarge`` beyond
    ``DIRECT_GUARD`` terms.
    """
    if not isinstance(a, HypercubicArray):
        raise ShapeError("hyperdet_direct expects a HypercubicArray")
    signancy = _check_signancy(signancy, a.m)
    m, n = a.m, a.n
    perms, signs = permutations_with_sign(n)
    n_perm = len(perms)
    if n_perm ** (2 * m) > DIRECT_GUARD:
        raise TooLarge(f"direct hyperdeterminant needs {n_perm ** (2 * m)} terms")
    alt = signancy.mask()
    flat = a.flat()
    # Stride of each of the 2M axes in the flat storage order.
    strides = n ** np.arange(2 * m - 1, -1, -1)
    # Offsets contributed by sigma_1..sigma_M, then tau_1..tau_M, per point n.
    grids = []
    weights = []
    for axis in range(2 * m):
        grids.append(perms * strides[axis])
        weights.append(signs if alt[axis % m] else np.ones_like(signs))

    # Split into an outer block (sigmas) and inner block (taus) to bound memory.
    def block(axes):
        off = np.zeros((1, n), dtype=np.intp)
        sgn = np.ones(1, dtype=np.int64)
        for axis in axes:
            off = (off[:, None, :] + grids[axis][None, :, :]).reshape(-1, n)
            sgn = (sgn[:, None] * weights[axis][None, :]).reshape(-1)
        return off, sgn

    outer_off, outer_sgn = block(range(m))
    inner_off, inner_sgn = block(range(m, 2 * m))
    total = 0j
    for o_off, o_sgn in zip(outer_off, outer_sgn):
        vals = flat[inner_off + o_off[None, :]]
        prods = np.prod(vals, axis=1)
        total += o_sgn * np.dot(inner_sgn, prods)
    return complex(total / math.factorial(n))


def factored_shape(factors):
    mats = [as_matrix(f, "factor") for f in factors]
    if not mats:
        raise ShapeError("need at least one factor matrix")
    shape = mats[0].shape
    for f in mats[1:]:
        if f.shape != shape:
            raise ShapeError(f"factor shapes differ: {shape} vs {f.shape}")
    return mats, shape


def clamp_nonnegative(value, tol=CLAMP_TOL):
    """Clamp round-off in (-tol, 0) to zero; larger negatives are errors."""
    if value < 0:
        if value < -tol:
            raise ArithmeticError(f"expected a nonnegative sum, got {value}")
        return 0.0
    return float(value)


def subset_sums(stack, alternating):
    """Per-subset expansion sums for a stack of factor matrices.

    For every batch item, sums over the N-subsets S of the L columns the
    product over factors of |det(A_m[:, S])|^2 where ``alternating[m]``
    and |per(A_m[:, S])|^2 otherwise. ``alternating`` may be all False.

    Parameters
    ----------
    stack : (B, M, N, L) array_like
    alternating : (M,) array_like of bool

    Returns
    -------
    (B,) ndarray of float64
    """
    stack = np.ascontiguousarray(stack, dtype=np.complex128)
    if stack.ndim != 4:
        raise ShapeError(f"expected a (B, M, N, L) stack, got shape {stack.shape}")
    nb, m, n, ell = stack.shape
    alternating = np.asarray(alternating, dtype=bool)
    if alternating.shape != (m,):
        raise ShapeError(f"need {m} alternating flags, got shape {alternating.shape}")
    if ell < n:
        return np.zeros(nb)
    combos = subsets(ell, n)
    terms = _backend.factored_terms(stack, alternating.astype(np.uint8), combos)
    sums = np.atleast_1d(_backend.pairwise_sum(terms, axis=-1))
    if np.any(sums < -CLAMP_TOL):
        raise ArithmeticError("negative subset sum beyond round-off")
    return np.maximum(sums, 0.0)


def hyperdet_factored_batch(stack, signancy):
    """Vectorized ``hyperdet_factored`` over a leading batch axis of (M, N, L) stacks."""
    stack = np.asarray(stack)
    if stack.ndim != 4:
        raise ShapeError(f"expected a (B, M, N, L) stack, got shape {stack.shape}")
    signancy = _check_signancy(signancy, stack.shape[1])
    return subset_sums(stack, signancy.mask())


def hyperdet_factored(factors, signancy):
    """Hyperdeterminant of ``from_factored(factors)`` by the subset expansion.

    Sums, over all N-subsets of the L columns, the product of |det|^2 of
    the selected columns for alternating factors and |per|^2 for the
    others. Returns exactly 0 when L < N.
    """
    mats, (n, ell) = factored_shape(factors)
    signancy = _check_signancy(signancy, len(mats))
    if ell < n:
        return 0.0
    stack = np.stack(mats)[None]
    return clamp_nonnegative(float(hyperdet_factored_batch(stack, signancy)[0]))
