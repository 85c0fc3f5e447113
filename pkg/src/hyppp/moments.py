"""Factorial moments of point counts in product sets.

Let C = C_1 x ... x C_M and let J_C count the L points falling in C.
Write H_m for the weighted Gram matrix of psi_{m,.} restricted to C_m,
and e_m(N) for the sum of the N x N principal minors of H_m (m in K)
or principal permanents (m not in K). Because coordinate m of the L
points is an independent determinantal or permanental vector,

    E[J_C (J_C - 1) ... (J_C - N + 1)] = L!/(L-N)! * prod_m e_m(N) / C(L, N).

For M = 1 this is N! * e_1(N), and the count is a sum of independent
Bernoulli variables with the eigenvalues of H_1 as success
probabilities. The count law follows from the moments by finite
inversion.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from . import _backend
from .errors import ArgumentError, InconsistentMoments, ShapeError, SpectrumError
from .multilinear import subsets

IMAG_TOL = 1e-9
SPECTRUM_TOL = 1e-9
MASS_TOL = 1e-6


@dataclass(frozen=True)
class ProductSet:
    """Per-factor subsets C_m of {1..S_m} (1-based; empty allowed)."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(frozenset(int(x) for x in part) for part in self.parts)
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text):
        """Parse ``"1,2;3"``: factors separated by ';', points by ','."""
        return cls(tuple(
            [int(tok) for tok in chunk.split(",") if tok.strip()]
            for chunk in str(text).split(";")))

    @classmethod
    def full(cls, space):
        return cls(tuple(range(1, s + 1) for s in space.sizes))

    def check(self, space):
        if len(self.parts) != space.m:
            raise ShapeError(f"product set has {len(self.parts)} factors, space has {space.m}")
        for m, part in enumerate(self.parts):
            for x in part:
                if not 1 <= x <= space.sizes[m]:
                    raise IndexError(f"point {x} of factor {m + 1} outside 1..{space.sizes[m]}")

    def contains(self, point):
        return all(x in part for x, part in zip(point, self.parts))

    def __str__(self):
        return ";".join(",".join(str(x) for x in sorted(p)) for p in self.parts)


@dataclass(frozen=True)
class CountPMF:
    """Probability mass function of a count on {0, ..., L}."""

    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        probs = np.array(self.probs, dtype=np.float64)
        if probs.ndim != 1 or probs.size == 0:
            raise ShapeError("a count PMF needs a nonempty 1-D probability vector")
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)

    def __len__(self):
        return len(self.probs)

    def __getitem__(self, j):
        return float(self.probs[j])

    def factorial_moments(self):
        """E[(J)_N] for N = 1..L."""
        j = np.arange(len(self.probs))
        out = []
        for n in range(1, len(self.probs)):
            falling = np.array([math.perm(int(v), n) for v in j], dtype=np.float64)
            out.append(math.fsum(falling * self.probs))
        return out

    def mean(self):
        return float(math.fsum(np.arange(len(self.probs)) * self.probs))


def h_matrix(sys, m, part):
    """H_m[l, l'] = sum over y in C_m of w_m(y) psi_{m,l}(y) conj(psi_{m,l'}(y)).

    ``m`` is the 1-based factor index and ``part`` a collection of 1-based
    points of that factor.
    """
    if not 1 <= m <= sys.m:
        raise IndexError(f"factor index {m} outside 1..{sys.m}")
    idx = np.array(sorted(part), dtype=np.intp) - 1
    if idx.size and (idx.min() < 0 or idx.max() >= sys.space.sizes[m - 1]):
        raise IndexError(f"subset {sorted(part)} leaves factor {m}")
    psi = sys.psi[m - 1][idx]
    w = sys.space.weights[m - 1][idx]
    return psi.T @ (w[:, None] * psi.conj())


def h_matrices(sys, cset):
    cset.check(sys.space)
    return np.stack([h_matrix(sys, m + 1, part) for m, part in enumerate(cset.parts)])


def _principal_sum(h, alternating, n):
    combos = subsets(h.shape[-1], n)
    terms = _backend.principal_terms(h, np.asarray(alternating, dtype=np.uint8), combos)
    return complex(_backend.pairwise_sum(terms))


def _check_order(spec, n):
    if not 1 <= n <= spec.rank:
        raise ArgumentError(f"N must be in 1..{spec.rank}, got {n}")


def _real(value, what):
    if abs(value.imag) > IMAG_TOL * max(1.0, abs(value.real)):
        raise ArithmeticError(f"{what} has imaginary part {value.imag:.3g}")
    return value.real


def factorial_moment_complex(spec, cset, n):
    """The factorial moment before the round-off imaginary part is dropped."""
    _check_order(spec, n)
    h = h_matrices(spec.sys, cset)
    mask = spec.signancy.mask()
    value = complex(math.perm(spec.rank, n))
    for m in range(spec.m):
        value *= _principal_sum(h[m:m + 1], mask[m:m + 1], n) / math.comb(spec.rank, n)
    return value


def factorial_moment(spec, cset, n):
    """E[J_C (J_C - 1) ... (J_C - n + 1)] for the L-point process."""
    return _real(factorial_moment_complex(spec, cset, n), "factorial moment")


def factorial_moments(spec, cset, max_n=None):
    max_n = spec.rank if max_n is None else max_n
    return [factorial_moment(spec, cset, n) for n in range(1, max_n + 1)]


def common_subset_moment(spec, cset, n):
    """N! * sum_S prod_{k in K} det(H_k[S, S]) * prod_{k not in K} per(H_k[S, S]).

    Equals L!/(L-N)! times the p_N-probability that all N points lie in
    C. It matches ``factorial_moment`` when M = 1 but not in general.
    """
    _check_order(spec, n)
    h = h_matrices(spec.sys, cset)
    value = math.factorial(n) * _principal_sum(h, spec.signancy.mask(), n)
    return _real(value, "common-subset moment")


def pmf_from_factorial_moments(moments):
    """Invert factorial moments m_1..m_L of a {0..L}-valued count.

    P(J = j) = sum_{k >= j} (-1)^(k - j) m_k / (j! (k - j)!), with m_0 = 1.
    """
    m = [1.0] + [float(v) for v in moments]
    top = len(m) - 1
    probs = np.empty(top + 1)
    for j in range(top + 1):
        terms = [(-1) ** (k - j) * m[k] / (math.factorial(j) * math.factorial(k - j))
                 for k in range(j, top + 1)]
        probs[j] = math.fsum(terms)
    total = math.fsum(probs)
    if abs(total - 1.0) > MASS_TOL or np.any(probs < -MASS_TOL):
        raise InconsistentMoments(
            f"inverted masses sum to {total:.6g} (min {probs.min():.3g})")
    return CountPMF(np.clip(probs, 0.0, None))


def bernoulli_sum_pmf(p):
    """PMF of a sum of independent Bernoulli(p_i) by sequential convolution."""
    pmf = np.array([1.0])
    for q in p:
        pmf = np.convolve(pmf, [1.0 - q, q])
    return pmf


def pmf_bernoulli_sum_m1(h):
    """Count PMF in the M = 1 case from the eigenvalues of H_1."""
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ShapeError(f"H must be square, got shape {h.shape}")
    lam = np.linalg.eigvalsh((h + h.conj().T) / 2)
    if lam.size and (lam.min() < -SPECTRUM_TOL or lam.max() > 1 + SPECTRUM_TOL):
        raise SpectrumError(f"eigenvalues {lam} leave [0, 1]")
    return CountPMF(np.clip(bernoulli_sum_pmf(np.clip(lam, 0.0, 1.0)), 0.0, None))


def count_pmf(spec, cset):
    """Count PMF of J_C via the factorial moments."""
    return pmf_from_factorial_moments(factorial_moments(spec, cset))
