"""Brute-force references for the fast paths.

Nothing here uses the subset expansion or the compiled kernels:
densities come from the direct permutation sum over the kernel array,
and determinants / permanents from their textbook definitions.
"""
from dataclasses import dataclass, field
import itertools
import math

import numpy as np

from .errors import TooLarge
from .kernel import PointConfig, kernel_array
from .moments import CountPMF
from .multilinear import hyperdet_direct, permutations_with_sign
from .tensor import as_square

JOINT_GUARD = 10 ** 7
SIDE_GUARD = 8


def naive_permanent(a):
    """Permanent as the plain sum over all n! permutations."""
    a = as_square(a)
    n = a.shape[0]
    if n > SIDE_GUARD:
        raise TooLarge(f"naive permanent limited to side {SIDE_GUARD}")
    perms, _ = permutations_with_sign(n)
    return complex(np.sum(np.prod(a[np.arange(n), perms], axis=1)))


def cofactor_det(a):
    """Determinant by recursive Laplace expansion along the first row."""
    a = as_square(a)
    if a.shape[0] > SIDE_GUARD:
        raise TooLarge(f"cofactor determinant limited to side {SIDE_GUARD}")

    def rec(m):
        n = m.shape[0]
        if n == 1:
            return m[0, 0]
        total = 0j
        for j in range(n):
            minor = np.delete(m[1:], j, axis=1)
            total += (-1) ** j * m[0, j] * rec(minor)
        return total

    return complex(rec(a))


def direct_density(spec, pts):
    """p_N from the direct hyperdeterminant of the kernel array."""
    if not isinstance(pts, PointConfig):
        pts = PointConfig(pts)
    n = pts.n
    if n > spec.rank:
        return 0.0
    value = hyperdet_direct(kernel_array(spec.sys, pts), spec.signancy)
    return value.real / (math.comb(spec.rank, n) * math.factorial(n) ** spec.m)


@dataclass(frozen=True, eq=False)
class JointTable:
    """Mass (density times weights) of every configuration of L points."""

    configs: tuple
    masses: np.ndarray = field(repr=False)

    def total(self):
        return math.fsum(self.masses)

    def as_dict(self):
        return dict(zip(self.configs, self.masses.tolist()))

    def marginal(self, n):
        """Mass of each n-point prefix, summed over the remaining L - n points."""
        out = {}
        for cfg, mass in zip(self.configs, self.masses):
            key = cfg[:n]
            out.setdefault(key, []).append(mass)
        return {k: math.fsum(v) for k, v in out.items()}


def enumerate_joint(spec, guard=JOINT_GUARD):
    """Exhaustive table of p_L times weights over all L-point configurations."""
    points = spec.space.points()
    size = len(points) ** spec.rank
    if size > guard:
        raise TooLarge(f"joint table would have {size} entries (guard {guard})")
    configs = []
    masses = np.empty(size)
    for r, cfg in enumerate(itertools.product(points, repeat=spec.rank)):
        weight = math.prod(spec.space.weight(pt) for pt in cfg)
        masses[r] = direct_density(spec, PointConfig(cfg)) * weight
        configs.append(cfg)
    return JointTable(tuple(configs), masses)


def exact_count_pmf(spec, cset, table=None):
    """Law of the number of points falling in ``cset``, by enumeration."""
    cset.check(spec.space)
    if table is None:
        table = enumerate_joint(spec)
    buckets = [[] for _ in range(spec.rank + 1)]
    for cfg, mass in zip(table.configs, table.masses):
        buckets[sum(cset.contains(pt) for pt in cfg)].append(mass)
    return CountPMF(np.array([math.fsum(b) for b in buckets]))
