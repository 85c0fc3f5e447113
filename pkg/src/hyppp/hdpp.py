"""Hyperdeterminantal point processes: densities, marginals and sampling.

The density of N points is

    p_N(x_1..x_N) = Det_K(B) / (C(L, N) * (N!)^M)

with respect to the N-fold product of the weighted counting measures,
where B is the kernel array of the points. It is evaluated through the
subset expansion on the per-factor matrices from ``b_matrices``.
Probabilities of individual configurations are density times the
product of point weights.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .errors import ArgumentError, ConditioningError, InvalidSignancy, RankError, ShapeError
from .kernel import OrthonormalSystem, PointConfig, b_matrices
from .multilinear import SignancySet, hyperdet_factored, hyperdet_factored_batch, subset_sums

CONDITIONING_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class ProcessSpec:
    """An orthonormal system together with its signancy set."""

    sys: OrthonormalSystem
    signancy: SignancySet

    def __post_init__(self):
        sig = self.signancy
        if not isinstance(sig, SignancySet):
            sig = SignancySet(self.sys.m, frozenset(sig))
            object.__setattr__(self, "signancy", sig)
        if sig.m != self.sys.m:
            raise InvalidSignancy(f"signancy set is for M={sig.m}, system has M={self.sys.m}")

    @property
    def m(self):
        return self.sys.m

    @property
    def rank(self):
        return self.sys.rank

    @property
    def space(self):
        return self.sys.space


@dataclass(frozen=True)
class CategoricalDist:
    """Finite distribution over points of the ground space."""

    support: tuple
    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        probs = np.array(self.probs, dtype=np.float64)
        if probs.shape != (len(self.support),):
            raise ShapeError("one probability per support point is required")
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-9:
            raise ValueError("probabilities must be nonnegative and sum to 1")
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)

    def prob(self, point):
        return float(self.probs[self.support.index(tuple(point))])


def normalizer(rank, n, m):
    """C(L, N) * (N!)^M."""
    return math.comb(rank, n) * math.factorial(n) ** m


def density(spec, pts):
    """Density p_N of the configuration ``pts`` (N >= 1).

    Returns 0 when N exceeds the rank L.
    """
    if not isinstance(pts, PointConfig):
        pts = PointConfig(pts)
    if pts.n < 1:
        raise ArgumentError("density needs at least one point")
    pts.check(spec.space)
    if pts.n > spec.rank:
        return 0.0
    value = hyperdet_factored(b_matrices(spec.sys, pts), spec.signancy)
    return value / normalizer(spec.rank, pts.n, spec.m)


def _stack_for(spec, configs):
    # configs: (B, N, M) 1-based -> (B, M, N, L)
    idx = np.asarray(configs, dtype=np.intp) - 1
    return np.stack([p[idx[:, :, m]] for m, p in enumerate(spec.sys.psi)], axis=1)


def density_batch(spec, configs):
    """Densities of many configurations of the same size at once.

    Parameters
    ----------
    configs : (B, N, M) array_like of 1-based coordinates
    """
    configs = np.asarray(configs, dtype=np.intp)
    if configs.ndim != 3 or configs.shape[2] != spec.m:
        raise ShapeError(f"expected a (B, N, {spec.m}) array of coordinates")
    nb, n, _ = configs.shape
    if n < 1:
        raise ArgumentError("density needs at least one point")
    if nb and (configs.min() < 1 or np.any(configs.max(axis=(0, 1)) > np.array(spec.space.sizes))):
        raise IndexError("coordinates out of range")
    if n > spec.rank:
        return np.zeros(nb)
    if nb == 0:
        return np.zeros(0)
    values = hyperdet_factored_batch(_stack_for(spec, configs), spec.signancy)
    return values / normalizer(spec.rank, n, spec.m)


def marginal_density_batch(spec, configs):
    """Density of the first N points of the L-point process, batched.

    p_L factorizes over factors: for each m the m-th coordinates of the L
    points carry density |det B_m|^2 / L! (alternating m) or
    |per B_m|^2 / L!. Summing out the last L - N points factor by factor
    gives

        prod_m (L - N)! / L! * sum_S |det or per B_m[:, S]|^2

    over N-subsets S chosen independently per factor. For M = 1 this is
    p_N; for M > 1 it generally is not.
    """
    configs = np.asarray(configs, dtype=np.intp)
    if configs.ndim != 3 or configs.shape[2] != spec.m:
        raise ShapeError(f"expected a (B, N, {spec.m}) array of coordinates")
    nb, n, _ = configs.shape
    if nb and n and (configs.min() < 1 or np.any(configs.max(axis=(0, 1)) > np.array(spec.space.sizes))):
        raise IndexError("coordinates out of range")
    if n > spec.rank:
        return np.zeros(nb)
    if n == 0:
        return np.ones(nb)
    stack = _stack_for(spec, configs)
    mask = spec.signancy.mask()
    scale = math.factorial(spec.rank - n) / math.factorial(spec.rank)
    out = np.ones(nb)
    for m in range(spec.m):
        out = out * (subset_sums(stack[:, m:m + 1], mask[m:m + 1]) * scale)
    return out


def marginal_density(spec, pts):
    """Density of the first N coordinates of the L-point process at ``pts``."""
    if not isinstance(pts, PointConfig):
        pts = PointConfig(pts)
    pts.check(spec.space)
    if pts.n == 0:
        return 1.0
    return float(marginal_density_batch(spec, np.array([pts.coords]))[0])


def _extensions(spec, prefix):
    # every prefix + x for x in the ground space, shape (|Sigma|, N + 1, M)
    points = np.array(spec.space.points(), dtype=np.intp)
    if prefix.n:
        head = np.broadcast_to(np.array(prefix.coords, dtype=np.intp),
                               (len(points), prefix.n, spec.m))
        return np.concatenate([head, points[:, None, :]], axis=1)
    return points[:, None, :]


def all_configs(space, n):
    """Every configuration of n points as an (|Sigma|^n, n, M) array."""
    points = np.array(space.points(), dtype=np.intp)
    grid = np.indices((len(points),) * n).reshape(n, -1).T
    return points[grid]


def config_weights(space, configs):
    """Product of point weights for each configuration in ``configs``."""
    configs = np.asarray(configs, dtype=np.intp)
    w = np.ones(configs.shape[0])
    for m, wm in enumerate(space.weights):
        w = w * np.prod(wm[configs[:, :, m] - 1], axis=1)
    return w


def normalization_check(spec, n):
    """Total mass of p_N over all configurations of N points."""
    if not 1 <= n <= spec.rank:
        raise ArgumentError(f"N must be in 1..{spec.rank}")
    configs = all_configs(spec.space, n)
    return float(math.fsum(density_batch(spec, configs) * config_weights(spec.space, configs)))


def marginalize_last_point(spec, pts):
    """Weighted sum of p_N over the last point, keeping the first N - 1 fixed."""
    if not isinstance(pts, PointConfig):
        pts = PointConfig(pts)
    if pts.n < 2:
        raise ArgumentError("marginalizing needs at least two points")
    pts.check(spec.space)
    configs = _extensions(spec, pts.prefix(pts.n - 1))
    values = density_batch(spec, configs) * spec.space.point_weights()
    return float(math.fsum(values))


def reduce_factor(spec):
    """Integrate out the last factor.

    The result uses psi_{m,l} for m < M and the signancy set with M
    removed; its densities are the marginals of ``spec`` on the first
    M - 1 coordinates of every point.
    """
    m = spec.m
    if m < 2:
        raise InvalidSignancy("cannot reduce a process with a single factor")
    members = spec.signancy.members - {m}
    if not members:
        raise InvalidSignancy(
            f"removing factor {m} from signancy {{{spec.signancy}}} leaves it empty")
    return ProcessSpec(spec.sys.drop_last_factor(), SignancySet(m - 1, frozenset(members)))


def integrate_last_factor(spec, pts):
    """Density of ``pts`` (points over M - 1 factors) with the M-th coordinate summed out."""
    if not isinstance(pts, PointConfig):
        pts = PointConfig(pts)
    n = pts.n
    sm = spec.space.sizes[-1]
    wm = spec.space.weights[-1]
    last = np.indices((sm,) * n).reshape(n, -1).T + 1
    head = np.broadcast_to(np.array(pts.coords, dtype=np.intp), (len(last), n, spec.m - 1))
    configs = np.concatenate([head, last[:, :, None]], axis=2)
    weights = np.prod(wm[last - 1], axis=1)
    return float(math.fsum(density_batch(spec, configs) * weights))


def conditional_next(spec, prefix):
    """Law of the next point of the L-point process given the first N (N < L).

    Candidate x gets probability proportional to
    ``marginal_density(prefix + x) * w(x)``; the normalizing constant is
    ``marginal_density(prefix)``. Multiplying these laws along a path of
    L points reproduces p_L times the weights.
    """
    if not isinstance(prefix, PointConfig):
        prefix = PointConfig(prefix)
    if prefix.n >= spec.rank:
        raise ArgumentError(f"prefix of {prefix.n} points leaves nothing to sample (L={spec.rank})")
    if prefix.n:
        base = marginal_density(spec, prefix)
        if not base > CONDITIONING_TOL:
            raise ConditioningError(f"prefix has density {base:.3g}")
    mass = marginal_density_batch(spec, _extensions(spec, prefix)) * spec.space.point_weights()
    total = mass.sum()
    if not total > 0:
        raise ConditioningError("conditional law has zero total mass")
    return CategoricalDist(tuple(spec.space.points()), mass / total)


class Sampler:
    """Sequential exact sampler with a per-prefix cache of conditional laws.

    Draws use ``numpy.random.Generator`` with the PCG64 bit generator; a
    draw takes one uniform per point and inverts the cumulative
    distribution of the conditional law in support order.
    """

    def __init__(self, spec):
        self.spec = spec
        self._cdf = {}

    def _law(self, prefix):
        cdf = self._cdf.get(prefix.coords)
        if cdf is None:
            dist = conditional_next(self.spec, prefix)
            cdf = (dist.support, np.cumsum(dist.probs))
            self._cdf[prefix.coords] = cdf
        return cdf

    def draw(self, n_points, rng):
        if n_points < 0:
            raise ArgumentError("n_points must be >= 0")
        if n_points > self.spec.rank:
            raise RankError(f"cannot draw {n_points} points with L={self.spec.rank}")
        pts = PointConfig(())
        for _ in range(n_points):
            support, cdf = self._law(pts)
            u = rng.random() * cdf[-1]
            k = min(int(np.searchsorted(cdf, u, side="right")), len(support) - 1)
            pts = pts.append(support[k])
        return pts

    def draw_many(self, n_points, count, seed):
        rng = np.random.default_rng(seed)
        return [self.draw(n_points, rng) for _ in range(count)]


def sample(spec, n_points, seed):
    """One exact draw of ``n_points`` points, reproducible given ``seed``."""
    return Sampler(spec).draw(n_points, np.random.default_rng(seed))


def sample_many(spec, n_points, count, seed):
    """``count`` independent draws from one seeded stream."""
    return Sampler(spec).draw_many(n_points, count, seed)
