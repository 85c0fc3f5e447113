"""Self-checks of a process on a desk-scale ground space.

``run_invariants`` enumerates every configuration of up to L points and
reports the largest deviation for each identity the process must
satisfy. It backs the ``verify`` CLI subcommand.
"""
import itertools
import math

import numpy as np

from .errors import InvalidSignancy, TooLarge
from .hdpp import (
    all_configs,
    config_weights,
    density_batch,
    marginal_density_batch,
    reduce_factor,
)
from .kernel import PointConfig, b_matrices, eval_kernel, validate_orthonormal
from .multilinear import det, hyperdet_direct, hyperdet_factored
from .tensor import from_factored

VERIFY_GUARD = 10 ** 6


def normalization_deviation(spec):
    worst = 0.0
    for n in range(1, spec.rank + 1):
        configs = all_configs(spec.space, n)
        total = math.fsum(density_batch(spec, configs) * config_weights(spec.space, configs))
        worst = max(worst, abs(total - 1.0))
    return worst


def marginal_deviation(spec):
    """Max |sum_x p_N(prefix, x) w(x) - p_{N-1}(prefix)| over all prefixes and N."""
    n_pts = spec.space.n_points
    w = spec.space.point_weights()
    worst = 0.0
    lower = density_batch(spec, all_configs(spec.space, 1))
    for n in range(2, spec.rank + 1):
        upper = density_batch(spec, all_configs(spec.space, n))
        summed = (upper.reshape(-1, n_pts) * w[None, :]).sum(axis=1)
        worst = max(worst, float(np.max(np.abs(summed - lower))))
        lower = upper
    return worst


def joint_marginal_deviation(spec):
    """Consistency of the L-point marginals used by the sampler.

    Checks that summing the N-point marginal over its last point gives
    the (N-1)-point marginal, and that the L-point marginal is p_L.
    """
    n_pts = spec.space.n_points
    w = spec.space.point_weights()
    worst = 0.0
    lower = np.ones(1)
    for n in range(1, spec.rank + 1):
        upper = marginal_density_batch(spec, all_configs(spec.space, n))
        summed = (upper.reshape(-1, n_pts) * w[None, :]).sum(axis=1)
        worst = max(worst, float(np.max(np.abs(summed - lower))))
        lower = upper
    full = density_batch(spec, all_configs(spec.space, spec.rank))
    return max(worst, float(np.max(np.abs(lower - full))))


def reduction_deviation(spec):
    """Compare the reduced process with the last factor summed out.

    Returns None when the signancy set does not allow the reduction.
    """
    try:
        reduced = reduce_factor(spec)
    except InvalidSignancy:
        return None
    s_last = spec.space.sizes[-1]
    w_last = spec.space.weights[-1]
    q = reduced.space.n_points
    worst = 0.0
    for n in range(1, spec.rank + 1):
        full = density_batch(spec, all_configs(spec.space, n)).reshape((q, s_last) * n)
        for k in range(n):
            shape = [1] * (2 * n)
            shape[2 * k + 1] = s_last
            full = full * w_last.reshape(shape)
        summed = full.sum(axis=tuple(range(1, 2 * n, 2))).reshape(-1)
        direct = density_batch(reduced, all_configs(reduced.space, n))
        worst = max(worst, float(np.max(np.abs(summed - direct))))
    return worst


def exchangeability_deviation(spec, n_configs=20, seed=0):
    rng = np.random.default_rng(seed)
    points = spec.space.points()
    n = min(spec.rank, 3)
    worst = 0.0
    for _ in range(n_configs):
        cfg = [points[i] for i in rng.integers(len(points), size=n)]
        perms = np.array(list(itertools.permutations(range(n))))
        configs = np.array(cfg)[perms]
        vals = density_batch(spec, configs)
        worst = max(worst, float(vals.max() - vals.min()))
    return worst


def expansion_deviation(spec, n_configs=10, seed=0):
    """Direct vs factored hyperdeterminant on random configurations (N <= 3)."""
    rng = np.random.default_rng(seed)
    points = spec.space.points()
    worst = 0.0
    for _ in range(n_configs):
        n = int(rng.integers(1, min(spec.rank, 3) + 1))
        cfg = PointConfig([points[i] for i in rng.integers(len(points), size=n)])
        factors = b_matrices(spec.sys, cfg)
        fast = hyperdet_factored(factors, spec.signancy)
        slow = hyperdet_direct(from_factored(factors), spec.signancy)
        worst = max(worst, abs(slow - fast) / (1.0 + abs(fast)))
    return worst


def classical_deviation(spec):
    """M = 1 only: p_N * L(L-1)...(L-N+1) against det(K(x_i; x_j))."""
    if spec.m != 1:
        return None
    worst = 0.0
    for n in range(1, spec.rank + 1):
        configs = all_configs(spec.space, n)
        dens = density_batch(spec, configs)
        falling = math.perm(spec.rank, n)
        for cfg, d in zip(configs, dens):
            gram = [[eval_kernel(spec.sys, a, b) for b in cfg] for a in cfg]
            worst = max(worst, float(abs(d * falling - det(gram))))
    return worst


def run_invariants(spec, guard=VERIFY_GUARD):
    """Largest deviation for every checked identity, keyed by name."""
    size = spec.space.n_points ** spec.rank
    if size > guard:
        raise TooLarge(f"verification enumerates {size} configurations (guard {guard})")
    report = {
        "orthonormality": validate_orthonormal(spec.sys)["max"],
        "normalization": normalization_deviation(spec),
        "marginal": marginal_deviation(spec),
        "joint_marginal": joint_marginal_deviation(spec),
        "exchangeability": exchangeability_deviation(spec),
        "expansion": expansion_deviation(spec),
    }
    reduction = reduction_deviation(spec)
    if reduction is not None:
        report["factor_reduction"] = reduction
    classical = classical_deviation(spec)
    if classical is not None:
        report["classical_dpp"] = classical
    return report
