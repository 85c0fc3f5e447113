import itertools
import math

import numpy as np
import pytest

from hyppp.errors import ArgumentError, ConditioningError, InvalidSignancy, RankError
from hyppp.hdpp import (
    ProcessSpec,
    conditional_next,
    density,
    density_batch,
    integrate_last_factor,
    marginal_density,
    marginalize_last_point,
    normalization_check,
    reduce_factor,
    sample,
    sample_many,
)
from hyppp.kernel import GroundSpace, OrthonormalSystem, PointConfig, eval_kernel, gen_system
from hyppp.multilinear import det
from hyppp.oracle import direct_density, enumerate_joint


def test_density_matches_direct_route(spec_m2):
    for cfg in itertools.product(spec_m2.space.points(), repeat=2):
        pts = PointConfig(cfg)
        assert abs(density(spec_m2, pts) - direct_density(spec_m2, pts)) <= 1e-12


def test_m1_classical_marginal(spec_m1):
    rank = spec_m1.rank
    for n in (1, 2, 3):
        for cfg in itertools.product(spec_m1.space.points(), repeat=n):
            gram = [[eval_kernel(spec_m1.sys, a, b) for b in cfg] for a in cfg]
            lhs = density(spec_m1, cfg) * math.perm(rank, n)
            assert abs(lhs - det(gram)) <= 1e-9 * max(1.0, abs(det(gram)))


def test_one_point_density(spec_m2):
    for x in spec_m2.space.points():
        k = eval_kernel(spec_m2.sys, x, x)
        assert density(spec_m2, [x]) == pytest.approx(k.real / spec_m2.rank, abs=1e-15)


def test_repeated_point_fully_alternating():
    spec = ProcessSpec(gen_system(2, (3, 3), 3, "haar", 1), {1, 2})
    assert density(spec, [(1, 2), (1, 2)]) <= 1e-12
    assert density(spec, [(1, 2), (3, 1), (1, 2)]) <= 1e-12


def test_density_beyond_rank_is_zero(spec_m2):
    assert density(spec_m2, [(1, 1), (2, 2), (3, 3)]) == 0.0


def test_density_needs_points(spec_m2):
    with pytest.raises(ArgumentError):
        density(spec_m2, [])


@pytest.mark.parametrize("kind", ["haar", "dft", "identity"])
@pytest.mark.parametrize("members", [{1}, {2}, {1, 2}])
def test_normalization(kind, members):
    spec = ProcessSpec(gen_system(2, (3, 3), 2, kind, 42), members)
    for n in (1, 2):
        assert abs(normalization_check(spec, n) - 1) <= 1e-9


def test_normalization_weighted():
    sys = gen_system(2, (2, 3), 2, "haar", 5, [[0.3, 1.7], [2.0, 0.5, 1.0]])
    spec = ProcessSpec(sys, {2})
    for n in (1, 2):
        assert abs(normalization_check(spec, n) - 1) <= 1e-9


def test_exchangeability():
    spec = ProcessSpec(gen_system(2, (3, 3), 3, "haar", 3), {1})
    rng = np.random.default_rng(1)
    pts = spec.space.points()
    for _ in range(10):
        cfg = [pts[i] for i in rng.integers(len(pts), size=3)]
        base = density(spec, cfg)
        for order in itertools.permutations(range(3)):
            assert abs(density(spec, [cfg[i] for i in order]) - base) <= 1e-12


def test_marginal_consistency_m1(spec_m1):
    for cfg in itertools.product(spec_m1.space.points(), repeat=2):
        assert abs(marginalize_last_point(spec_m1, cfg) - density(spec_m1, cfg[:1])) <= 1e-9


def test_p_n_is_not_the_marginal_of_p_l_for_two_factors():
    # identity system: p_1((1,2)) = 0, yet p_2 puts mass 1/4 on ((1,2),(2,1))
    spec = ProcessSpec(gen_system(2, (3, 3), 2, "identity"), {1})
    assert density(spec, [(1, 2)]) == 0.0
    assert density(spec, [(1, 2), (2, 1)]) == pytest.approx(0.25)
    assert marginalize_last_point(spec, [(1, 2), (1, 1)]) == pytest.approx(0.25)
    assert marginal_density(spec, [(1, 2)]) == pytest.approx(0.25)


def test_marginalize_needs_two_points(spec_m2):
    with pytest.raises(ArgumentError):
        marginalize_last_point(spec_m2, [(1, 1)])


def test_marginal_density_chain():
    spec = ProcessSpec(gen_system(2, (3, 2), 2, "haar", 13), {1, 2})
    table = enumerate_joint(spec)
    w = spec.space
    for n in (1, 2):
        for prefix, mass in table.marginal(n).items():
            weight = math.prod(w.weight(p) for p in prefix)
            assert abs(marginal_density(spec, prefix) * weight - mass) <= 1e-12


@pytest.mark.parametrize("members", [{1, 2}, {1}])
def test_reduce_factor(members):
    spec = ProcessSpec(gen_system(2, (3, 3), 2, "haar", 21), members)
    reduced = reduce_factor(spec)
    assert reduced.m == 1 and reduced.signancy.members == {1}
    for n in (1, 2):
        for cfg in itertools.product(reduced.space.points(), repeat=n):
            assert abs(density(reduced, cfg) - integrate_last_factor(spec, cfg)) <= 1e-9


def test_reduce_factor_weighted_three_factors():
    sys = gen_system(3, (2, 2, 3), 2, "haar", 6, [[1, 2], [0.5, 0.5], [1, 3, 0.2]])
    spec = ProcessSpec(sys, {2, 3})
    reduced = reduce_factor(spec)
    assert reduced.signancy.members == {2}
    for cfg in itertools.product(reduced.space.points(), repeat=2):
        assert abs(density(reduced, cfg) - integrate_last_factor(spec, cfg)) <= 1e-9


def test_reduce_factor_empty():
    spec = ProcessSpec(gen_system(2, (3, 3), 2, "haar", 1), {2})
    with pytest.raises(InvalidSignancy):
        reduce_factor(spec)
    with pytest.raises(InvalidSignancy):
        reduce_factor(ProcessSpec(gen_system(1, (3,), 2, "haar", 1), {1}))


def test_conditional_empty_prefix(spec_m1):
    dist = conditional_next(spec_m1, [])
    for x in spec_m1.space.points():
        assert dist.prob(x) == pytest.approx(density(spec_m1, [x]) * spec_m1.space.weight(x))
    assert abs(dist.probs.sum() - 1) <= 1e-12


def test_conditional_zero_prefix():
    spec = ProcessSpec(gen_system(1, (3,), 2, "identity"), {1})
    with pytest.raises(ConditioningError):
        conditional_next(spec, [(3,)])
    with pytest.raises(ArgumentError):
        conditional_next(spec, [(1,), (2,)])


@pytest.mark.parametrize("members", [{1}, {2}, {1, 2}])
def test_chain_reconstructs_joint(members):
    spec = ProcessSpec(gen_system(2, (2, 3), 2, "haar", 17), members)
    table = enumerate_joint(spec)
    for cfg, mass in zip(table.configs, table.masses):
        prob, prefix = 1.0, PointConfig(())
        for x in cfg:
            prob *= conditional_next(spec, prefix).prob(x)
            prefix = prefix.append(x)
        assert abs(prob - mass) <= 1e-9


def test_sample_deterministic(spec_m2):
    assert sample(spec_m2, 2, 5) == sample(spec_m2, 2, 5)
    assert sample_many(spec_m2, 2, 20, 9) == sample_many(spec_m2, 2, 20, 9)


def test_sample_full_basis_distinct():
    spec = ProcessSpec(gen_system(1, (3,), 3, "identity"), {1})
    for draw in sample_many(spec, 3, 200, 0):
        assert sorted(draw.coords) == [(1,), (2,), (3,)]


def test_sample_too_many(spec_m2):
    with pytest.raises(RankError):
        sample(spec_m2, 3, 0)


def test_corrupted_spec_conditioning():
    space = GroundSpace.uniform((3,))
    psi = np.zeros((3, 2), dtype=complex)
    spec = ProcessSpec(OrthonormalSystem(space, (psi,)), {1})
    with pytest.raises(ConditioningError):
        conditional_next(spec, [])


def test_density_batch_matches_scalar(spec_m2):
    cfgs = list(itertools.product(spec_m2.space.points(), repeat=2))
    batch = density_batch(spec_m2, np.array(cfgs))
    single = [density(spec_m2, c) for c in cfgs]
    np.testing.assert_allclose(batch, single, atol=1e-15)
