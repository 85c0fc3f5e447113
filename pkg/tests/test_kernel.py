import itertools

import numpy as np
import pytest

from hyppp.errors import RankError, ShapeError
from hyppp.kernel import (
    GroundSpace,
    OrthonormalSystem,
    PointConfig,
    b_matrices,
    eval_kernel,
    gen_system,
    kernel_array,
    validate_orthonormal,
)
from hyppp.tensor import from_factored


def test_dft_orthonormal():
    sys = gen_system(1, (4,), 3, "dft")
    assert validate_orthonormal(sys)["max"] <= 1e-12


def test_identity_orthonormal_exact():
    sys = gen_system(2, (3, 4), 2, "identity")
    assert validate_orthonormal(sys)["max"] == 0.0


@pytest.mark.parametrize("seed", [0, 1, 42])
def test_haar_orthonormal(seed):
    sys = gen_system(3, (3, 4, 2), 2, "haar", seed)
    assert validate_orthonormal(sys)["max"] <= 1e-10


def test_identity_columns():
    sys = gen_system(1, (3,), 2, "identity")
    np.testing.assert_array_equal(sys.psi[0], np.eye(3)[:, :2])


def test_dft_two_point():
    sys = gen_system(1, (2,), 2, "dft")
    expect = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    np.testing.assert_allclose(sys.psi[0], expect, atol=1e-15)


def test_haar_deterministic_and_positive_r():
    a = gen_system(1, (4,), 4, "haar", 9).psi[0]
    b = gen_system(1, (4,), 4, "haar", 9).psi[0]
    np.testing.assert_array_equal(a, b)
    # QR of a unitary with positive real R diagonal reproduces itself
    q, r = np.linalg.qr(a)
    assert np.all(np.abs(np.abs(np.diagonal(r)) - 1) <= 1e-12)


def test_weighted_orthonormal():
    sys = gen_system(2, (3, 3), 2, "haar", 3, weights=[[0.5, 2.0, 1.0], [1.0, 3.0, 0.25]])
    assert validate_orthonormal(sys)["max"] <= 1e-10


def test_rank_too_large():
    with pytest.raises(RankError):
        gen_system(1, (3,), 5, "identity")


def test_bad_weights():
    with pytest.raises(ValueError):
        GroundSpace((2,), [[1.0, 0.0]])
    with pytest.raises(ShapeError):
        GroundSpace((2,), [[1.0, 1.0, 1.0]])


def test_corrupted_system_detected():
    space = GroundSpace.uniform((3,))
    sys = OrthonormalSystem(space, (np.ones((3, 2)),))
    assert validate_orthonormal(sys)["max"] > 0.5


def test_kernel_m1_identity():
    sys = gen_system(1, (4,), 2, "identity")
    for s, t in itertools.product(range(1, 5), repeat=2):
        expect = 1.0 if s == t and s <= 2 else 0.0
        assert eval_kernel(sys, (s,), (t,)) == expect


def test_kernel_hermitian():
    sys = gen_system(2, (3, 3), 2, "haar", 5)
    pts = sys.space.points()
    for y, z in itertools.product(pts, repeat=2):
        assert abs(eval_kernel(sys, y, z) - np.conj(eval_kernel(sys, z, y))) <= 1e-12


def test_kernel_triple_loop():
    sys = gen_system(2, (3, 3), 2, "haar", 11)
    for y, z in itertools.product(sys.space.points(), repeat=2):
        expect = 0j
        for l in range(sys.rank):
            term = 1 + 0j
            for m in range(2):
                term *= sys.psi[m][y[m] - 1, l] * np.conj(sys.psi[m][z[m] - 1, l])
            expect += term
        assert abs(eval_kernel(sys, y, z) - expect) <= 1e-12


def test_kernel_out_of_range():
    sys = gen_system(1, (3,), 2, "identity")
    with pytest.raises(IndexError):
        eval_kernel(sys, (4,), (1,))
    with pytest.raises(IndexError):
        eval_kernel(sys, (1, 1), (1,))


def test_b_matrices_identity():
    sys = gen_system(1, (3,), 2, "identity")
    b = b_matrices(sys, PointConfig([(1,), (3,), (2,)]))
    np.testing.assert_array_equal(b[0], [[1, 0], [0, 0], [0, 1]])


def test_b_matrices_single_point():
    sys = gen_system(2, (3, 4), 2, "haar", 2)
    b = b_matrices(sys, PointConfig([(2, 4)]))
    np.testing.assert_array_equal(b[0], sys.psi[0][1:2])
    np.testing.assert_array_equal(b[1], sys.psi[1][3:4])


def test_factored_b_equals_kernel():
    sys = gen_system(2, (3, 3), 3, "haar", 8)
    pts = PointConfig([(1, 2), (3, 3), (2, 1)])
    fast = from_factored(b_matrices(sys, pts)).entries
    slow = kernel_array(sys, pts).entries
    assert np.max(np.abs(fast - slow)) <= 1e-12


def _weighted_kernel_matrix(sys):
    pts = sys.space.points()
    k = np.array([[eval_kernel(sys, y, z) for z in pts] for y in pts])
    return k, sys.space.point_weights()


@pytest.mark.parametrize("m,sizes,rank,weights", [
    (1, (4,), 2, None),
    (2, (3, 3), 2, None),
    (2, (2, 3), 2, [[0.5, 1.5], [1.0, 2.0, 0.5]]),
])
def test_projection_laws(m, sizes, rank, weights):
    sys = gen_system(m, sizes, rank, "haar", 4, weights)
    k, w = _weighted_kernel_matrix(sys)
    assert abs(np.sum(w * np.diagonal(k)) - rank) <= 1e-9
    reproduced = k @ (w[:, None] * k)
    assert np.max(np.abs(reproduced - k)) <= 1e-9
    rng = np.random.default_rng(0)
    for _ in range(20):
        z = rng.standard_normal(len(w)) + 1j * rng.standard_normal(len(w))
        assert (z @ k.T @ z.conj()).real >= -1e-9


def test_point_config_helpers():
    pts = PointConfig([(1, 2), (2, 1)])
    assert pts.n == 2
    assert pts.permuted([1, 0]).coords == ((2, 1), (1, 2))
    assert pts.append((3, 3)).prefix(2) == pts
    with pytest.raises(ShapeError):
        PointConfig([(1, 2), (1,)])
