import numpy as np
import pytest

from hyppp import _backend, _fallback
from hyppp.multilinear import subsets
from hyppp.oracle import cofactor_det, naive_permanent

from conftest import random_complex

compiled = pytest.mark.skipif("compiled" not in _backend.available_backends(),
                              reason="compiled extension not built")


@pytest.mark.parametrize("n", range(1, 8))
def test_det_and_permanent_against_definitions(impl, rng, n):
    a = random_complex(rng, n, n)
    scale = 1.0 + abs(naive_permanent(a))
    assert abs(impl.permanent_ryser(a) - naive_permanent(a)) <= 1e-10 * scale
    d = cofactor_det(a)
    assert abs(impl.det_lu(a) - d) <= 1e-10 * (1.0 + abs(d))


def test_det_singular(impl):
    a = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]], dtype=complex)
    assert abs(impl.det_lu(a)) <= 1e-12


def test_det_needs_pivoting(impl):
    a = np.array([[0, 1], [1, 0]], dtype=complex)
    assert impl.det_lu(a) == -1


def test_factored_terms_shape_and_sign(impl, rng):
    f = random_complex(rng, 3, 2, 2, 4)
    combos = subsets(4, 2)
    terms = impl.factored_terms(f, np.array([1, 0], dtype=np.uint8), combos, 1)
    assert terms.shape == (3, 6)
    assert np.all(terms >= 0)


@compiled
def test_backends_agree_on_subset_terms(rng):
    from hyppp import _speedups

    f = random_complex(rng, 4, 3, 3, 5)
    combos = subsets(5, 3)
    for alt in ([1, 1, 1], [1, 0, 0], [0, 0, 0]):
        alt = np.array(alt, dtype=np.uint8)
        a = _fallback.factored_terms(f, alt, combos)
        b = _speedups.factored_terms(f, alt, combos, 1)
        np.testing.assert_allclose(a, b, rtol=1e-12)
    h = random_complex(rng, 2, 5, 5)
    for alt in ([1, 0], [0, 1]):
        alt = np.array(alt, dtype=np.uint8)
        a = _fallback.principal_terms(h, alt, combos)
        b = _speedups.principal_terms(h, alt, combos, 1)
        np.testing.assert_allclose(a, b, rtol=1e-12)


@compiled
def test_thread_count_does_not_change_sums(rng):
    from hyppp import _speedups

    f = random_complex(rng, 16, 2, 3, 6)
    combos = subsets(6, 3)
    alt = np.array([1, 0], dtype=np.uint8)
    one = _backend.pairwise_sum(_speedups.factored_terms(f, alt, combos, 1))
    four = _backend.pairwise_sum(_speedups.factored_terms(f, alt, combos, 4))
    np.testing.assert_array_equal(one, four)


def test_pairwise_sum_fixed_tree():
    x = np.array([1e16, 1.0, -1e16, 1.0, 3.0])
    # ((1e16 + 1) + (-1e16 + 1)) + (3 + 0)
    expect = ((1e16 + 1.0) + (-1e16 + 1.0)) + 3.0
    assert _backend.pairwise_sum(x) == expect
    assert _backend.pairwise_sum(np.zeros(0)) == 0


def test_pairwise_sum_axis():
    x = np.arange(12.0).reshape(3, 4)
    np.testing.assert_array_equal(_backend.pairwise_sum(x, axis=-1), x.sum(axis=1))
    np.testing.assert_array_equal(_backend.pairwise_sum(x, axis=0), x.sum(axis=0))


def test_thread_env(monkeypatch):
    monkeypatch.setenv("HYPPP_THREADS", "3")
    assert _backend.num_threads() == 3
    monkeypatch.setenv("HYPPP_THREADS", "junk")
    assert _backend.num_threads() >= 1
