import cmath
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtoqw import linalg as la


def weyl_by_loop(n, u, v):
    """Scalar transcription of the Weyl definition, kept independent of the vectorised code."""
    m = [[0j] * n for _ in range(n)]
    for k in range(n):
        m[k][(k + v) % n] = cmath.exp(2j * cmath.pi * k * u / n)
    return np.array(m)


def test_weyl_identity():
    for n in range(1, 6):
        np.testing.assert_array_equal(la.weyl(n, 0, 0), np.eye(n))


def test_weyl_qubit_paulis():
    np.testing.assert_allclose(la.weyl(2, 0, 1), [[0, 1], [1, 0]], atol=1e-15)
    np.testing.assert_allclose(la.weyl(2, 1, 0), [[1, 0], [0, -1]], atol=1e-15)
    # U_(1,1) = i sigma_y
    np.testing.assert_allclose(la.weyl(2, 1, 1), [[0, 1], [-1, 0]], atol=1e-15)


def test_weyl_3_1_1_entries():
    w = la.weyl(3, 1, 1)
    expected = np.zeros((3, 3), dtype=complex)
    expected[0, 1] = 1
    expected[1, 2] = cmath.exp(2j * cmath.pi / 3)
    expected[2, 0] = cmath.exp(4j * cmath.pi / 3)
    np.testing.assert_allclose(w, expected, atol=1e-15)


@pytest.mark.parametrize("n", range(1, 9))
def test_weyl_matches_loop_and_is_unitary(n):
    for u, v in itertools.product(range(n), repeat=2):
        w = la.weyl(n, u, v)
        np.testing.assert_allclose(w, weyl_by_loop(n, u, v), atol=1e-13)
        assert la.is_unitary(w, 1e-12)


def test_weyl_mod_reduction_and_errors():
    np.testing.assert_array_equal(la.weyl(3, 4, 5), la.weyl(3, 1, 2))
    with pytest.raises(ValueError):
        la.weyl(0, 0, 0)


@pytest.mark.parametrize("n", range(1, 5))
def test_weyl_composition_is_phase_times_weyl(n):
    for u, v, u2, v2 in itertools.product(range(n), repeat=4):
        prod = la.weyl(n, u, v) @ la.weyl(n, u2, v2)
        target = la.weyl(n, u + u2, v + v2)
        # find the phase from any nonzero entry, then compare everywhere
        i, j = np.argwhere(np.abs(target) > 0.5)[0]
        phase = prod[i, j] / target[i, j]
        assert abs(abs(phase) - 1) < 1e-12
        np.testing.assert_allclose(prod, phase * target, atol=1e-12)


def test_plumbing():
    assert la.trace(la.identity(5)) == 5
    w = la.weyl(3, 1, 1)
    np.testing.assert_allclose(la.matmul(la.adjoint(w), w), np.eye(3), atol=1e-15)
    np.testing.assert_array_equal(la.kron(np.eye(2), np.eye(3)), np.eye(6))
    assert la.kron(np.ones((2, 3)), np.ones((4, 5))).shape == (8, 15)
    np.testing.assert_array_equal(la.add(np.eye(2), la.scale(np.eye(2), 2)), 3 * np.eye(2))
    with pytest.raises(la.DimensionError):
        la.matmul(np.ones((2, 3)), np.ones((2, 3)))
    with pytest.raises(la.DimensionError):
        la.add(np.eye(2), np.eye(3))
    with pytest.raises(la.DimensionError):
        la.trace(np.ones((2, 3)))


def test_predicates():
    assert la.is_hermitian(np.array([[1, 1j], [-1j, 2]]))
    assert not la.is_hermitian(np.array([[1, 1j], [1j, 2]]))
    assert la.is_psd(np.ones((3, 3)) / 3)
    assert not la.is_psd(np.diag([1.0, -0.1]))
    assert not la.is_unitary(2 * np.eye(2))


def test_hermitian_eig_examples():
    w, _ = la.hermitian_eig(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_allclose(w, [3, 2, 1])
    w, _ = la.hermitian_eig(np.eye(4))
    np.testing.assert_allclose(w, np.ones(4))
    j5 = np.ones((5, 5)) / 5
    np.testing.assert_allclose(j5 @ j5, j5, atol=1e-15)  # rank-1 projector
    w, _ = la.hermitian_eig(j5)
    np.testing.assert_allclose(w, [1, 0, 0, 0, 0], atol=1e-14)
    with pytest.raises(la.DimensionError):
        la.hermitian_eig(np.ones((2, 3)))


@pytest.mark.parametrize("n", [1, 2, 5, 12, 32])
def test_hermitian_eig_reconstruction(n):
    rng = np.random.default_rng(n)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = a + a.conj().T
    w, v = la.hermitian_eig(m)
    assert np.all(np.diff(w) <= 0)
    assert la.is_unitary(v, 1e-12)
    resid = np.linalg.norm(m - (v * w) @ v.conj().T)
    assert resid <= 1e-10 * np.linalg.norm(m)


def test_psd_sqrt_examples():
    np.testing.assert_allclose(la.psd_sqrt(np.diag([4.0, 9.0])), np.diag([2, 3]), atol=1e-14)
    np.testing.assert_allclose(la.psd_sqrt(np.eye(3)), np.eye(3), atol=1e-14)
    j5 = np.ones((5, 5)) / 5
    s = la.psd_sqrt(j5)
    np.testing.assert_allclose(s @ s, j5, atol=1e-9)
    np.testing.assert_allclose(s, j5, atol=1e-12)


def test_psd_sqrt_clamps_and_rejects():
    s = la.psd_sqrt(np.diag([1.0, -5e-11]))
    np.testing.assert_allclose(s, np.diag([1.0, 0.0]))
    with pytest.raises(la.NotPSDError):
        la.psd_sqrt(np.diag([1.0, -1e-6]))


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
def test_psd_sqrt_roundtrip(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    s = a @ a.conj().T
    s = la.psd_sqrt(s)  # a Hermitian PSD matrix to be recovered
    np.testing.assert_allclose(la.psd_sqrt(s @ s), s, atol=1e-8)


def test_tolerance_setting():
    old = la.get_tolerance()
    try:
        la.set_tolerance(1e-3)
        assert la.is_hermitian(np.array([[1, 1e-4], [0, 1]]))
        with pytest.raises(ValueError):
            la.set_tolerance(0)
    finally:
        la.set_tolerance(old)
    assert la.get_tolerance() == 1e-10
