import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers

from sympgrass.engine.errors import EmptyRange, InvalidInput, NotPSD, RankDeficient, SingularInput
from sympgrass.engine.numerics import (
    matrix_exp,
    matrix_log,
    orthonormal_frame,
    polar_decompose,
    psd_sqrt,
    qr_orthonormal_range,
    rk4_linear_ode,
    sym_eig,
    sym_function,
)

J1 = np.array([[0.0, -1.0], [1.0, 0.0]])


def test_sym_eig_diagonal():
    dec = sym_eig(np.diag([3.0, 1.0]))
    assert np.allclose(dec.eigenvalues, [1.0, 3.0])
    assert np.allclose(dec.reconstruct(), np.diag([3.0, 1.0]))


def test_sym_eig_is_deterministic_in_sign():
    a = np.array([[2.0, 1.0], [1.0, 2.0]])
    first, second = sym_eig(a), sym_eig(a.copy())
    assert np.array_equal(first.eigenvectors, second.eigenvectors)
    pivots = np.argmax(np.abs(first.eigenvectors), axis=0)
    assert np.all(first.eigenvectors[pivots, [0, 1]] > 0)


def test_sym_eig_rejects_asymmetric():
    with pytest.raises(InvalidInput):
        sym_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_psd_sqrt():
    assert np.allclose(psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    assert np.allclose(psd_sqrt(np.zeros((3, 3))), 0.0)
    with pytest.raises(NotPSD):
        psd_sqrt(np.diag([1.0, -1.0]))


@settings(max_examples=30, deadline=None)
@given(integers(min_value=0, max_value=2**32 - 1), integers(min_value=1, max_value=6))
def test_psd_sqrt_squares_back(seed, m):
    a = np.random.default_rng(seed).standard_normal((m, m))
    s = a @ a.T
    root = psd_sqrt(s)
    assert np.allclose(root @ root, s, atol=1e-8 * (1 + np.linalg.norm(s)))


def test_sym_function_matches_arctan_of_diagonal():
    out = sym_function(np.diag([1.0, -2.0]), np.arctan)
    assert np.allclose(out, np.diag([np.arctan(1.0), np.arctan(-2.0)]))


def test_matrix_exp_rotation():
    t = 0.7
    assert np.allclose(matrix_exp(np.zeros((2, 2))), np.eye(2))
    rot = np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])
    assert np.allclose(matrix_exp(t * J1), rot, atol=1e-14)


def test_matrix_log_inverts_exp_near_identity():
    x = 0.3 * J1
    assert np.allclose(matrix_log(matrix_exp(x)), x, atol=1e-12)


def test_polar_decompose():
    u, p = polar_decompose(np.diag([2.0, 3.0]))
    assert np.allclose(u, np.eye(2))
    assert np.allclose(p, np.diag([2.0, 3.0]))

    g = np.array([[1.0, 2.0], [0.0, 1.0]])
    u, p = polar_decompose(g)
    assert np.allclose(u @ p, g)
    assert np.allclose(u.T @ u, np.eye(2))
    assert np.all(np.linalg.eigvalsh(p) > 0)


def test_polar_decompose_singular():
    with pytest.raises(SingularInput):
        polar_decompose(np.array([[1.0, 1.0], [1.0, 1.0]]))


def test_rk4_constant_field_matches_exponential():
    grid = np.linspace(0.0, 1.0, 101)
    out = rk4_linear_ode(lambda t: J1, grid, np.eye(2))
    assert out.shape == (101, 2, 2)
    assert np.allclose(out[0], np.eye(2))
    assert np.allclose(out[-1], matrix_exp(J1), atol=1e-8)


@pytest.mark.parametrize("grid", [[], [0.0, 0.5, 0.5], [1.0, 0.0]])
def test_rk4_rejects_bad_grid(grid):
    with pytest.raises(InvalidInput):
        rk4_linear_ode(lambda t: J1, grid, np.eye(2))


def test_qr_orthonormal_range():
    q = qr_orthonormal_range(np.array([[1.0, 1.0], [0.0, 0.0]]))
    assert q.shape == (2, 1)
    assert np.allclose(q @ q.T, np.diag([1.0, 0.0]))
    with pytest.raises(EmptyRange):
        qr_orthonormal_range(np.zeros((3, 3)))


def test_orthonormal_frame_positive_diagonal_and_dependence():
    f = orthonormal_frame(np.array([[2.0, 1.0], [0.0, 1.0], [0.0, 0.0]]))
    assert np.allclose(f.T @ f, np.eye(2))
    assert np.allclose(f[:, 0], [1.0, 0.0, 0.0])
    with pytest.raises(RankDeficient):
        orthonormal_frame(np.array([[1.0, 2.0], [1.0, 2.0], [0.0, 0.0]]))


@settings(max_examples=200, deadline=None)
@given(integers(min_value=0, max_value=2**32 - 1), integers(min_value=1, max_value=8))
def test_sym_eig_reconstructs_random_symmetric(seed, m):
    a = np.random.default_rng(seed).standard_normal((m, m))
    s = a + a.T
    dec = sym_eig(s)
    assert np.all(np.diff(dec.eigenvalues) >= 0.0)
    assert np.allclose(dec.eigenvectors.T @ dec.eigenvectors, np.eye(m), atol=1e-10)
    assert np.linalg.norm(dec.reconstruct() - s) <= 1e-10 * (1.0 + np.linalg.norm(s))


@settings(max_examples=30, deadline=None)
@given(integers(min_value=0, max_value=2**32 - 1), integers(min_value=1, max_value=6))
def test_matrix_exp_adds_on_commuting_arguments(seed, m):
    a = 0.5 * np.random.default_rng(seed).standard_normal((m, m)) / np.sqrt(m)
    b = 0.3 * a + 0.2 * a @ a
    lhs = matrix_exp(a) @ matrix_exp(b)
    assert np.allclose(lhs, matrix_exp(a + b), atol=1e-10 * (1.0 + np.linalg.norm(lhs)))


@settings(max_examples=30, deadline=None)
@given(integers(min_value=0, max_value=2**32 - 1), integers(min_value=1, max_value=6))
def test_polar_recomposes_random_input(seed, m):
    g = np.random.default_rng(seed).standard_normal((m, m)) + 3.0 * np.eye(m)
    u, p = polar_decompose(g)
    assert np.allclose(u @ p, g, atol=1e-10 * (1.0 + np.linalg.norm(g)))
    assert np.allclose(u.T @ u, np.eye(m), atol=1e-10)
    assert np.allclose(p, p.T)
    assert np.all(np.linalg.eigvalsh(p) > 0.0)


def test_rk4_identity_field_grows_exponentially():
    grid = np.linspace(0.0, 1.0, 101)
    init = np.array([[1.0, 2.0], [-0.5, 3.0]])
    out = rk4_linear_ode(lambda t: np.eye(2), grid, init)
    for t, phi in zip(grid, out):
        assert np.allclose(phi, np.exp(t) * init, rtol=1e-9)


def test_rk4_vectorized_field_matches_pointwise():
    grid = np.linspace(0.0, 1.0, 51)
    pointwise = rk4_linear_ode(lambda t: np.cos(t) * J1, grid, np.eye(2))
    batched = rk4_linear_ode(lambda ts: np.multiply.outer(np.cos(ts), J1), grid, np.eye(2), vectorized=True)
    assert np.allclose(pointwise, batched, atol=1e-14)
    rotation = matrix_exp(np.sin(1.0) * J1)
    assert np.allclose(batched[-1], rotation, atol=1e-8)


def test_orthonormal_frame_keeps_unit_columns():
    f = np.vstack([np.zeros((2, 2)), np.eye(2)])
    assert np.allclose(orthonormal_frame(f), f, atol=1e-15)
    with pytest.raises(RankDeficient):
        orthonormal_frame(np.zeros((4, 0)))
