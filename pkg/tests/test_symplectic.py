import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers

from sympgrass.engine.errors import InvalidInput
from sympgrass.engine.numerics import matrix_exp
from sympgrass.engine.samplers import random_symplectic
from sympgrass.engine.symplectic import (
    AlgebraElement,
    algebra_projection,
    curve_length_left,
    curve_length_right,
    exp_group_curve,
    group_curve,
    group_exp,
    group_geodesic,
    identity_element,
    invert_curve,
    is_algebra,
    is_complex_linear,
    is_symplectic,
    random_algebra_element,
    standard_J,
    symplectic_element,
    symplectic_elements,
    symplectic_form,
)


def shear(s):
    return np.array([[1.0, s], [0.0, 1.0]])


def test_standard_J():
    assert np.array_equal(standard_J(1).matrix, [[0.0, -1.0], [1.0, 0.0]])
    j = standard_J(2).matrix
    assert np.allclose(j @ j, -np.eye(4))
    assert np.allclose(j.T, -j)


@pytest.mark.parametrize("n", [0, -1, 1.5])
def test_standard_J_rejects_bad_n(n):
    with pytest.raises(InvalidInput):
        standard_J(n)


@pytest.mark.parametrize("g, expected", [
    (np.eye(2), True),
    (shear(0.7), True),
    (np.diag([2.0, 2.0]), False),
])
def test_is_symplectic(g, expected):
    assert is_symplectic(g) is expected


def test_odd_dimension_rejected():
    with pytest.raises(InvalidInput):
        is_symplectic(np.eye(3))
    with pytest.raises(InvalidInput):
        is_algebra(np.eye(3))


@pytest.mark.parametrize("x, expected", [
    (standard_J(1).matrix, True),
    (np.zeros((2, 2)), True),
    (np.eye(2), False),
])
def test_is_algebra(x, expected):
    assert is_algebra(x) is expected


def test_symplectic_element_rejects_non_member():
    with pytest.raises(InvalidInput):
        symplectic_element(np.diag([2.0, 2.0]))
    assert symplectic_element(shear(0.5)).hs_deviation == pytest.approx(0.5)


def test_symplectic_form_is_antisymmetric_and_preserved(rng):
    xi, eta = rng.standard_normal(4), rng.standard_normal(4)
    assert symplectic_form(xi, eta) == pytest.approx(-symplectic_form(eta, xi))
    g = group_exp(random_algebra_element(2, 1.0, rng)).matrix
    assert symplectic_form(g @ xi, g @ eta) == pytest.approx(symplectic_form(xi, eta), abs=1e-9)


def test_is_complex_linear():
    t = 0.4
    rot = np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])
    assert is_complex_linear(rot)
    assert not is_complex_linear(shear(1.0))


def test_random_algebra_element_deterministic():
    a = random_algebra_element(3, 1.0, 7)
    b = random_algebra_element(3, 1.0, 7)
    assert np.array_equal(a.matrix, b.matrix)
    assert np.allclose(random_algebra_element(3, 0.0, 7).matrix, 0.0)
    with pytest.raises(InvalidInput):
        random_algebra_element(3, -1.0, 7)


@settings(max_examples=25, deadline=None)
@given(integers(min_value=0, max_value=2**32 - 1), integers(min_value=1, max_value=6))
def test_random_algebra_element_in_algebra_and_exp_in_group(seed, n):
    x = random_algebra_element(n, 1.0, seed)
    assert is_algebra(x.matrix, 1e-12)
    assert is_symplectic(group_exp(x).matrix, 1e-8)


def test_group_exp_rotation():
    t = 0.9
    g = group_exp(AlgebraElement(t * standard_J(1).matrix)).matrix
    assert np.allclose(g, [[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])
    assert np.allclose(group_exp(AlgebraElement(np.zeros((2, 2)))).matrix, np.eye(2))


def test_group_geodesic_start_and_velocity(rng):
    g0 = group_exp(random_algebra_element(2, 0.5, rng))
    v0 = random_algebra_element(2, 1.0, rng)
    assert group_geodesic(g0, v0, 0.0) is g0
    h = 1e-5
    fd = (group_geodesic(g0, v0, h).matrix - group_geodesic(g0, v0, -h).matrix) / (2 * h)
    assert np.allclose(fd, g0.matrix @ v0.matrix, atol=1e-6)


def test_one_parameter_subgroup_lengths(rng):
    x = random_algebra_element(2, 0.8, rng)
    curve = exp_group_curve(x, np.linspace(0.0, 1.0, 401))
    size = np.linalg.norm(x.matrix)
    assert curve_length_right(curve) == pytest.approx(size, rel=1e-4)
    assert curve_length_left(curve) == pytest.approx(size, rel=1e-4)


def test_inverse_curve_duality(rng):
    g0 = group_exp(random_algebra_element(2, 0.3, rng))
    v0 = random_algebra_element(2, 0.5, rng)
    grid = np.linspace(0.0, 1.0, 1001)
    alpha = group_curve(grid, [group_geodesic(g0, v0, t) for t in grid])
    assert curve_length_left(invert_curve(alpha)) == pytest.approx(curve_length_right(alpha), abs=1e-6)


def test_curve_length_needs_two_points():
    single = group_curve([0.0], [identity_element(1)])
    with pytest.raises(InvalidInput):
        curve_length_right(single)


@settings(max_examples=25, deadline=None)
@given(integers(min_value=0, max_value=2**32 - 1), integers(min_value=1, max_value=4))
def test_group_is_closed_under_products(seed, n):
    rng = np.random.default_rng(seed)
    g, h = random_symplectic(rng, n, 0.5), random_symplectic(rng, n, 0.5)
    product = g @ h
    assert is_symplectic(product.matrix, 1e-8 * (1.0 + np.linalg.norm(product.matrix) ** 2))
    assert is_symplectic(g.inverse().matrix @ g.matrix, 1e-8 * (1.0 + np.linalg.norm(g.matrix) ** 2))


@settings(max_examples=25, deadline=None)
@given(integers(min_value=0, max_value=2**32 - 1), integers(min_value=1, max_value=5))
def test_algebra_projection_is_idempotent(seed, n):
    m = np.random.default_rng(seed).standard_normal((2 * n, 2 * n))
    once = algebra_projection(m)
    assert is_algebra(once, 1e-12)
    assert np.allclose(algebra_projection(once), once, atol=1e-14)


@pytest.mark.parametrize("part", ["antisymmetric", "symmetric"])
def test_group_geodesic_reduces_to_one_parameter_subgroup(rng, part):
    x = random_algebra_element(2, 1.0, rng).matrix
    v0 = 0.5 * (x - x.T) if part == "antisymmetric" else 0.5 * (x + x.T)
    assert is_algebra(v0)
    g0 = random_symplectic(rng, 2, 0.3)
    for t in (0.3, 1.0):
        expected = g0.matrix @ matrix_exp(t * v0)
        assert np.allclose(group_geodesic(g0, AlgebraElement(v0), t).matrix, expected, atol=1e-10)


def test_constant_curve_has_zero_length(rng):
    g0 = random_symplectic(rng, 2, 0.5)
    constant = group_curve(np.linspace(0.0, 1.0, 11), [g0] * 11)
    assert curve_length_right(constant) == pytest.approx(0.0, abs=1e-12)
    assert curve_length_left(constant) == pytest.approx(0.0, abs=1e-12)


def test_lengths_are_invariant_under_reparametrisation(rng):
    x = random_algebra_element(2, 0.8, rng)
    grid = np.linspace(0.0, 1.0, 2001)
    uniform = exp_group_curve(x, grid)
    squared = group_curve(grid, [group_exp(float(s * s) * x) for s in grid])
    assert curve_length_right(squared) == pytest.approx(curve_length_right(uniform), rel=1e-4)
    assert curve_length_left(squared) == pytest.approx(curve_length_left(uniform), rel=1e-4)


@pytest.mark.parametrize("times", [[1.0, 0.0], [0.0, 0.5, 0.5]])
def test_group_curve_needs_increasing_times(times):
    with pytest.raises(InvalidInput):
        group_curve(times, [identity_element(1)] * len(times))


def test_symplectic_elements_batch(rng):
    curve = exp_group_curve(random_algebra_element(2, 0.7, rng), np.linspace(0.0, 1.0, 7))
    batch = symplectic_elements(curve.stack())
    assert all(np.array_equal(a.matrix, b.matrix) for a, b in zip(batch, curve.points))
    assert [a.hs_deviation for a in batch] == pytest.approx([b.hs_deviation for b in curve.points])
    with pytest.raises(InvalidInput):
        symplectic_elements(np.stack([np.eye(2), np.diag([2.0, 2.0])]))


def test_invert_curve_inverts_every_point(rng):
    curve = exp_group_curve(random_algebra_element(2, 0.7, rng), np.linspace(0.0, 1.0, 5))
    for g, g_inv in zip(curve.points, invert_curve(curve).points):
        assert np.allclose(g.matrix @ g_inv.matrix, np.eye(4), atol=1e-12)
