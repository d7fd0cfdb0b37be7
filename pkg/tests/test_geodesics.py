import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers

from sympgrass.engine.errors import InvalidInput, RefineGrid
from sympgrass.engine.geodesics import (
    cauchy_probe,
    chart_curve,
    curve_length_ambient,
    curve_length_quotient,
    curve_velocities,
    distance_upper_bounds,
    exp_curve,
    geodesic_curve,
    isometric_lift,
    lift_tracking_error,
    orbit_curve,
    orbit_geodesic,
)
from sympgrass.engine.lagrangian import (
    act,
    base_lagrangian,
    from_frame,
    projector_distance,
    same_subspace,
    tangent_from_coords,
)
from sympgrass.engine.metrics import ambient_metric
from sympgrass.engine.samplers import (
    random_algebra,
    random_chart_point,
    random_lagrangian,
    random_smooth_curve,
    random_summable_steps,
    random_tangent,
)
from sympgrass.engine.symplectic import AlgebraElement, curve_length_left, curve_length_right, invert_curve, standard_J


def line(theta):
    return from_frame([[np.sin(theta)], [np.cos(theta)]])


@pytest.mark.parametrize("s, t", [(1.0, 0.3), (0.5, 1.2), (2.0, 0.25)])
def test_rotation_geodesic_n1(s, t):
    L0 = base_lagrangian(1)
    xi = orbit_geodesic(L0, tangent_from_coords(L0, [[s]]), t)
    assert projector_distance(xi, line(s * t)) < 1e-8


def test_geodesic_start_and_velocity(rng):
    L = random_lagrangian(rng, 3)
    w = random_tangent(rng, L)
    assert orbit_geodesic(L, w, 0.0) is L
    h = 1e-4
    dp = (orbit_geodesic(L, w, h).projector - orbit_geodesic(L, w, -h).projector) / (2 * h)
    p = L.projector
    fd = 0.5 * (p @ L.J @ dp @ p + (p @ L.J @ dp @ p).T)
    assert np.linalg.norm(fd - w.hat) <= 1e-5 * max(1.0, np.linalg.norm(w.hat))


def test_geodesic_rejects_foreign_velocity(rng):
    L = random_lagrangian(rng, 2)
    w = random_tangent(rng, random_lagrangian(rng, 2))
    with pytest.raises(InvalidInput):
        orbit_geodesic(L, w, 0.5)


def test_geodesic_curve_is_lagrangian_with_constant_speed(rng):
    L = random_lagrangian(rng, 4)
    w = random_tangent(rng, L)
    curve = geodesic_curve(L, w, np.linspace(0.0, 1.0, 11))
    assert max(p.lagrangian_defect() for p in curve.points) < 1e-7
    speeds = [ambient_metric(v) for v in curve.velocities]
    assert np.allclose(speeds, ambient_metric(w), atol=1e-8)


def test_exp_curve_rotation_length():
    a = 0.8
    curve = exp_curve(base_lagrangian(1), AlgebraElement(a * standard_J(1).matrix), np.linspace(0.0, 1.0, 51))
    assert curve_length_ambient(curve) == pytest.approx(a)
    assert curve_length_quotient(curve) == pytest.approx(a)
    assert same_subspace(curve.points[-1], line(-a))


def test_recovered_velocities_match_exact(rng):
    L = random_lagrangian(rng, 2)
    z = random_algebra(rng, 2, scale=0.5)
    grid = np.linspace(0.0, 1.0, 401)
    exact = exp_curve(L, z, grid)
    sampled = orbit_curve(exact.times, exact.points)
    for got, want in zip(curve_velocities(sampled)[1:-1], exact.velocities[1:-1]):
        assert np.allclose(got.hat, want.hat, atol=1e-4)


def test_isometric_lift_tracks_and_preserves_length(rng):
    grid = np.linspace(0.0, 1.0, 1001)
    c = random_smooth_curve(rng, 2, grid)
    phi = isometric_lift(c)
    assert np.allclose(phi.points[0].matrix, np.eye(4))
    tracking = max(projector_distance(act(p, c.points[0]), w) for p, w in zip(phi.points, c.points))
    assert tracking < 1e-5
    l_r = curve_length_right(phi)
    assert l_r == pytest.approx(curve_length_ambient(c), abs=1e-5)
    assert curve_length_left(invert_curve(phi)) == pytest.approx(l_r, abs=1e-6)


def test_isometric_lift_requires_fine_grid():
    z = AlgebraElement(standard_J(1).matrix)
    coarse = exp_curve(base_lagrangian(1), z, [0.0, 1.0, 2.0])
    with pytest.raises(RefineGrid):
        isometric_lift(coarse)


def test_distance_bounds_rotation_case():
    theta = 0.3
    report = distance_upper_bounds(base_lagrangian(1), line(theta))
    assert report.chart_available and report.geodesic_available and report.section_available
    assert report.geodesic_path == pytest.approx(theta, abs=1e-4)
    assert report.chart_path == pytest.approx(theta, abs=1e-4)
    assert report.section_path == pytest.approx(theta, abs=1e-4)
    assert report.minimum == min(report.chart_path, report.geodesic_path, report.section_path)
    assert report.geodesic_endpoint_error < 1e-6


def test_distance_bounds_unavailable_across_the_boundary():
    report = distance_upper_bounds(base_lagrangian(1), line(np.pi / 2))
    assert not report.chart_available
    assert not report.geodesic_available
    assert not report.section_available
    assert report.minimum is None


def test_distance_bounds_dominate_projector_gap(rng):
    S = random_lagrangian(rng, 3)
    _, T = random_chart_point(rng, S, scale=0.5)
    report = distance_upper_bounds(S, T)
    assert report.minimum is not None
    assert report.minimum >= projector_distance(S, T) / np.sqrt(2.0) - 1e-6


def test_cauchy_probe(rng):
    L = random_lagrangian(rng, 3)
    probe = cauchy_probe(L, random_summable_steps(rng, 3, steps=10))
    assert probe.max_violation <= 1e-8
    assert np.all(probe.step_lengths <= probe.step_norms + 1e-12)
    assert probe.final_gap <= np.sqrt(2.0) * probe.step_norms[-1] + 1e-12
    with pytest.raises(InvalidInput):
        cauchy_probe(L, [])


def test_chart_line_length_is_arctan():
    s = 1.5
    curve = chart_curve(base_lagrangian(1), [[0.0]], [[s]], np.linspace(0.0, 1.0, 401))
    assert same_subspace(curve.points[-1], from_frame([[s], [1.0]]))
    assert curve_length_ambient(curve) == pytest.approx(np.arctan(s), abs=1e-5)


@settings(max_examples=40, deadline=None)
@given(integers(min_value=0, max_value=2**32 - 1), integers(min_value=1, max_value=4))
def test_distance_bounds_vanish_from_a_subspace_to_itself(seed, n):
    S = random_lagrangian(np.random.default_rng(seed), n)
    report = distance_upper_bounds(S, S, grid_points=21)
    assert report.chart_available and report.geodesic_available and report.section_available
    assert report.chart_path == pytest.approx(0.0, abs=1e-8)
    assert report.geodesic_path == pytest.approx(0.0, abs=1e-8)
    assert report.section_path == pytest.approx(0.0, abs=1e-8)
    assert report.minimum == pytest.approx(0.0, abs=1e-8)


def test_constant_orbit_curve_has_zero_length(rng):
    L = random_lagrangian(rng, 2)
    constant = orbit_curve(np.linspace(0.0, 1.0, 9), [L] * 9)
    assert curve_length_ambient(constant) == pytest.approx(0.0, abs=1e-12)
    assert curve_length_quotient(constant) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("times", [[1.0, 0.5, 0.0], [0.0, 0.0, 1.0]])
def test_orbit_curve_needs_increasing_times(times):
    L0 = base_lagrangian(1)
    with pytest.raises(InvalidInput):
        orbit_curve(times, [L0] * 3)


def test_lift_tracking_error_matches_pointwise(rng):
    grid = np.linspace(0.0, 1.0, 201)
    c = random_smooth_curve(rng, 2, grid)
    phi = isometric_lift(c)
    pointwise = max(projector_distance(act(p, c.points[0]), w) for p, w in zip(phi.points, c.points))
    assert lift_tracking_error(phi, c) == pytest.approx(pointwise, abs=1e-12)
    assert lift_tracking_error(phi, c) < 1e-5
