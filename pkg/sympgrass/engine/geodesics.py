# sympgrass/engine/geodesics.py
# Curves in the orbit: lengths, isometric lifts, geodesics, distance bounds
#
# An OrbitCurve is a sampled path of Lagrangian subspaces. Velocities are
# either carried by the curve (generators with closed-form derivatives) or
# recovered from the projectors: for Lagrangian W the tangent is
# v̂ = P_W J Ṗ P_W, the inverse of Ṗ = v̂J − Jv̂.
#
# Stages:
#   curve_length_ambient / curve_length_quotient    trapezoid quadrature
#   isometric_lift     RK4 on φ' = X(t)φ, X(t) = −J ξ̇ P_ξ
#   orbit_geodesic     ξ(t) = e^{t(v*−v)} e^{−tv*}(L), v the minimal lift of −w
#   exp_curve / chart_curve / geodesic_curve        sampled generators
#   distance_upper_bounds                           three candidate paths
#   cauchy_probe                                    summable-step sequences

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import CubicSpline
from scipy.optimize import bisect

from sympgrass.engine.errors import InvalidInput, NotTransversal, OutOfSectionRadius, RefineGrid
from sympgrass.engine.lagrangian import (
    LagrangianSubspace,
    TangentVector,
    act,
    action_differential,
    chart_forward,
    chart_tangent,
    cross_section,
    projector_distance,
    tangent_from_coords,
    tangent_from_hat,
)
from sympgrass.engine.metrics import ambient_metric, minimal_lift, quotient_metric
from sympgrass.engine.numerics import (
    CONSTRUCTION_TOL,
    VERIFICATION_TOL,
    matrix_exp,
    matrix_log,
    op_norm,
    rk4_linear_ode,
    sym,
    sym_function,
)
from sympgrass.engine.symplectic import (
    AlgebraElement,
    GroupCurve,
    algebra_projection,
    require_time_grid,
    symplectic_elements,
    time_derivative,
)

logger = logging.getLogger(__name__)

MAX_PROJECTOR_STEP = 0.1
SHOOTING_TOL = 1e-6
SHOOTING_MAX_ITER = 200
LOG_DOMAIN = 1.0


# ── Types ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class OrbitCurve:
    times: np.ndarray
    points: tuple
    velocities: Optional[tuple] = None

    def __post_init__(self):
        require_time_grid(self.times, "orbit curve")
        if len(self.times) != len(self.points):
            raise InvalidInput(f"orbit curve has {len(self.times)} times but {len(self.points)} points")
        if self.velocities is not None and len(self.velocities) != len(self.points):
            raise InvalidInput("orbit curve velocities do not match its points")

    def projectors(self) -> np.ndarray:
        return np.stack([p.projector for p in self.points])


@dataclass(frozen=True)
class DistanceReport:
    chart_path: Optional[float] = None
    geodesic_path: Optional[float] = None
    section_path: Optional[float] = None
    chart_available: bool = False
    geodesic_available: bool = False
    section_available: bool = False
    chart_endpoint_error: Optional[float] = None
    geodesic_endpoint_error: Optional[float] = None
    section_endpoint_error: Optional[float] = None
    minimum: Optional[float] = None


@dataclass(frozen=True)
class CauchyReport:
    step_norms: np.ndarray = field(repr=False)
    step_lengths: np.ndarray = field(repr=False)
    successive_gaps: np.ndarray = field(repr=False)
    tails: np.ndarray = field(repr=False)
    max_violation: float = 0.0
    final_gap: float = 0.0


# ── Velocities and lengths ───────────────────────────────────────────────────

def orbit_curve(times: Sequence[float], points: Sequence[LagrangianSubspace],
                velocities: Optional[Sequence[TangentVector]] = None) -> OrbitCurve:
    return OrbitCurve(
        times=np.asarray(times, dtype=float),
        points=tuple(points),
        velocities=None if velocities is None else tuple(velocities),
    )


def curve_velocities(c: OrbitCurve) -> tuple:
    if c.velocities is not None:
        return c.velocities
    if len(c.points) < 2:
        raise InvalidInput("velocity recovery needs at least two points", value=len(c.points), limit=2)
    dp = time_derivative(c.projectors(), c.times)
    out = []
    for point, dpi in zip(c.points, dp):
        p = point.projector
        out.append(tangent_from_hat(point, sym(p @ point.J @ dpi @ p)))
    return tuple(out)


def _length(c: OrbitCurve, norm) -> float:
    if len(c.points) < 2:
        raise InvalidInput("curve length needs at least two points", value=len(c.points), limit=2)
    speeds = np.array([norm(v) for v in curve_velocities(c)])
    return float(trapezoid(speeds, c.times))


def curve_length_ambient(c: OrbitCurve) -> float:
    return _length(c, ambient_metric)


def curve_length_quotient(c: OrbitCurve) -> float:
    return _length(c, quotient_metric)


# ── Isometric lift ───────────────────────────────────────────────────────────

def isometric_lift(c: OrbitCurve, max_step: float = MAX_PROJECTOR_STEP) -> GroupCurve:
    """φ(0) = 1, φ(t)(ξ(0)) = ξ(t), right length of φ equals L_A(ξ)."""
    if len(c.points) < 2:
        raise InvalidInput("lift needs at least two points", value=len(c.points), limit=2)
    proj = c.projectors()
    steps = np.linalg.norm(np.diff(proj, axis=0), ord=2, axis=(1, 2))
    worst = float(np.max(steps))
    if worst >= max_step:
        logger.info(f"[Lift] projector step {worst:.3e} exceeds {max_step}; grid must be refined")
        raise RefineGrid(f"successive projectors differ by {worst:.3e} in operator norm", value=worst, limit=max_step)

    generators = np.stack([minimal_lift(v).matrix for v in curve_velocities(c)])
    field_spline = CubicSpline(c.times, generators, axis=0)

    dim = generators.shape[1]
    phis = rk4_linear_ode(field_spline, c.times, np.eye(dim), vectorized=True)
    return GroupCurve(times=c.times.copy(), points=symplectic_elements(phis, tol=1e-7))


def lift_tracking_error(phi: GroupCurve, c: OrbitCurve) -> float:
    """max_t ‖P_{φ(t)(ξ(0))} − P_{ξ(t)}‖_F, one batched QR over the grid."""
    if len(phi.points) != len(c.points):
        raise InvalidInput("lift and curve are sampled on different grids")
    moved = phi.stack() @ c.points[0].frame
    q, _ = np.linalg.qr(moved)
    gaps = np.einsum("kab,kcb->kac", q, q) - c.projectors()
    return float(np.max(np.linalg.norm(gaps, axis=(1, 2))))


# ── Geodesics and sampled generators ─────────────────────────────────────────

def _geodesic_factors(L: LagrangianSubspace, w: TangentVector, t: float):
    v = minimal_lift(-w).matrix
    a = matrix_exp(t * (v.T - v))
    b = matrix_exp(-t * v.T)
    return v, a, b


def orbit_geodesic(L: LagrangianSubspace, w: TangentVector, t: float) -> LagrangianSubspace:
    """ξ(t) = e^{t(v*−v)} e^{−tv*}(L) with v = minimal_lift(−w); ξ(0) = L, ξ'(0) = w."""
    if projector_distance(w.base, L) > VERIFICATION_TOL:
        raise InvalidInput("geodesic initial velocity is not based at L")
    if t == 0:
        return L
    _, a, b = _geodesic_factors(L, w, t)
    return act(a @ b, L)


def geodesic_curve(L: LagrangianSubspace, w: TangentVector, t_grid: Sequence[float]) -> OrbitCurve:
    """Sampled geodesic with exact velocities: g' g⁻¹ = (v*−v) − A v* A⁻¹."""
    points, velocities = [], []
    for t in np.asarray(t_grid, dtype=float):
        v, a, b = _geodesic_factors(L, w, t)
        g = a @ b
        generator = (v.T - v) - a @ v.T @ np.linalg.inv(a)
        points.append(act(g, L))
        velocities.append(action_differential(g, L, AlgebraElement(generator)))
    return orbit_curve(t_grid, points, velocities)


def exp_curve(L: LagrangianSubspace, z: AlgebraElement, t_grid: Sequence[float]) -> OrbitCurve:
    """γ(t) = e^{tz}(L); velocity P J z P at γ(t)."""
    points, velocities = [], []
    for t in np.asarray(t_grid, dtype=float):
        g = matrix_exp(t * z.matrix)
        points.append(act(g, L))
        velocities.append(action_differential(g, L, z))
    return orbit_curve(t_grid, points, velocities)


def chart_curve(L: LagrangianSubspace, psi0, dpsi, t_grid: Sequence[float]) -> OrbitCurve:
    """φ_L⁻¹(ψ0 + t·dψ) with velocities from the inverse chart differential."""
    psi0 = np.asarray(psi0, dtype=float)
    dpsi = np.asarray(dpsi, dtype=float)
    points, velocities = [], []
    for t in np.asarray(t_grid, dtype=float):
        v = chart_tangent(L, psi0 + t * dpsi, dpsi)
        points.append(v.base)
        velocities.append(v)
    return orbit_curve(t_grid, points, velocities)


# ── Distance estimation ──────────────────────────────────────────────────────

def _shoot_geodesic(S: LagrangianSubspace, T: LagrangianSubspace, psi_t: np.ndarray, grid: np.ndarray):
    """Bisection on speed along arctan(ψ_T): geodesics from S have chart image tan(t w)."""
    direction = sym_function(psi_t, np.arctan)
    size = float(np.linalg.norm(direction))
    if size <= CONSTRUCTION_TOL:
        # T = S up to rounding: the constant path
        return 0.0, projector_distance(S, T)
    unit = direction / size
    top = float(np.max(np.abs(np.linalg.eigvalsh(unit))))
    blowup = (np.pi / 2.0) / top
    hi = size + 0.5 * (blowup - size)

    def mismatch(speed: float) -> float:
        end = orbit_geodesic(S, tangent_from_coords(S, speed * unit), 1.0)
        try:
            psi_end = chart_forward(S, end).psi
        except NotTransversal:
            return float("inf")
        return float(np.sum((psi_end - psi_t) * psi_t))

    low, high = mismatch(0.0), mismatch(hi)
    if not (low < 0.0 < high):
        logger.info(f"[Distance] shooting bracket has no sign change ({low:.3e}, {high:.3e})")
        return None
    speed = bisect(mismatch, 0.0, hi, xtol=1e-14, maxiter=SHOOTING_MAX_ITER)
    w = tangent_from_coords(S, speed * unit)
    path = geodesic_curve(S, w, grid)
    return curve_length_ambient(path), projector_distance(path.points[-1], T)


def distance_upper_bounds(S: LagrangianSubspace, T: LagrangianSubspace, grid_points: int = 201) -> DistanceReport:
    """Upper bounds for d_A(S,T) from three explicit joining curves."""
    grid = np.linspace(0.0, 1.0, grid_points)
    found = {}

    try:
        psi_t = chart_forward(S, T).psi
        chart = chart_curve(S, np.zeros_like(psi_t), psi_t, grid)
        found["chart"] = (curve_length_ambient(chart), projector_distance(chart.points[-1], T))
    except NotTransversal as exc:
        logger.info(f"[Distance] chart path unavailable: {exc}")
        psi_t = None

    if psi_t is not None:
        shot = _shoot_geodesic(S, T, psi_t, grid)
        if shot is not None and shot[1] <= SHOOTING_TOL:
            found["geodesic"] = shot
        elif shot is not None:
            logger.info(f"[Distance] geodesic shooting missed T by {shot[1]:.3e}")

    try:
        u = cross_section(S, T)
        if op_norm(u.matrix - np.eye(u.matrix.shape[0])) < LOG_DOMAIN:
            z = AlgebraElement(algebra_projection(matrix_log(u.matrix)))
            section = exp_curve(S, z, grid)
            found["section"] = (curve_length_ambient(section), projector_distance(section.points[-1], T))
        else:
            logger.info("[Distance] section path unavailable: ‖u − 1‖ outside the logarithm domain")
    except OutOfSectionRadius as exc:
        logger.info(f"[Distance] section path unavailable: {exc}")

    fields = {}
    for key in ("chart", "geodesic", "section"):
        if key in found:
            fields[f"{key}_path"], fields[f"{key}_endpoint_error"] = found[key]
            fields[f"{key}_available"] = True
    lengths = [v[0] for v in found.values()]
    return DistanceReport(minimum=min(lengths) if lengths else None, **fields)


# ── Cauchy behaviour ─────────────────────────────────────────────────────────

def cauchy_probe(L: LagrangianSubspace, z_seq: Sequence[AlgebraElement], grid_points: int = 21) -> CauchyReport:
    """L_k = e^{z_k}(L_{k−1}); checks ‖P_m − P_k‖_F ≤ √2 Σ_{j>k} ‖z_j‖_F for m > k."""
    if not z_seq:
        raise InvalidInput("cauchy probe needs at least one step")
    grid = np.linspace(0.0, 1.0, grid_points)
    points = [L]
    lengths = []
    for z in z_seq:
        step = exp_curve(points[-1], z, grid)
        lengths.append(curve_length_ambient(step))
        points.append(step.points[-1])

    norms = np.array([float(np.linalg.norm(z.matrix)) for z in z_seq])
    # tails[k] bounds the ambient distance from L_k to any later point
    tails = np.concatenate([np.cumsum(norms[::-1])[::-1], [0.0]])
    proj = np.stack([p.projector for p in points])
    worst = -np.inf
    for k in range(len(points)):
        gaps = np.linalg.norm(proj[k + 1:] - proj[k], axis=(1, 2)) if k + 1 < len(points) else np.zeros(0)
        if gaps.size:
            worst = max(worst, float(np.max(gaps)) - np.sqrt(2.0) * tails[k])
    successive = np.linalg.norm(proj[1:] - proj[:-1], axis=(1, 2))
    return CauchyReport(
        step_norms=norms,
        step_lengths=np.array(lengths),
        successive_gaps=successive,
        tails=tails,
        max_violation=float(worst),
        final_gap=float(successive[-1]),
    )
