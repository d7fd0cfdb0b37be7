# sympgrass/engine/suites.py
# Experiment suites: seeded property checks over random instances
#
# Each suite is a trial function (index, rng, context, checks) → metrics.
# run_suite spawns one generator per trial, runs the trials (optionally on
# joblib workers), turns each trial's checks into pass/fail through the
# severity aggregator and assembles an ordered ExperimentReport.
#
# A domain error inside a trial never escapes: it is recorded as a CRITICAL
# issue of that trial.

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from joblib import Parallel, delayed

from sympgrass.engine.errors import NotTransversal, SympGrassError, UsageError
from sympgrass.engine.geodesics import (
    cauchy_probe,
    curve_length_ambient,
    curve_length_quotient,
    distance_upper_bounds,
    geodesic_curve,
    isometric_lift,
    lift_tracking_error,
    orbit_geodesic,
)
from sympgrass.engine.lagrangian import (
    act,
    action_differential,
    base_lagrangian,
    chart_differential,
    chart_differential_inverse,
    chart_forward,
    chart_inverse,
    cross_section,
    from_frame,
    isotropy_defect,
    projection_from_idempotent,
    projector_distance,
    strict_inclusion_demo,
    tangent_from_coords,
    translated_cross_section,
)
from sympgrass.engine.metrics import (
    ambient_metric,
    chart_ambient_metric,
    isotropy_projection,
    minimal_lift,
    quotient_metric,
    quotient_metric_oracle,
)
from sympgrass.engine.numerics import frob, matrix_exp, qr_orthonormal_range, sym
from sympgrass.engine.samplers import (
    SEED_ALGORITHM,
    random_algebra,
    random_chart_point,
    random_lagrangian,
    random_smooth_curve,
    random_summable_steps,
    random_symmetric,
    random_symplectic,
    random_tangent,
    trial_generators,
)
from sympgrass.engine.report_exporter import emit_csv, write_report
from sympgrass.engine.severity_aggregator import TrialChecks, aggregate_validation_results
from sympgrass.engine.symplectic import (
    curve_length_left,
    curve_length_right,
    group_curve,
    group_geodesic,
    invert_curve,
    standard_J,
)
from sympgrass.models.experiment_models import ExperimentConfig, ExperimentReport, Tolerances

logger = logging.getLogger(__name__)

FD_STEP = 1e-4
ENDPOINT_TOL = 1e-6


@dataclass(frozen=True)
class SuiteContext:
    n: int
    grid_points: int
    tol: Tolerances


@dataclass(frozen=True)
class Suite:
    name: str
    trial: Callable
    description: str
    trials: int
    n: int
    grid_points: int = 2
    fixed_trials: bool = False   # trial count is derived from n


SUITES: dict = {}


def suite(name: str, description: str, trials: int, n: int, grid_points: int = 2, fixed_trials: bool = False):
    def register(fn):
        SUITES[name] = Suite(name, fn, description, trials, n, grid_points, fixed_trials)
        return fn
    return register


def _dim(index: int, ctx: SuiteContext) -> int:
    """Trials cycle through n = 1 … ctx.n."""
    return 1 + index % ctx.n


def _relative(err: float, size: float) -> float:
    return err / max(size, 1.0)


def _fd_tangent(point_at, base, h: float = FD_STEP):
    """v̂ ≈ sym(P J Ṗ P) at base from a central difference of projectors."""
    dp = (point_at(h).projector - point_at(-h).projector) / (2.0 * h)
    p = base.projector
    return sym(p @ base.J @ dp @ p)


# ── Suites ────────────────────────────────────────────────────────────────────

@suite("projector", "idempotent range projector vs QR oracle", trials=500, n=8)
def projector_trial(index, rng, ctx, checks):
    n = _dim(index, ctx)
    L0 = base_lagrangian(n)
    g = random_symplectic(rng, n, scale=0.5)
    q = g.matrix @ L0.projector @ g.inverse().matrix
    p = projection_from_idempotent(q)
    u = qr_orthonormal_range(q)
    oracle_err = checks.check("projector_error", frob(p - u @ u.T), ctx.tol.projector)
    action_err = checks.check("action_error", frob(p - act(g, L0).projector), ctx.tol.projector)
    return {"n": n, "projector_error": oracle_err, "action_error": action_err, "idempotent_norm": frob(q)}


@suite("charts", "graph chart bijection and f = 1 − JψP", trials=500, n=8)
def charts_trial(index, rng, ctx, checks):
    n = _dim(index, ctx)
    L = random_lagrangian(rng, n)
    psi = random_symmetric(rng, n)
    inv = chart_inverse(L, psi)
    forward_err = checks.check("forward_inverse", frob(chart_forward(L, inv.W).psi - psi), ctx.tol.chart)

    j = standard_J(n).matrix
    f = inv.f.matrix
    symp = checks.check("f_symplectic", frob(f.T @ j @ f - j), ctx.tol.verification)
    hs = checks.check("f_hs_norm", abs(inv.f.hs_deviation - frob(psi)), ctx.tol.construction)

    out = {"n": n, "forward_inverse": forward_err, "f_symplectic": symp, "f_hs_norm": hs}
    W2 = act(random_symplectic(rng, n, scale=0.2), L)
    try:
        back = chart_inverse(L, chart_forward(L, W2).psi).W
        out["inverse_forward"] = checks.check("inverse_forward", projector_distance(back, W2), ctx.tol.chart)
    except NotTransversal as exc:
        checks.warn(f"inverse∘forward skipped: {exc}")
    return out


@suite("differentials", "action and chart differentials vs central differences", trials=200, n=4)
def differentials_trial(index, rng, ctx, checks):
    n = _dim(index, ctx)
    L = random_lagrangian(rng, n)
    g = random_symplectic(rng, n, scale=0.3)
    x = random_algebra(rng, n)

    v = action_differential(g, L, x)
    fd = _fd_tangent(lambda t: act(matrix_exp(t * x.matrix) @ g.matrix, L), v.base)
    action_err = checks.check(
        "action_differential", _relative(frob(v.hat - fd), frob(v.hat)), ctx.tol.differential
    )

    base = random_lagrangian(rng, n)
    _, W = random_chart_point(rng, base, scale=0.5)
    H = random_tangent(rng, W)
    z = minimal_lift(H).matrix
    psi_at = lambda t: chart_forward(base, act(matrix_exp(t * z), W)).psi
    fd_chart = (psi_at(FD_STEP) - psi_at(-FD_STEP)) / (2.0 * FD_STEP)
    exact = chart_differential(base, W, H)
    chart_err = checks.check(
        "chart_differential", _relative(frob(exact - fd_chart), frob(exact)), ctx.tol.differential
    )
    back = chart_differential_inverse(base, W, exact)
    inverse_err = checks.check(
        "chart_differential_inverse", _relative(frob(back.hat - H.hat), frob(H.hat)), ctx.tol.verification
    )
    return {"n": n, "action_differential": action_err, "chart_differential": chart_err,
            "chart_differential_inverse": inverse_err}


@suite("section", "local cross section u_L(L0) = L", trials=200, n=6)
def section_trial(index, rng, ctx, checks):
    n = _dim(index, ctx)
    L0 = random_lagrangian(rng, n)
    _, L = random_chart_point(rng, L0)
    u = cross_section(L0, L)
    j = standard_J(n).matrix
    section_err = checks.check("section_error", projector_distance(act(u, L0), L), ctx.tol.section)
    commute = checks.check("commutes_with_J", frob(u.matrix @ j - j @ u.matrix), ctx.tol.section)
    symp = checks.check("symplectic_defect", frob(u.matrix.T @ j @ u.matrix - j), ctx.tol.section)

    g = random_symplectic(rng, n, scale=0.3)
    base = base_lagrangian(n)
    _, near = random_chart_point(rng, base)
    W = act(g, near)
    moved = translated_cross_section(base, g, W)
    scale = 1.0 + frob(g.matrix) ** 2
    translated = checks.check(
        "translated_section", projector_distance(act(moved, act(g, base)), W), ctx.tol.section * scale,
        critical=False,
    )
    return {"n": n, "section_error": section_err, "commutes_with_J": commute,
            "symplectic_defect": symp, "translated_section": translated,
            "section_gap": float(np.linalg.norm(L.symmetry - L0.symmetry, 2))}


@suite("metrics", "A(v) ≤ Q(v), oracle agreement, isotropy projection", trials=500, n=6)
def metrics_trial(index, rng, ctx, checks):
    n = _dim(index, ctx)
    W = random_lagrangian(rng, n)
    v = random_tangent(rng, W)
    a, q, q_oracle = ambient_metric(v), quotient_metric(v), quotient_metric_oracle(v)
    checks.check("ambient_minus_quotient", a - q, ctx.tol.metric)
    oracle_err = checks.check("oracle_error", abs(q - q_oracle), ctx.tol.oracle)

    z = random_algebra(rng, n)
    vertical = isotropy_projection(W, z)
    iso = checks.check("isotropy_defect", isotropy_defect(vertical, W), ctx.tol.verification * (1.0 + frob(z.matrix)))

    L = random_lagrangian(rng, n)
    psi, W2 = random_chart_point(rng, L, scale=0.5)
    h = random_symmetric(rng, n)
    local = chart_ambient_metric(L, psi, h)
    direct = ambient_metric(chart_differential_inverse(L, W2, h))
    chart_err = checks.check("chart_metric_error", abs(local - direct), ctx.tol.verification * (1.0 + direct))
    return {"n": n, "ambient": a, "quotient": q, "quotient_oracle": q_oracle,
            "metric_coincidence": abs(a - q), "oracle_error": oracle_err,
            "isotropy_defect": iso, "chart_metric_error": chart_err}


@suite("lift", "isometric lift of smooth orbit curves", trials=100, n=3, grid_points=1001)
def lift_trial(index, rng, ctx, checks):
    n = _dim(index, ctx)
    grid = np.linspace(0.0, 1.0, ctx.grid_points)
    c = random_smooth_curve(rng, n, grid)
    phi = isometric_lift(c)
    tracking = lift_tracking_error(phi, c)
    checks.check("tracking", tracking, ctx.tol.lift)

    l_a = curve_length_ambient(c)
    l_q = curve_length_quotient(c)
    l_r = curve_length_right(phi)
    l_l_inv = curve_length_left(invert_curve(phi))
    length_gap = checks.check("length_gap", abs(l_r - l_a), ctx.tol.lift)
    duality = checks.check("duality_gap", abs(l_l_inv - l_r), ctx.tol.duality)
    checks.check("ambient_minus_quotient", l_a - l_q, ctx.tol.metric * ctx.grid_points)
    return {"n": n, "tracking": tracking, "length_ambient": l_a, "length_quotient": l_q,
            "length_right": l_r, "length_gap": length_gap, "duality_gap": duality}


@suite("duality", "L_L(α⁻¹) = L_R(α) on group geodesics", trials=100, n=3, grid_points=1001)
def duality_trial(index, rng, ctx, checks):
    n = _dim(index, ctx)
    g0 = random_symplectic(rng, n, scale=0.3)
    v0 = random_algebra(rng, n, scale=0.5)
    grid = np.linspace(0.0, 1.0, ctx.grid_points)
    alpha = group_curve(grid, [group_geodesic(g0, v0, t) for t in grid])
    l_r = curve_length_right(alpha)
    l_l_inv = curve_length_left(invert_curve(alpha))
    gap = checks.check("duality_gap", abs(l_l_inv - l_r), ctx.tol.duality)
    start = checks.check("start_error", frob(alpha.points[0].matrix - g0.matrix), ctx.tol.construction)
    return {"n": n, "length_right": l_r, "length_left_inverse": l_l_inv, "duality_gap": gap,
            "start_error": start}


@suite("geodesic", "closed-form orbit geodesics", trials=100, n=4, grid_points=21)
def geodesic_trial(index, rng, ctx, checks):
    n = _dim(index, ctx)
    out = {"n": n}
    if n == 1:
        s, t = rng.uniform(0.2, 1.5), rng.uniform(0.1, 1.0)
        L0 = base_lagrangian(1)
        xi = orbit_geodesic(L0, tangent_from_coords(L0, [[s]]), t)
        expected = from_frame([[np.sin(s * t)], [np.cos(s * t)]])
        out["rotation_error"] = checks.check("rotation_error", projector_distance(xi, expected), ctx.tol.verification)

        theta = rng.uniform(0.1, 1.2)
        report = distance_upper_bounds(L0, from_frame([[np.sin(theta)], [np.cos(theta)]]), grid_points=201)
        if report.geodesic_available:
            out["angle_error"] = checks.check("angle_error", abs(report.geodesic_path - theta), ctx.tol.distance)
        else:
            checks.fail("geodesic path unavailable in the rotation case")

    L = random_lagrangian(rng, n)
    w = random_tangent(rng, L)
    out["start_error"] = checks.check(
        "start_error", projector_distance(orbit_geodesic(L, w, 0.0), L), ctx.tol.verification
    )
    fd = _fd_tangent(lambda t: orbit_geodesic(L, w, t), L)
    out["velocity_error"] = checks.check(
        "velocity_error", _relative(frob(fd - w.hat), frob(w.hat)), ctx.tol.geodesic
    )

    curve = geodesic_curve(L, w, np.linspace(0.0, 1.0, ctx.grid_points))
    out["lagrangian_defect"] = checks.check(
        "lagrangian_defect", max(p.lagrangian_defect() for p in curve.points), ctx.tol.lagrangian
    )
    speeds = np.array([ambient_metric(v) for v in curve.velocities])
    out["speed_drift"] = checks.check(
        "speed_drift", float(np.max(np.abs(speeds - ambient_metric(w)))),
        ctx.tol.verification * (1.0 + ambient_metric(w)), critical=False,
    )
    return out


@suite("distance", "upper bounds on d_A from three joining paths", trials=100, n=4, grid_points=201)
def distance_trial(index, rng, ctx, checks):
    n = _dim(index, ctx)
    S = random_lagrangian(rng, n)
    psi, T = random_chart_point(rng, S, scale=0.5)
    report = distance_upper_bounds(S, T, grid_points=ctx.grid_points)
    out = {"n": n, "minimum": report.minimum}
    if report.minimum is None:
        checks.fail("no joining path available")
        return out

    # any curve has ‖P_T − P_S‖_F ≤ √2·L_A
    floor = projector_distance(S, T) / np.sqrt(2.0)
    out["lower_bound"] = floor
    checks.check("below_lower_bound", floor - report.minimum, ctx.tol.ode)
    for key in ("chart", "geodesic", "section"):
        if getattr(report, f"{key}_available"):
            out[f"{key}_path"] = getattr(report, f"{key}_path")
            out[f"{key}_endpoint_error"] = checks.check(
                f"{key}_endpoint_error", getattr(report, f"{key}_endpoint_error"), ENDPOINT_TOL
            )
        else:
            checks.warn(f"{key} path unavailable")
    return out


@suite("cauchy", "summable steps give Cauchy projector sequences", trials=50, n=4)
def cauchy_trial(index, rng, ctx, checks):
    n = _dim(index, ctx)
    L = random_lagrangian(rng, n)
    steps = random_summable_steps(rng, n, steps=12)
    probe = cauchy_probe(L, steps)
    violation = checks.check("tail_violation", probe.max_violation, ctx.tol.cauchy)
    excess = checks.check(
        "length_excess", float(np.max(probe.step_lengths - probe.step_norms)), ctx.tol.ode
    )
    return {"n": n, "tail_violation": violation, "length_excess": excess,
            "final_gap": probe.final_gap, "total_norm": float(probe.tails[0])}


@suite("strict-inclusion", "‖P_{Gr_I} − P_{L0}‖_F = √n, corner −1/2", trials=64, n=64, fixed_trials=True)
def strict_inclusion_trial(index, rng, ctx, checks):
    n = index + 1
    report = strict_inclusion_demo(n)
    hs = checks.check("hs_error", abs(report.hs_norm - np.sqrt(n)), ctx.tol.strict)
    corner = checks.check("corner_error", abs(report.corner_block_value + 0.5), ctx.tol.strict)
    spread = checks.check("corner_spread", report.corner_spread, ctx.tol.strict)
    return {"n": n, "hs_norm": report.hs_norm, "corner_block_value": report.corner_block_value,
            "hs_error": hs, "corner_error": corner, "corner_spread": spread}


# ── Runner ────────────────────────────────────────────────────────────────────

def suite_names() -> list:
    return sorted(SUITES)


def _run_trial(s: Suite, index: int, rng, ctx: SuiteContext) -> dict:
    checks = TrialChecks()
    try:
        metrics = s.trial(index, rng, ctx, checks) or {}
    except (SympGrassError, np.linalg.LinAlgError) as exc:
        logger.warning(f"[Suite {s.name}] trial {index} failed: {type(exc).__name__}: {exc}")
        checks.fail(f"{type(exc).__name__}: {exc}")
        metrics = {}
    verdict = aggregate_validation_results(checks)
    if verdict["decision"] == "fail":
        logger.debug(f"[Suite {s.name}] trial {index}: {verdict['critical']}")
    return {"trial": index, "pass": verdict["decision"] == "pass", **metrics,
            "critical": verdict["critical"], "warning": verdict["warning"]}


def _summarise(records: list) -> dict:
    metrics = {"trials": float(len(records)),
               "failed_trials": float(sum(not r["pass"] for r in records))}
    keys = sorted({k for r in records for k, v in r.items()
                   if k not in ("trial", "pass", "n") and isinstance(v, (int, float)) and not isinstance(v, bool)})
    for key in keys:
        values = [float(r[key]) for r in records if isinstance(r.get(key), (int, float))]
        values = [v for v in values if np.isfinite(v)]
        metrics[f"max_{key}"] = max(values) if values else None
    return metrics


def resolve(name: str, cfg: ExperimentConfig) -> tuple:
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(suite_names())}")
    s = SUITES[name]
    n = cfg.n if cfg.n is not None else s.n
    trials = n if s.fixed_trials else (cfg.trials if cfg.trials is not None else s.trials)
    ctx = SuiteContext(n=n, grid_points=cfg.grid_points or s.grid_points, tol=cfg.tolerances)
    return s, ctx, trials


def run_suite(name: str, cfg: ExperimentConfig) -> ExperimentReport:
    """
    Run one suite and assemble its report.

    Parameters
    ----------
    name : suite identifier (see suite_names())
    cfg  : experiment configuration; cfg.output_path / cfg.csv_path, when set,
           receive the JSON report / CSV table

    Returns
    -------
    ExperimentReport; pass is the conjunction of every trial's checks.
    """
    s, ctx, trials = resolve(name, cfg)
    logger.info(f"[Suite {name}] {trials} trials, n ≤ {ctx.n}, seed {cfg.seed}, jobs {cfg.jobs}")

    generators = trial_generators(cfg.seed, trials)
    records = Parallel(n_jobs=cfg.jobs, backend="threading")(
        delayed(_run_trial)(s, i, rng, ctx) for i, rng in enumerate(generators)
    )
    records = sorted(records, key=lambda r: r["trial"])

    report = ExperimentReport(
        name=name,
        passed=all(r["pass"] for r in records),
        metrics=_summarise(records),
        per_trial=records,
        config={"suite": name, "n": ctx.n, "seed": cfg.seed, "trials": trials,
                "grid_points": ctx.grid_points, "tolerances": cfg.tolerances.model_dump()},
        seed_algorithm=SEED_ALGORITHM,
    )
    failed = int(report.metrics["failed_trials"])
    logger.info(f"[Suite {name}] {'PASS' if report.passed else 'FAIL'} ({failed}/{trials} trials failed)")

    if cfg.output_path is not None:
        write_report(report, cfg.output_path)
    if cfg.csv_path is not None:
        emit_csv(report, cfg.csv_path)
    return report


def describe_suites() -> list:
    return [(s.name, s.description, s.trials, s.n) for s in (SUITES[k] for k in suite_names())]
