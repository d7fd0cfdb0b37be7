# sympgrass/engine/samplers.py
# Seeded generators of domain objects for the experiment suites
#
# All randomness flows from numpy's PCG64. A suite builds one SeedSequence
# from the configured seed and spawns one child per trial, so trials can be
# scheduled in any order and still draw the same numbers.

from typing import Sequence

import numpy as np
from scipy.stats import unitary_group

from sympgrass.engine.lagrangian import (
    LagrangianSubspace,
    TangentVector,
    act,
    base_lagrangian,
    chart_inverse,
    chart_tangent,
    tangent_from_coords,
)
from sympgrass.engine.geodesics import OrbitCurve, orbit_curve
from sympgrass.engine.numerics import Matrix, sym
from sympgrass.engine.symplectic import (
    AlgebraElement,
    SymplecticElement,
    random_algebra_element,
    symplectic_element,
)

SEED_ALGORITHM = "numpy.PCG64/SeedSequence"


def trial_generators(seed: int, count: int) -> list[np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.default_rng(child) for child in children]


def random_symmetric(rng: np.random.Generator, n: int, scale: float = 1.0) -> Matrix:
    return scale * sym(rng.standard_normal((n, n))) / np.sqrt(n)


# ── Group elements ───────────────────────────────────────────────────────────

def random_shear(rng: np.random.Generator, n: int, scale: float = 1.0) -> SymplecticElement:
    """[[1, S],[0, 1]] or its transpose, S symmetric."""
    s = random_symmetric(rng, n, scale)
    g = np.eye(2 * n)
    if rng.random() < 0.5:
        g[:n, n:] = s
    else:
        g[n:, :n] = s
    return symplectic_element(g)


def random_rotation(rng: np.random.Generator, n: int) -> SymplecticElement:
    """Haar unitary of C^n realised on R^n × R^n; commutes with J."""
    u = unitary_group.rvs(n, random_state=rng) if n > 1 else np.array([[np.exp(2j * np.pi * rng.random())]])
    a, b = u.real, u.imag
    return symplectic_element(np.block([[a, -b], [b, a]]))


def random_symplectic(rng: np.random.Generator, n: int, scale: float = 1.0, factors: int = 3) -> SymplecticElement:
    """Product of alternating rotations and shears."""
    g = random_rotation(rng, n).matrix
    for _ in range(factors):
        g = random_shear(rng, n, scale).matrix @ g
        g = random_rotation(rng, n).matrix @ g
    return symplectic_element(g)


def random_algebra(rng: np.random.Generator, n: int, scale: float = 1.0) -> AlgebraElement:
    return random_algebra_element(n, scale, rng)


# ── Orbit points and tangents ────────────────────────────────────────────────

def random_lagrangian(rng: np.random.Generator, n: int, scale: float = 0.5) -> LagrangianSubspace:
    return act(random_symplectic(rng, n, scale), base_lagrangian(n))


def random_chart_point(rng: np.random.Generator, L: LagrangianSubspace, scale: float = 1.0):
    """(ψ, W) with W = φ_L⁻¹(ψ); W is transversal to L^⊥ by construction."""
    psi = random_symmetric(rng, L.n, scale)
    return psi, chart_inverse(L, psi).W


def random_tangent(rng: np.random.Generator, W: LagrangianSubspace, scale: float = 1.0) -> TangentVector:
    return tangent_from_coords(W, random_symmetric(rng, W.n, scale))


# ── Curves ───────────────────────────────────────────────────────────────────

def polynomial_chart_curve(L: LagrangianSubspace, coefficients: Sequence[Matrix], t_grid) -> OrbitCurve:
    """ξ(t) = φ_L⁻¹(Σ_k c_k t^k) with exact velocities from the chart differential."""
    times = np.asarray(t_grid, dtype=float)
    points, velocities = [], []
    for t in times:
        psi = sum(c * t ** k for k, c in enumerate(coefficients))
        dpsi = sum(k * c * t ** (k - 1) for k, c in enumerate(coefficients) if k > 0)
        v = chart_tangent(L, psi, dpsi)
        points.append(v.base)
        velocities.append(v)
    return orbit_curve(times, points, velocities)


def random_smooth_curve(rng: np.random.Generator, n: int, t_grid, scale: float = 0.3) -> OrbitCurve:
    """Cubic chart curve through a random base point."""
    L = random_lagrangian(rng, n)
    coefficients = [random_symmetric(rng, n, scale) for _ in range(4)]
    return polynomial_chart_curve(L, coefficients, t_grid)


def random_summable_steps(rng: np.random.Generator, n: int, steps: int, ratio: float = 0.5,
                          scale: float = 0.5) -> list[AlgebraElement]:
    """z_k with ‖z_k‖_F shrinking geometrically, so Σ‖z_k‖ converges."""
    return [random_algebra_element(n, scale * ratio ** k, rng) for k in range(steps)]
