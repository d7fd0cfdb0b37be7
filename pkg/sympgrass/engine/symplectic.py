# sympgrass/engine/symplectic.py
# Symplectic group Sp(2n) and its Lie algebra sp(2n)
#
# Finite truncation of the restricted symplectic group: every element is a
# 2n×2n matrix g with g*Jg = J, and the Hilbert-Schmidt size ‖g−1‖_F is kept
# on the element so experiments can follow it across n.
#
# Provides:
#   standard_J            block complex structure [[0,−I],[I,0]]
#   is_symplectic / is_algebra / is_complex_linear   membership checks
#   random_algebra_element   seeded sampler, exact membership by projection
#   group_exp / group_geodesic
#   curve_length_right / curve_length_left / invert_curve   invariant lengths

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.integrate import trapezoid

from sympgrass.engine.errors import InvalidInput, SingularInput
from sympgrass.engine.numerics import (
    CONSTRUCTION_TOL,
    VERIFICATION_TOL,
    Matrix,
    as_matrix,
    frob,
    matrix_exp,
    require_square,
    smallest_singular_value,
)


# ── Types ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ComplexStructure:
    n: int
    matrix: Matrix = field(repr=False)


@dataclass(frozen=True)
class SymplecticElement:
    matrix: Matrix = field(repr=False)
    hs_deviation: float

    @property
    def n(self) -> int:
        return self.matrix.shape[0] // 2

    def inverse(self) -> "SymplecticElement":
        # g⁻¹ = −J g* J for symplectic g
        j = standard_J(self.n).matrix
        inv = -j @ self.matrix.T @ j
        return SymplecticElement(matrix=inv, hs_deviation=frob(inv - np.eye(inv.shape[0])))

    def __matmul__(self, other: "SymplecticElement") -> "SymplecticElement":
        return symplectic_element(self.matrix @ other.matrix)


@dataclass(frozen=True)
class AlgebraElement:
    matrix: Matrix = field(repr=False)

    @property
    def n(self) -> int:
        return self.matrix.shape[0] // 2

    @property
    def T(self) -> "AlgebraElement":
        # sp is closed under transposition
        return AlgebraElement(self.matrix.T.copy())

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(self.matrix + other.matrix)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(self.matrix - other.matrix)

    def __rmul__(self, c: float) -> "AlgebraElement":
        return AlgebraElement(float(c) * self.matrix)


@dataclass(frozen=True)
class GroupCurve:
    times: np.ndarray
    points: tuple

    def __post_init__(self):
        require_time_grid(self.times, "group curve")
        if len(self.times) != len(self.points):
            raise InvalidInput(
                f"group curve has {len(self.times)} times but {len(self.points)} points"
            )

    def stack(self) -> np.ndarray:
        return np.stack([p.matrix for p in self.points])


def require_time_grid(times: np.ndarray, what: str) -> None:
    if np.ndim(times) != 1:
        raise InvalidInput(f"{what} times must be one-dimensional")
    if len(times) > 1 and np.any(np.diff(times) <= 0.0):
        raise InvalidInput(f"{what} times must be strictly increasing")


# ── Complex structure ────────────────────────────────────────────────────────

@lru_cache(maxsize=128)
def standard_J(n: int) -> ComplexStructure:
    """J(ξ,η) = (−η,ξ) on R^n × R^n."""
    if int(n) != n or n < 1:
        raise InvalidInput(f"half-dimension must be a positive integer, got {n}", value=n)
    n = int(n)
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = -np.eye(n)
    j[n:, :n] = np.eye(n)
    j.setflags(write=False)
    return ComplexStructure(n=n, matrix=j)


def _half_dimension(a: Matrix) -> int:
    m = a.shape[0]
    if m % 2:
        raise InvalidInput(f"operator dimension must be even, got {m}", value=m)
    return m // 2


def J_for(a: Matrix) -> Matrix:
    return standard_J(_half_dimension(a)).matrix


def symplectic_form(xi, eta) -> float:
    """w(ξ,η) = ⟨Jξ, η⟩."""
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    if xi.shape != eta.shape or xi.ndim != 1 or xi.size % 2:
        raise InvalidInput("symplectic_form needs two vectors of equal even length")
    j = standard_J(xi.size // 2).matrix
    return float((j @ xi) @ eta)


# ── Membership ───────────────────────────────────────────────────────────────

def is_symplectic(g: Matrix, tol: float = VERIFICATION_TOL) -> bool:
    g = require_square(g, "group element")
    j = J_for(g)
    return frob(g.T @ j @ g - j) <= tol


def is_algebra(x: Matrix, tol: float = VERIFICATION_TOL) -> bool:
    x = require_square(x, "algebra element")
    j = J_for(x)
    return frob(x @ j + j @ x.T) <= tol


def is_complex_linear(g: Matrix, tol: float = VERIFICATION_TOL) -> bool:
    """g commutes with J, i.e. g is complex linear on H_J."""
    g = require_square(g, "operator")
    j = J_for(g)
    return frob(g @ j - j @ g) <= tol


def symplectic_element(g: Matrix, tol: float = VERIFICATION_TOL) -> SymplecticElement:
    """Validate and wrap a group member; tolerance scales with ‖g‖_F²."""
    g = require_square(g, "group element")
    j = J_for(g)
    defect = frob(g.T @ j @ g - j)
    limit = tol * (1.0 + frob(g) ** 2)
    if defect > limit:
        raise InvalidInput(f"matrix is not symplectic (defect {defect:.3e})", value=defect, limit=limit)
    sigma_min = smallest_singular_value(g)
    if sigma_min <= CONSTRUCTION_TOL:
        raise SingularInput("group element is numerically singular", value=sigma_min, limit=CONSTRUCTION_TOL)
    return SymplecticElement(matrix=np.array(g), hs_deviation=frob(g - np.eye(g.shape[0])))


def symplectic_elements(stack: np.ndarray, tol: float = VERIFICATION_TOL) -> tuple:
    """Batched symplectic_element over a (k, 2n, 2n) stack, one einsum for the defects."""
    stack = np.asarray(stack, dtype=float)
    if stack.ndim != 3 or stack.shape[0] == 0 or stack.shape[1] != stack.shape[2]:
        raise InvalidInput(f"expected a non-empty stack of square matrices, got shape {stack.shape}")
    if not np.all(np.isfinite(stack)):
        raise InvalidInput("group elements have non-finite entries")
    j = J_for(stack[0])
    defects = np.linalg.norm(np.einsum("kba,bc,kcd->kad", stack, j, stack) - j, axis=(1, 2))
    limits = tol * (1.0 + np.linalg.norm(stack, axis=(1, 2)) ** 2)
    worst = int(np.argmax(defects - limits))
    if defects[worst] > limits[worst]:
        raise InvalidInput(
            f"matrix {worst} of the stack is not symplectic (defect {defects[worst]:.3e})",
            value=float(defects[worst]), limit=float(limits[worst]),
        )
    # g*Jg = J forces det g = ±1
    deviations = np.linalg.norm(stack - np.eye(stack.shape[1]), axis=(1, 2))
    return tuple(SymplecticElement(matrix=g.copy(), hs_deviation=float(d)) for g, d in zip(stack, deviations))


def algebra_element(x: Matrix, tol: float = VERIFICATION_TOL) -> AlgebraElement:
    x = require_square(x, "algebra element")
    j = J_for(x)
    defect = frob(x @ j + j @ x.T)
    limit = tol * (1.0 + frob(x))
    if defect > limit:
        raise InvalidInput(f"matrix is not in sp (defect {defect:.3e})", value=defect, limit=limit)
    return AlgebraElement(np.array(x))


def identity_element(n: int) -> SymplecticElement:
    standard_J(n)
    return SymplecticElement(matrix=np.eye(2 * n), hs_deviation=0.0)


# ── Algebra sampler ──────────────────────────────────────────────────────────

def algebra_projection(m: Matrix) -> Matrix:
    """Projection (m + J m* J)/2 onto sp: the fixed points of m ↦ J m* J."""
    m = require_square(m, "matrix")
    j = J_for(m)
    return 0.5 * (m + j @ m.T @ j)


def random_algebra_element(n: int, scale: float, seed) -> AlgebraElement:
    if scale < 0:
        raise InvalidInput(f"scale must be non-negative, got {scale}", value=scale)
    standard_J(n)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    m = rng.standard_normal((2 * n, 2 * n)) / np.sqrt(2 * n)
    return AlgebraElement(float(scale) * algebra_projection(m))


# ── Exponential and group geodesics ──────────────────────────────────────────

def group_exp(x: AlgebraElement) -> SymplecticElement:
    return symplectic_element(matrix_exp(x.matrix))


def group_geodesic(g0: SymplecticElement, v0: AlgebraElement, t: float) -> SymplecticElement:
    """α(t) = g0·exp(t v0*)·exp(t(v0 − v0*)), with α(0) = g0 and α'(0) = g0·v0."""
    if t == 0:
        return g0
    v = v0.matrix
    return symplectic_element(g0.matrix @ matrix_exp(t * v.T) @ matrix_exp(t * (v - v.T)))


# ── Invariant lengths ────────────────────────────────────────────────────────

def group_curve(times: Sequence[float], points: Sequence) -> GroupCurve:
    pts = tuple(p if isinstance(p, SymplecticElement) else symplectic_element(p) for p in points)
    return GroupCurve(times=np.asarray(times, dtype=float), points=pts)


def time_derivative(values: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Central differences inside, one-sided second order at the ends."""
    edge = 2 if len(times) >= 3 else 1
    return np.gradient(values, times, axis=0, edge_order=edge)


def _speeds(c: GroupCurve, side: str) -> np.ndarray:
    if len(c.points) < 2:
        raise InvalidInput("curve length needs at least two points", value=len(c.points), limit=2)
    alpha = c.stack()
    dalpha = time_derivative(alpha, c.times)
    if side == "right":
        # α̇α⁻¹ = (α^{-T} α̇^T)^T
        gen = np.linalg.solve(np.transpose(alpha, (0, 2, 1)), np.transpose(dalpha, (0, 2, 1)))
    else:
        gen = np.linalg.solve(alpha, dalpha)
    return np.linalg.norm(gen, ord="fro", axis=(1, 2))


def curve_length_right(c: GroupCurve) -> float:
    """∫‖α̇α⁻¹‖_F dt, right invariant."""
    return float(trapezoid(_speeds(c, "right"), c.times))


def curve_length_left(c: GroupCurve) -> float:
    """∫‖α⁻¹α̇‖_F dt, left invariant."""
    return float(trapezoid(_speeds(c, "left"), c.times))


def invert_curve(c: GroupCurve) -> GroupCurve:
    alpha = c.stack()
    sigma_min = float(np.min(np.linalg.svd(alpha, compute_uv=False)[:, -1]))
    if sigma_min <= CONSTRUCTION_TOL:
        raise SingularInput("curve point is singular", value=sigma_min, limit=CONSTRUCTION_TOL)
    inv = np.linalg.inv(alpha)
    deviations = np.linalg.norm(inv - np.eye(inv.shape[1]), axis=(1, 2))
    points = tuple(SymplecticElement(matrix=g, hs_deviation=float(d)) for g, d in zip(inv, deviations))
    return GroupCurve(times=c.times.copy(), points=points)


def exp_group_curve(x: AlgebraElement, times: Sequence[float]) -> GroupCurve:
    """Sampled one-parameter subgroup t ↦ exp(t x)."""
    times = np.asarray(times, dtype=float)
    return GroupCurve(times=times, points=tuple(group_exp(float(t) * x) for t in times))


def as_algebra(x) -> AlgebraElement:
    return x if isinstance(x, AlgebraElement) else algebra_element(as_matrix(x))
