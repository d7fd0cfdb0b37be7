# sympgrass/engine/numerics.py
# Dense real linear-algebra kernel
#
# Every operator in the library is a small dense float64 matrix. This module
# wraps the numpy/scipy primitives the geometry layers consume and enforces
# the input contracts (square, symmetric, finite, well conditioned) up front,
# so higher layers can assume clean inputs.
#
# Tolerance policy: mixed absolute+relative, 1e-10 construction,
# 1e-8 verification, 1e-6 ODE. Every threshold is a keyword override.

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.linalg as sla

from sympgrass.engine.errors import EmptyRange, InvalidInput, NotPSD, RankDeficient, SingularInput

Matrix = np.ndarray

CONSTRUCTION_TOL = 1e-10
VERIFICATION_TOL = 1e-8
ODE_TOL = 1e-6
SYMMETRY_TOL = 1e-8
RANK_CUTOFF = 1e-10


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray   # ascending
    eigenvectors: Matrix      # orthogonal, one eigenvector per column

    def reconstruct(self) -> Matrix:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


# ── Small helpers ────────────────────────────────────────────────────────────

def frob(a: Matrix) -> float:
    return float(np.linalg.norm(a, "fro"))


def op_norm(a: Matrix) -> float:
    return float(np.linalg.norm(a, 2))


def sym(a: Matrix) -> Matrix:
    return 0.5 * (a + a.T)


def as_matrix(a, name: str = "matrix") -> Matrix:
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2:
        raise InvalidInput(f"{name} must be two-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name} has non-finite entries")
    return arr


def require_square(a, name: str = "matrix") -> Matrix:
    arr = as_matrix(a, name)
    if arr.shape[0] != arr.shape[1]:
        raise InvalidInput(f"{name} must be square, got shape {arr.shape}", value=arr.shape)
    return arr


def require_symmetric(a, name: str = "matrix", tol: float = SYMMETRY_TOL) -> Matrix:
    arr = require_square(a, name)
    gap = frob(arr - arr.T)
    limit = tol * (1.0 + frob(arr))
    if gap > limit:
        raise InvalidInput(f"{name} is not symmetric (asymmetry {gap:.3e})", value=gap, limit=limit)
    return sym(arr)


def _check_finite(a: Matrix, what: str) -> Matrix:
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"{what} produced non-finite entries")
    return a


# ── Spectral kernel ──────────────────────────────────────────────────────────

def sym_eig(a: Matrix, tol: float = SYMMETRY_TOL) -> SpectralDecomposition:
    """Eigen-decomposition of a symmetric matrix, eigenvalues ascending.

    Eigenvector signs are gauge-fixed (largest-magnitude entry positive) so
    the output is deterministic.
    """
    s = require_symmetric(a, "sym_eig input", tol)
    values, vectors = sla.eigh(s)
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return SpectralDecomposition(eigenvalues=values, eigenvectors=vectors * signs)


def psd_sqrt(a: Matrix, tol: float = CONSTRUCTION_TOL) -> Matrix:
    """Principal square root of a symmetric positive semidefinite matrix."""
    dec = sym_eig(a)
    lowest = float(dec.eigenvalues[0]) if dec.eigenvalues.size else 0.0
    if lowest < -tol:
        raise NotPSD(f"matrix has eigenvalue {lowest:.3e} below -{tol:g}", value=lowest, limit=-tol)
    roots = np.sqrt(np.clip(dec.eigenvalues, 0.0, None))
    v = dec.eigenvectors
    return _check_finite(sym((v * roots) @ v.T), "psd_sqrt")


def sym_function(a: Matrix, fn: Callable[[np.ndarray], np.ndarray]) -> Matrix:
    """Apply a scalar function to a symmetric matrix through its spectrum."""
    dec = sym_eig(a)
    v = dec.eigenvectors
    return _check_finite(sym((v * fn(dec.eigenvalues)) @ v.T), "sym_function")


# ── Exponential / logarithm ──────────────────────────────────────────────────

def matrix_exp(x: Matrix) -> Matrix:
    """Padé scaling-and-squaring exponential."""
    return _check_finite(sla.expm(require_square(x, "matrix_exp input")), "matrix_exp")


def matrix_log(u: Matrix) -> Matrix:
    """Principal logarithm by inverse scaling-and-squaring; real inputs near 1 only."""
    arr = require_square(u, "matrix_log input")
    out = sla.logm(arr)
    if np.iscomplexobj(out):
        if np.max(np.abs(out.imag), initial=0.0) > 1e-9 * (1.0 + np.max(np.abs(out.real), initial=0.0)):
            raise InvalidInput("matrix_log has no real principal branch for this input")
        out = out.real
    return _check_finite(np.asarray(out, dtype=float), "matrix_log")


# ── Polar decomposition ──────────────────────────────────────────────────────

def smallest_singular_value(a: Matrix) -> float:
    values = sla.svdvals(as_matrix(a))
    return float(values[-1]) if values.size else 0.0


def polar_decompose(g: Matrix, tol: float = CONSTRUCTION_TOL) -> tuple[Matrix, Matrix]:
    """Right polar decomposition g = u·p with u orthogonal and p = (g*g)^{1/2}."""
    arr = require_square(g, "polar input")
    sigma_min = smallest_singular_value(arr)
    if sigma_min < tol:
        raise SingularInput(
            f"polar input is numerically singular (sigma_min={sigma_min:.3e})",
            value=sigma_min, limit=tol,
        )
    u, p = sla.polar(arr, side="right")
    return _check_finite(u, "polar"), _check_finite(sym(p), "polar")


# ── Linear ODE ───────────────────────────────────────────────────────────────

def rk4_linear_ode(field: Callable[[float], Matrix], t_grid: Sequence[float], init: Matrix,
                   vectorized: bool = False) -> np.ndarray:
    """Classical RK4 for phi' = X(t) phi on a strictly increasing grid.

    With vectorized=True, field accepts an array of times and returns the
    stacked values (a scipy spline does), and is called twice in total.

    Returns an array of shape (len(t_grid), *init.shape) with phi(t_grid[0]) = init.
    """
    times = np.asarray(t_grid, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise InvalidInput("rk4_linear_ode needs a non-empty one-dimensional time grid")
    if times.size > 1 and np.any(np.diff(times) <= 0.0):
        raise InvalidInput("rk4_linear_ode time grid must be strictly increasing")
    phi = as_matrix(init, "initial value").copy()

    steps = np.diff(times)
    mids = times[:-1] + 0.5 * steps
    if vectorized:
        nodes, halves = np.asarray(field(times)), np.asarray(field(mids))
    else:
        nodes = np.array([field(t) for t in times])
        halves = np.array([field(t) for t in mids])

    out = np.empty((times.size,) + phi.shape)
    out[0] = phi
    for i, h in enumerate(steps):
        x0, xm, x1 = nodes[i], halves[i], nodes[i + 1]
        k1 = x0 @ phi
        k2 = xm @ (phi + 0.5 * h * k1)
        k3 = xm @ (phi + 0.5 * h * k2)
        k4 = x1 @ (phi + h * k3)
        phi = phi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = phi
    return _check_finite(out, "rk4_linear_ode")


# ── Ranges and frames ────────────────────────────────────────────────────────

def qr_orthonormal_range(a: Matrix, cutoff: float = RANK_CUTOFF) -> Matrix:
    """Orthonormal columns spanning range(a), rank cut at cutoff * sigma_max."""
    arr = as_matrix(a, "range input")
    values = sla.svdvals(arr)
    if values.size == 0 or values[0] == 0.0:
        raise EmptyRange("matrix has an empty range")
    rank = int(np.sum(values > cutoff * values[0]))

    q, r, _ = sla.qr(arr, mode="economic", pivoting=True)
    q = q[:, :rank]
    signs = np.sign(np.diag(r)[:rank])
    signs[signs == 0] = 1.0
    return q * signs


def orthonormal_frame(f: Matrix, cutoff: float = RANK_CUTOFF) -> Matrix:
    """Gram-Schmidt gauge: QR with positive diagonal, column order preserved."""
    arr = as_matrix(f, "frame")
    if arr.shape[1] == 0 or arr.shape[0] < arr.shape[1]:
        raise RankDeficient(f"frame must have 1..rows columns: {arr.shape}")
    q, r = sla.qr(arr, mode="economic")
    diag = np.diag(r)
    scale = max(float(np.max(np.abs(diag))), 1e-300)
    weakest = float(np.min(np.abs(diag)))
    if weakest <= cutoff * scale:
        raise RankDeficient(
            f"frame columns are numerically dependent (|r_ii| min {weakest:.3e})",
            value=weakest, limit=cutoff * scale,
        )
    return q * np.sign(diag)
