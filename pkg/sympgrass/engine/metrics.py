# sympgrass/engine/metrics.py
# Ambient and quotient metrics on tangent vectors of the orbit
#
# A tangent vector at W is a symmetric operator v supported on W (see
# lagrangian.TangentVector). Two norms live on it:
#   ambient   A(W,v) = ‖v P_W‖_F
#   quotient  Q(W,v) = inf ‖z‖_F over z ∈ sp with d_1π_W(z) = v
# The infimum is attained at the horizontal lift z0 = −J v̂, which is the
# (1−P) z P block and trace-orthogonal to the isotropy algebra of W.
# quotient_metric_oracle solves the same infimum by dense least squares
# over a basis of sp, independently of the closed form.

from functools import lru_cache

import numpy as np
import scipy.linalg as sla

from sympgrass.engine.errors import InconsistentTangent, InvalidInput
from sympgrass.engine.lagrangian import (
    LagrangianSubspace,
    TangentVector,
    action_differential,
    chart_inverse,
    lift_psi,
)
from sympgrass.engine.numerics import CONSTRUCTION_TOL, Matrix, frob, require_square, sym
from sympgrass.engine.symplectic import AlgebraElement, identity_element, standard_J

ORACLE_MAX_N = 8


def ambient_metric(v: TangentVector) -> float:
    """tr_W(v*v)^{1/2} = ‖v P_W‖_F; hat is already supported on W."""
    return frob(v.hat @ v.base.projector)


def minimal_lift(v: TangentVector) -> AlgebraElement:
    """z0 = −J v̂: the unique lift of v orthogonal to the isotropy algebra."""
    return AlgebraElement(-v.base.J @ v.hat)


def quotient_metric(v: TangentVector) -> float:
    return frob(minimal_lift(v).matrix)


@lru_cache(maxsize=16)
def algebra_basis(n: int) -> np.ndarray:
    """Frobenius-orthonormal basis of sp(2n): −J S_k for an orthonormal basis S_k of symmetric matrices.

    Shape (n(2n+1), 2n, 2n), cached and read-only.
    """
    j = standard_J(n).matrix
    m = 2 * n
    rows, cols = np.triu_indices(m)
    sym_basis = np.zeros((rows.size, m, m))
    k = np.arange(rows.size)
    weight = np.where(rows == cols, 1.0, 1.0 / np.sqrt(2.0))
    sym_basis[k, rows, cols] = weight
    sym_basis[k, cols, rows] = weight
    basis = np.einsum("ab,kbc->kac", -j, sym_basis)
    basis.setflags(write=False)
    return basis


def oracle_lift(v: TangentVector) -> AlgebraElement:
    """Minimum-norm z ∈ sp with P J z P = v̂, by least squares over algebra_basis."""
    n = v.base.n
    if n > ORACLE_MAX_N:
        raise InvalidInput(f"oracle enumerates a dense basis and is limited to n ≤ {ORACLE_MAX_N}", value=n)
    p, j = v.base.projector, v.base.J
    basis = algebra_basis(n)
    columns = ((p @ j) @ basis @ p).reshape(len(basis), -1).T
    target = v.hat.reshape(-1)

    coeffs, _, _, _ = sla.lstsq(columns, target, cond=1e-12)
    residual = float(np.linalg.norm(columns @ coeffs - target))
    if residual > 1e-8 * (1.0 + float(np.linalg.norm(target))):
        raise InconsistentTangent(
            f"lift constraint has no exact solution (residual {residual:.3e})", value=residual
        )
    return AlgebraElement(np.tensordot(coeffs, basis, axes=1))


def quotient_metric_oracle(v: TangentVector) -> float:
    return frob(oracle_lift(v).matrix)


def isotropy_projection(W: LagrangianSubspace, z: AlgebraElement) -> AlgebraElement:
    """Q_W(z) = z − z0, where z0 is the minimal lift of d_1π_W(z)."""
    dz = action_differential(identity_element(W.n), W, z)
    return z - minimal_lift(dz)


def trace_inner(a: Matrix, b: Matrix) -> float:
    return float(np.sum(a * b))


def chart_ambient_metric(L: LagrangianSubspace, psi: Matrix, h: Matrix) -> float:
    """Ambient metric in the chart at L: ‖(η⁻¹)* Ĥ η⁻¹ P_W‖_F with η = (1 − J ψ̂ P_L)|_L."""
    h = require_square(h, "chart tangent")
    W = chart_inverse(L, psi).W
    eta = (np.eye(L.frame.shape[0]) - L.J @ lift_psi(L, sym(np.asarray(psi, dtype=float))) @ L.projector) @ L.projector
    eta_inv = np.linalg.pinv(eta, rcond=CONSTRUCTION_TOL)       # W → L, zero on W^⊥
    local = eta_inv.T @ lift_psi(L, sym(h)) @ eta_inv
    return frob(local @ W.projector)
