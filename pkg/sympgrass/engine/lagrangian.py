# sympgrass/engine/lagrangian.py
# Lagrangian subspaces of R^n × R^n and the orbit of L0 = {0} × R^n
#
# A subspace is carried by an orthonormal frame (gauge-fixed by QR with
# positive diagonal), its orthogonal projector P and its symmetry ε = 2P − 1.
# Subspaces are compared through projectors only; frames are a chart-level
# convenience.
#
# Covers:
#   from_frame / act                      construction and the group action
#   projection_from_idempotent            projector onto the range of an idempotent
#   chart_forward / chart_inverse         graph charts φ_L
#   chart_differential(_inverse)          η*Hη and (η⁻¹)*Hη⁻¹
#   action_differential                   Xg ↦ P J X P at g(L)
#   cross_section / translated_cross_section
#   isotropy_check / stabilizes
#   strict_inclusion_demo                 ‖P_{Gr_I} − P_{L0}‖_F = √n

import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.linalg as sla

from sympgrass.engine.errors import (
    InvalidInput,
    NotIdempotent,
    NotLagrangian,
    NotTransversal,
    OutOfSectionRadius,
)
from sympgrass.engine.numerics import (
    CONSTRUCTION_TOL,
    VERIFICATION_TOL,
    Matrix,
    as_matrix,
    frob,
    op_norm,
    orthonormal_frame,
    polar_decompose,
    require_square,
    smallest_singular_value,
    sym,
)
from sympgrass.engine.symplectic import (
    AlgebraElement,
    SymplecticElement,
    standard_J,
    symplectic_element,
)

logger = logging.getLogger(__name__)

LAGRANGIAN_TOL = 1e-8
TRANSVERSALITY_TOL = 1e-8
SECTION_RADIUS = 2.0
SECTION_MARGIN = 1e-6
SECTION_WARN_GAP = 1.9   # ‖ε_L − ε_L0‖ above this: conditioning of g_L degrades


# ── Types ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class LagrangianSubspace:
    frame: Matrix = field(repr=False)
    projector: Matrix = field(repr=False)
    symmetry: Matrix = field(repr=False)

    @property
    def n(self) -> int:
        return self.frame.shape[1]

    @property
    def J(self) -> Matrix:
        return standard_J(self.n).matrix

    @property
    def perp_frame(self) -> Matrix:
        # J(L) = L^⊥, so J·frame is an orthonormal frame of L^⊥
        return self.J @ self.frame

    def lagrangian_defect(self) -> float:
        p, j = self.projector, self.J
        return frob(p @ j + j @ p - j)


@dataclass(frozen=True)
class ChartValue:
    base: LagrangianSubspace
    psi: Matrix = field(repr=False)


@dataclass(frozen=True)
class TangentVector:
    """Symmetric operator supported on its base: hat = P·hat·P."""
    base: LagrangianSubspace
    hat: Matrix = field(repr=False)

    @property
    def coords(self) -> Matrix:
        f = self.base.frame
        return sym(f.T @ self.hat @ f)

    def scaled(self, c: float) -> "TangentVector":
        return TangentVector(self.base, float(c) * self.hat)

    def __neg__(self) -> "TangentVector":
        return TangentVector(self.base, -self.hat)


class ChartInverse(NamedTuple):
    W: LagrangianSubspace
    f: SymplecticElement


@dataclass(frozen=True)
class StrictInclusionReport:
    n: int
    hs_norm: float
    corner_block_value: float
    corner_spread: float


# ── Construction ─────────────────────────────────────────────────────────────

def from_frame(f: Matrix, tol: float = LAGRANGIAN_TOL) -> LagrangianSubspace:
    arr = as_matrix(f, "frame")
    rows, cols = arr.shape
    if rows % 2 or rows == 0:
        raise InvalidInput(f"frame must have an even, positive number of rows, got {rows}", value=rows)
    if cols != rows // 2:
        raise NotLagrangian(
            f"a Lagrangian subspace of R^{rows} has dimension {rows // 2}, frame has {cols} columns",
            value=cols, limit=rows // 2,
        )
    q = orthonormal_frame(arr)
    p = sym(q @ q.T)
    j = standard_J(cols).matrix
    defect = frob(p @ j + j @ p - j)
    if defect > tol:
        raise NotLagrangian(f"subspace is not Lagrangian (‖PJ+JP−J‖={defect:.3e})", value=defect, limit=tol)
    return LagrangianSubspace(frame=q, projector=p, symmetry=2.0 * p - np.eye(rows))


def base_lagrangian(n: int) -> LagrangianSubspace:
    """L0 = {0} × R^n."""
    standard_J(n)
    return from_frame(np.vstack([np.zeros((n, n)), np.eye(n)]))


def graph_of_identity(n: int) -> LagrangianSubspace:
    standard_J(n)
    return from_frame(np.vstack([np.eye(n), np.eye(n)]) / np.sqrt(2.0))


def _group_matrix(g) -> Matrix:
    return g.matrix if isinstance(g, SymplecticElement) else require_square(g, "group element")


def act(g, L: LagrangianSubspace, tol: float = LAGRANGIAN_TOL) -> LagrangianSubspace:
    """g·L = g(L). A NotLagrangian here means g was not symplectic."""
    gm = _group_matrix(g)
    if gm.shape[0] != L.frame.shape[0]:
        raise InvalidInput(f"group element of size {gm.shape[0]} cannot act on R^{L.frame.shape[0]}")
    return from_frame(gm @ L.frame, tol=tol)


def projector_distance(a: LagrangianSubspace, b: LagrangianSubspace) -> float:
    return frob(a.projector - b.projector)


hs_distance = projector_distance


def same_subspace(a: LagrangianSubspace, b: LagrangianSubspace, tol: float = VERIFICATION_TOL) -> bool:
    return projector_distance(a, b) <= tol


# ── Projector onto the range of an idempotent ────────────────────────────────

def projection_from_idempotent(q: Matrix, tol: float = VERIFICATION_TOL) -> Matrix:
    """Orthogonal projector onto R(Q): QQ*(1 − (Q − Q*)²)^{-1}.

    1 − (Q−Q*)² = QQ* + (1−Q)*(1−Q) is positive definite for idempotent Q.
    """
    q = require_square(q, "idempotent")
    defect = frob(q @ q - q)
    limit = tol * (1.0 + frob(q) ** 2)
    if defect > limit:
        raise NotIdempotent(f"operator is not idempotent (‖Q²−Q‖={defect:.3e})", value=defect, limit=limit)
    skew = q - q.T
    m = np.eye(q.shape[0]) - skew @ skew
    qq = q @ q.T
    # P = qq·m⁻¹, m symmetric positive definite
    p = sla.solve(m, qq.T, assume_a="pos").T
    return sym(p)


# ── Graph charts ─────────────────────────────────────────────────────────────

def _transversal_block(L: LagrangianSubspace, W: LagrangianSubspace, tol: float) -> Matrix:
    a = L.frame.T @ W.frame
    sigma_min = smallest_singular_value(a)
    if sigma_min <= tol:
        raise NotTransversal(
            f"subspace meets L^⊥ (sigma_min of frame(L)*frame(W) = {sigma_min:.3e})",
            value=sigma_min, limit=tol,
        )
    return a


def chart_forward(L: LagrangianSubspace, W: LagrangianSubspace, tol: float = TRANSVERSALITY_TOL) -> ChartValue:
    """φ_L(W) = J|_{L⊥} T with T = π₁|_W (π₀|_W)⁻¹, in L-frame coordinates."""
    a = _transversal_block(L, W, tol)
    b = L.perp_frame.T @ W.frame
    # T has coordinates B A⁻¹ (L → L^⊥); J sends the L^⊥ frame to −(L frame)
    psi = -np.linalg.solve(a.T, b.T).T
    return ChartValue(base=L, psi=sym(psi))


def lift_psi(L: LagrangianSubspace, psi: Matrix) -> Matrix:
    """ψ̂ = frame·ψ·frame*, the 2n×2n operator supported on L."""
    return L.frame @ psi @ L.frame.T


def _require_chart_matrix(L: LagrangianSubspace, psi, tol: float = CONSTRUCTION_TOL) -> Matrix:
    psi = require_square(psi, "chart value")
    if psi.shape[0] != L.n:
        raise InvalidInput(f"chart value must be {L.n}×{L.n}, got {psi.shape}")
    gap = frob(psi - psi.T)
    if gap > tol * (1.0 + frob(psi)):
        raise InvalidInput(f"chart value is not symmetric (asymmetry {gap:.3e})", value=gap, limit=tol)
    return sym(psi)


def chart_inverse(L: LagrangianSubspace, psi: Matrix) -> ChartInverse:
    """W = f(L) with f = 1 − J ψ̂ P_L, inverse 1 + J ψ̂ P_L, ‖f − 1‖_F = ‖ψ‖_F."""
    psi = _require_chart_matrix(L, psi)
    k = L.J @ lift_psi(L, psi) @ L.projector
    f = symplectic_element(np.eye(k.shape[0]) - k)
    return ChartInverse(W=act(f, L), f=f)


def graph_frame(L: LagrangianSubspace, psi: Matrix) -> Matrix:
    """η in ambient coordinates: columns frame(L) − J frame(L) ψ span W = φ_L⁻¹(ψ)."""
    return L.frame - L.J @ L.frame @ psi


# ── Chart differentials ──────────────────────────────────────────────────────

def chart_differential(L: LagrangianSubspace, W: LagrangianSubspace, H: TangentVector,
                       tol: float = TRANSVERSALITY_TOL) -> Matrix:
    """d_Wφ_L(H) = η*Hη, η: L → W the restriction of W ⊕ L^⊥ → W."""
    if not same_subspace(H.base, W):
        raise InvalidInput("tangent vector is not based at W")
    psi = chart_forward(L, W, tol).psi
    g = graph_frame(L, psi)
    return sym(g.T @ H.hat @ g)


def chart_differential_inverse(L: LagrangianSubspace, W: LagrangianSubspace, h: Matrix,
                               tol: float = TRANSVERSALITY_TOL) -> TangentVector:
    """d_ψφ_L⁻¹(H) = (η⁻¹)*Hη⁻¹ as a tangent vector at W."""
    h = _require_chart_matrix(L, h)
    psi = chart_forward(L, W, tol).psi
    return _chart_pushforward(W, graph_frame(L, psi), h)


def chart_tangent(L: LagrangianSubspace, psi: Matrix, h: Matrix) -> TangentVector:
    """Tangent at W = φ_L⁻¹(ψ) with chart image h, W built from the graph frame."""
    psi = _require_chart_matrix(L, psi)
    h = _require_chart_matrix(L, h)
    g = graph_frame(L, psi)
    return _chart_pushforward(from_frame(g), g, h)


def _chart_pushforward(W: LagrangianSubspace, g: Matrix, h: Matrix) -> TangentVector:
    r = W.frame.T @ g              # η in (L-frame → W-frame) coordinates
    r_inv = np.linalg.inv(r)
    return tangent_from_coords(W, sym(r_inv.T @ h @ r_inv))


# ── Tangent vectors ──────────────────────────────────────────────────────────

def tangent_from_coords(W: LagrangianSubspace, coords: Matrix) -> TangentVector:
    coords = _require_chart_matrix(W, coords)
    return TangentVector(base=W, hat=sym(W.frame @ coords @ W.frame.T))


def tangent_from_hat(W: LagrangianSubspace, hat: Matrix, tol: float = CONSTRUCTION_TOL) -> TangentVector:
    hat = require_square(hat, "tangent operator")
    p = W.projector
    scale = 1.0 + frob(hat)
    asym = frob(hat - hat.T)
    leak = frob(hat - p @ hat @ p)
    if asym > tol * scale or leak > tol * scale:
        raise InvalidInput(
            f"tangent operator must be symmetric and supported on its base "
            f"(asymmetry {asym:.3e}, off-support {leak:.3e})",
            value=max(asym, leak), limit=tol * scale,
        )
    return TangentVector(base=W, hat=sym(p @ hat @ p))


# ── Group action differential ────────────────────────────────────────────────

def action_differential(g, L: LagrangianSubspace, X: AlgebraElement) -> TangentVector:
    """d_gπ_L(Xg) = P_{g(L)} J X |_{g(L)}; JX is symmetric for X ∈ sp."""
    gL = act(g, L)
    p = gL.projector
    hat = p @ gL.J @ X.matrix @ p
    return tangent_from_hat(gL, hat, tol=VERIFICATION_TOL)


# ── Isotropy ─────────────────────────────────────────────────────────────────

def isotropy_defect(x: AlgebraElement, L: LagrangianSubspace) -> float:
    p = L.projector
    return frob(x.matrix @ p - p @ x.matrix @ p)


def isotropy_check(x: AlgebraElement, L: LagrangianSubspace, tol: float = VERIFICATION_TOL) -> bool:
    """x(L) ⊆ L, i.e. xP_L = P_L x P_L (upper triangular w.r.t. L ⊕ L^⊥)."""
    return isotropy_defect(x, L) <= tol


def stabilizes(g, L: LagrangianSubspace, tol: float = VERIFICATION_TOL) -> bool:
    return same_subspace(act(g, L), L, tol)


def block_decompose(t: Matrix, L: LagrangianSubspace) -> dict:
    """Blocks of T for H = L ⊕ L^⊥ in frame coordinates."""
    t = require_square(t, "operator")
    f, fp = L.frame, L.perp_frame
    return {
        "ll": f.T @ t @ f,
        "perp_l": fp.T @ t @ f,
        "l_perp": f.T @ t @ fp,
        "perp_perp": fp.T @ t @ fp,
    }


# ── Local cross sections ─────────────────────────────────────────────────────

def section_gap(L0: LagrangianSubspace, L: LagrangianSubspace) -> float:
    return op_norm(L.symmetry - L0.symmetry)


def cross_section(L0: LagrangianSubspace, L: LagrangianSubspace) -> SymplecticElement:
    """σ(L) = u_L, unitary part of g_L = ½(1 + ε_L ε_L0); u_L(L0) = L."""
    gap = section_gap(L0, L)
    limit = SECTION_RADIUS - SECTION_MARGIN
    if gap >= limit:
        raise OutOfSectionRadius(
            f"‖ε_L − ε_L0‖ = {gap:.6f} is outside the section radius", value=gap, limit=limit
        )
    if gap > SECTION_WARN_GAP:
        logger.debug(f"[Section] near the radius boundary: ‖ε_L − ε_L0‖ = {gap:.6f}")
    g_l = 0.5 * (np.eye(L.frame.shape[0]) + L.symmetry @ L0.symmetry)
    u, _ = polar_decompose(g_l)
    return symplectic_element(u)


def translated_cross_section(L0: LagrangianSubspace, g, W: LagrangianSubspace) -> SymplecticElement:
    """Section at L = g(L0): g·σ(g⁻¹(W))·g⁻¹, mapping L to W."""
    gm = _group_matrix(g)
    g_inv = np.linalg.inv(gm)
    u = cross_section(L0, act(g_inv, W))
    return symplectic_element(gm @ u.matrix @ g_inv)


# ── Strict inclusion ─────────────────────────────────────────────────────────

def strict_inclusion_demo(n: int) -> StrictInclusionReport:
    """P_{Gr_I} − P_{L0}: HS norm √n, L0-corner block constantly −1/2."""
    l0 = base_lagrangian(n)
    gr = graph_of_identity(n)
    t = gr.projector - l0.projector
    corner = block_decompose(t, l0)["ll"]
    diag = np.diag(corner)
    spread = max(float(np.max(np.abs(diag - diag.mean()))),
                 frob(corner - np.diag(diag)))
    return StrictInclusionReport(
        n=int(n),
        hs_norm=frob(t),
        corner_block_value=float(diag.mean()),
        corner_spread=spread,
    )
