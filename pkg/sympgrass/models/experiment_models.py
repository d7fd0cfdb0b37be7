from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class Tolerances(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    construction: float = Field(1e-10, gt=0, description="Frame, projector and section construction")
    verification: float = Field(1e-8, gt=0, description="Membership and invariant checks")
    ode: float = Field(1e-6, gt=0, description="Integrator-limited comparisons")
    projector: float = Field(1e-8, gt=0, description="Idempotent → projector vs QR-range oracle")
    chart: float = Field(1e-8, gt=0, description="Chart forward/inverse round trips")
    differential: float = Field(1e-5, gt=0, description="Differentials vs central finite differences (relative)")
    section: float = Field(1e-8, gt=0, description="Cross-section property")
    metric: float = Field(1e-10, gt=0, description="Slack in A(v) ≤ Q(v)")
    oracle: float = Field(1e-7, gt=0, description="|Q − Q_oracle|")
    lift: float = Field(1e-5, gt=0, description="Isometric lift tracking and length")
    duality: float = Field(1e-6, gt=0, description="|L_L(φ⁻¹) − L_R(φ)|")
    geodesic: float = Field(1e-5, gt=0, description="Geodesic initial velocity by finite differences")
    lagrangian: float = Field(1e-7, gt=0, description="Lagrangian defect along geodesics")
    strict: float = Field(1e-10, gt=0, description="Strict-inclusion analytic values")
    cauchy: float = Field(1e-8, gt=0, description="Slack in the Cauchy tail bound")
    distance: float = Field(1e-4, gt=0, description="Recovered geodesic angle in the rotation case")


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    n: Optional[int] = Field(None, ge=1, description="Largest half-dimension; None uses the suite default")
    seed: int = Field(0, ge=0)
    trials: Optional[int] = Field(None, ge=1, description="None uses the suite default")
    tolerances: Tolerances = Field(default_factory=Tolerances)
    grid_points: Optional[int] = Field(None, ge=2, description="Samples per curve; None uses the suite default")
    output_path: Optional[Path] = None
    csv_path: Optional[Path] = None
    jobs: int = Field(1, ge=1)


class ExperimentReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    name: str
    passed: bool = Field(..., alias="pass")
    metrics: Dict[str, Optional[float]] = Field(default_factory=dict)
    per_trial: List[Dict[str, Any]] = Field(default_factory=list)
    config: Dict[str, Any] = Field(default_factory=dict)
    seed_algorithm: str
