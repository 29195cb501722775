"""Request and response schemas for the HTTP service.

Every numeric field is a plain float (round-trip decimal in JSON); fields
that do not apply to a given input are explicitly null, never fabricated.
"""

from __future__ import annotations

from pydantic import BaseModel, Field, field_validator


class PointsPayload(BaseModel):
    """A configuration of points in R^3."""

    points: list[list[float]] = Field(min_length=2)

    @field_validator("points")
    @classmethod
    def _rows_are_3d(cls, rows):
        for i, row in enumerate(rows):
            if len(row) != 3:
                raise ValueError(f"row {i} has {len(row)} coordinates, expected 3")
        return rows


class DetResponse(BaseModel):
    n: int
    d_re: float
    d_im: float
    abs_d: float
    cond_hint: float


class NgonBounds(BaseModel):
    product_log: float
    lower_log: float
    upper_log: float
    inside: bool


class NgonResponse(BaseModel):
    n: int
    closed_form_log: float
    closed_form: float | None  # null when not representable as a double
    direct: float | None
    rel_diff: float | None
    log_over_n2: float
    bounds: NgonBounds | None


class EnForms(BaseModel):
    distance_form: float
    angle_form: float


class CrelleInfo(BaseModel):
    sides: list[float]
    delta: float
    degenerate: bool
    angles: list[float] | None


class FourMargins(BaseModel):
    conj2_formula: float | None  # coplanar configurations only
    conj4: float
    conj5: float
    conj6: float
    conj3_n4: float


class IsoscelesInfo(BaseModel):
    margin: float
    is_isosceles: bool


class FourResponse(BaseModel):
    r6: list[float]
    classification: str
    coplanar: bool
    en: EnForms
    crelle: CrelleInfo
    crelle_angle_combos: list[float] | None  # convex / interior-point cases only
    margins: FourMargins
    isosceles: IsoscelesInfo


class VerifyRequest(BaseModel):
    suite: str
    trials: int = Field(ge=1)
    seed: int = 0
    n: int | None = None
    workers: int = Field(default=1, ge=1)
    severity: float | None = None
    tolerances: dict[str, float] | None = None


class VerifyResponse(BaseModel):
    report: dict
    counterexamples: list[dict]


class IntegralCheck(BaseModel):
    value: float
    target: float
    error: float


class ConstantsResponse(BaseModel):
    zeta3: float
    catalan: float
    growth_b: float
    limit_l: float
    integral_checks: dict[str, IntegralCheck]


class SuiteInfo(BaseModel):
    sampler: str
    checks: list[str]
    default_n: int | None
    n_range: list[int] | None
