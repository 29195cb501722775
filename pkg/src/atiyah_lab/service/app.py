"""FastAPI application exposing the toolkit.

Endpoints mirror the library layers one to one; each handler only adapts
between schema types and library calls. Degenerate geometry maps to 422 with
code "degenerate"; malformed input maps to 400 with code "invalid", so
clients can distinguish the two without parsing messages.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .. import constants, fourpoint, harness, ngon
from ..determinant import atiyah_determinant
from ..errors import (
    CoincidentPointsError,
    DegenerateConfigurationError,
    GeometryError,
    NonRealizableMetricsError,
)
from ..geom import cayley_menger_vsq, classify_quadrilateral, r6_from_points
from .models import (
    ConstantsResponse,
    CrelleInfo,
    DetResponse,
    EnForms,
    FourMargins,
    FourResponse,
    IntegralCheck,
    IsoscelesInfo,
    NgonBounds,
    NgonResponse,
    PointsPayload,
    SuiteInfo,
    VerifyRequest,
    VerifyResponse,
)

_DEGENERATE = (
    CoincidentPointsError,
    DegenerateConfigurationError,
    NonRealizableMetricsError,
)


def create_app() -> FastAPI:
    app = FastAPI(title="atiyah-lab", version="0.1.0")

    @app.exception_handler(GeometryError)
    async def _geometry_error(request: Request, exc: GeometryError):
        code = "degenerate" if isinstance(exc, _DEGENERATE) else "invalid"
        status = 422 if code == "degenerate" else 400
        return JSONResponse(status_code=status, content={"code": code, "detail": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"code": "invalid", "detail": str(exc)})

    @app.post("/det", response_model=DetResponse)
    def det(payload: PointsPayload) -> DetResponse:
        res = atiyah_determinant(payload.points)
        return DetResponse(
            n=res.n,
            d_re=res.value.real,
            d_im=res.value.imag,
            abs_d=res.abs,
            cond_hint=res.matrix_cond_hint,
        )

    @app.get("/ngon", response_model=NgonResponse)
    def ngon_info(
        n: int = Query(ge=3),
        direct: bool = False,
        bounds: bool = False,
    ) -> NgonResponse:
        lcf = ngon.log_ngon_closed_form(n)
        cf = ngon.ngon_closed_form(n)
        direct_val = rel = None
        if direct and n <= ngon.DIRECT_CAP:
            direct_val = abs(atiyah_determinant(ngon.ngon_points(n)).value)
            rel = abs(direct_val - cf) / cf
        bounds_info = None
        if bounds:
            lo, hi = ngon.cot_product_log_bounds(n)
            prod_log = ngon.cot_product_log(n)
            bounds_info = NgonBounds(
                product_log=prod_log,
                lower_log=lo,
                upper_log=hi,
                inside=bool(lo <= prod_log <= hi),
            )
        return NgonResponse(
            n=n,
            closed_form_log=lcf,
            closed_form=cf if np.isfinite(cf) else None,
            direct=direct_val,
            rel_diff=rel,
            log_over_n2=ngon.log_dn_over_n2(n),
            bounds=bounds_info,
        )

    @app.post("/four", response_model=FourResponse)
    def four(payload: PointsPayload) -> FourResponse:
        pts = np.asarray(payload.points, dtype=float)
        if pts.shape != (4, 3):
            raise GeometryError("expected exactly 4 points")
        r6 = r6_from_points(pts)
        vsq = cayley_menger_vsq(r6)
        cls = classify_quadrilateral(pts)
        coplanar = cls.kind != "non-coplanar"

        en_distance = fourpoint.en_real_part(r6, vsq)
        en_angle = (
            64.0 * float(np.prod(r6))
            - 4.0 * fourpoint.ptolemy_defect(r6)
            + fourpoint.en_real_part_angles(r6)
            + 288.0 * vsq
        )
        tri = fourpoint.crelle_triangle(r6)
        combos = None
        if cls.kind in ("convex", "reflex"):
            combos = list(fourpoint.crelle_angles_coplanar(pts))
        iso_margin, iso_flag = fourpoint.isosceles_volume_bound(r6)
        return FourResponse(
            r6=[float(v) for v in r6],
            classification=cls.kind,
            coplanar=coplanar,
            en=EnForms(distance_form=en_distance, angle_form=en_angle),
            crelle=CrelleInfo(
                sides=list(tri.sides),
                delta=tri.delta,
                degenerate=tri.degenerate,
                angles=None if tri.angles is None else list(tri.angles),
            ),
            crelle_angle_combos=combos,
            margins=FourMargins(
                conj2_formula=(
                    float(fourpoint.conj2_margin_formula(r6)) if coplanar else None
                ),
                conj4=float(fourpoint.conj4_margin(r6)),
                conj5=float(fourpoint.conj5_margin(r6)),
                conj6=float(fourpoint.conj6_margin(r6)),
                conj3_n4=fourpoint.conj3_n4_margin(pts),
            ),
            isosceles=IsoscelesInfo(margin=iso_margin, is_isosceles=iso_flag),
        )

    @app.get("/suites", response_model=dict[str, SuiteInfo])
    def suites() -> dict[str, SuiteInfo]:
        return {
            name: SuiteInfo(
                sampler=spec.sampler,
                checks=list(spec.checks),
                default_n=spec.default_n,
                n_range=None if spec.n_range is None else list(spec.n_range),
            )
            for name, spec in harness.SUITES.items()
        }

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest) -> VerifyResponse:
        report, records = harness.run_suite(
            req.suite,
            req.trials,
            req.seed,
            n=req.n,
            workers=req.workers,
            tolerances=req.tolerances,
            severity=req.severity,
        )
        return VerifyResponse(
            report=report.to_json(),
            counterexamples=[rec.to_json() for rec in records],
        )

    @app.get("/constants", response_model=ConstantsResponse)
    def constants_info() -> ConstantsResponse:
        checks = constants.verify_integral_identities()
        return ConstantsResponse(
            zeta3=constants.zeta3(),
            catalan=constants.catalan(),
            growth_b=constants.growth_constant(),
            limit_l=constants.limit_constant(),
            integral_checks={k: IntegralCheck(**v) for k, v in checks.items()},
        )

    return app


app = create_app()
