"""HTTP service exposing the package operations."""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from mpmath import mp, mpf

from .. import words as W
from .. import appendix, fricke, geometry, newman, search
from ..tracepoly import eval_trace, trace_polynomial
from . import schemas as S

app = FastAPI(
    title="conetorus",
    description="Trace-coordinate computations for hyperbolic cone tori",
)


@app.exception_handler(ValueError)
async def _domain_error(request: Request, exc: ValueError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(ArithmeticError)
async def _consistency_error(request: Request, exc: ArithmeticError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


def _mpf(v, prec: int):
    with mp.workprec(prec):
        return mpf(str(v))


def _point_payload(p: fricke.FrickePoint) -> S.PointPayload:
    return S.PointPayload(**fricke.point_to_json(p))


def _angle_for(theta, prec: int, x=None, y=None, z=None) -> fricke.ConeAngle:
    """Cone angle from the request; the literal "auto" derives it from the
    constraint value of a fully specified point."""
    if isinstance(theta, str) and theta.strip().lower() == "auto":
        if z is None:
            raise ValueError('"auto" cone angle needs all three coordinates')
        with mp.workprec(prec):
            k = fricke.kappa_at(x, y, z)
            if not (-2 < k < 2):
                raise ValueError("constraint value outside (-2, 2); no cone angle fits")
            return fricke.make_cone_angle(2 * mp.acos(-k / 2), prec)
    return fricke.make_cone_angle(_mpf(theta, prec), prec)


def _points_for(req, prec: int) -> list[fricke.FrickePoint]:
    x, y = _mpf(req.x, prec), _mpf(req.y, prec)
    z = _mpf(req.z, prec) if req.z is not None else None
    angle = _angle_for(req.theta, prec, x, y, z)
    if z is not None:
        with mp.workprec(prec):
            return [fricke.FrickePoint(x, y, z, angle, prec)]
    pts = fricke.solve_z(angle, x, y, prec)
    if not pts:
        raise ValueError("no admissible third coordinate over (x, y)")
    return pts


@app.get("/health")
def health():
    return {"schema": 1, "status": "ok"}


@app.post("/tracepoly", response_model=S.TracePolyResponse, response_model_by_alias=True)
def tracepoly(req: S.WordRequest):
    w = W.parse_word(req.word)
    p = trace_polynomial(w)
    return S.TracePolyResponse(
        word=str(w),
        polynomial=str(p),
        term_count=len(p.terms),
        total_degree=p.total_degree(),
    )


@app.post("/eval", response_model=S.EvalResponse, response_model_by_alias=True)
def eval_word_endpoint(req: S.EvalRequest):
    prec = req.precision_bits
    w = W.parse_word(req.word)
    results = []
    for p in _points_for(req, prec):
        # trace-algebra evaluation of g_w; the matrix trace is reported
        # alongside as an independent route
        value = eval_trace(w, p.x, p.y, p.z, prec=prec)
        mat = fricke.evaluate_word(fricke.normal_form(p), w)
        results.append(
            S.EvalPointResult(
                point=_point_payload(p),
                value=fricke.decimal_str(value, prec),
                abs_word_trace=fricke.decimal_str(abs(mat.trace()), prec),
            )
        )
    return S.EvalResponse(word=str(w), results=results)


@app.post("/classify", response_model=S.ClassifyResponse, response_model_by_alias=True)
def classify_endpoint(req: S.ClassifyRequest):
    prec = req.precision_bits
    w = W.parse_word(req.word)
    tol = _mpf(req.tol, prec) if req.tol is not None else fricke.identity_tol(prec)
    results = []
    for p in _points_for(req, prec):
        mat = fricke.evaluate_word(fricke.normal_form(p), w)
        cls = fricke.classify(mat, tol=tol, prec=prec)
        results.append(
            S.ClassifyPointResult(
                point=_point_payload(p),
                kind=cls.kind,
                rotation_angle=(
                    fricke.decimal_str(cls.rotation_angle, prec)
                    if cls.rotation_angle is not None
                    else None
                ),
                translation_length=(
                    fricke.decimal_str(cls.translation_length, prec)
                    if cls.translation_length is not None
                    else None
                ),
                trace=fricke.decimal_str(mat.trace(), prec),
            )
        )
    return S.ClassifyResponse(word=str(w), results=results)


@app.post("/phi", response_model=S.PhiResponse, response_model_by_alias=True)
def phi(req: S.PhiRequest):
    prec = req.precision_bits
    shape = geometry.TriangleShape(
        _mpf(req.theta_a, prec), _mpf(req.theta_b, prec), _mpf(req.theta_c, prec), prec
    )
    return S.PhiResponse(point=_point_payload(geometry.triangle_to_fricke(shape)))


@app.post("/phi-inv", response_model=S.PhiInvResponse, response_model_by_alias=True)
def phi_inv(req: S.PhiInvRequest):
    prec = req.precision_bits
    x, y, z = (_mpf(v, prec) for v in (req.x, req.y, req.z))
    angle = _angle_for(req.theta, prec, x, y, z)
    with mp.workprec(prec):
        point = fricke.FrickePoint(x, y, z, angle, prec)
    shape = geometry.fricke_to_triangle(point)
    with mp.workprec(prec):
        return S.PhiInvResponse(
            angles=S.TrianglePayload(
                theta_a=fricke.decimal_str(shape.theta_a, prec),
                theta_b=fricke.decimal_str(shape.theta_b, prec),
                theta_c=fricke.decimal_str(shape.theta_c, prec),
            ),
            angle_sum=fricke.decimal_str(shape.angle_sum(), prec),
            half_cone_angle=fricke.decimal_str(angle.theta / 2, prec),
        )


def _membership_response(decision, cert, witness=None) -> S.MembershipResponse:
    steps = [
        S.CertificateStep(
            position=s.position,
            removed=str(W.FWord(s.removed)),
            inserted=str(W.FWord(s.inserted)) if s.inserted else "1",
        )
        for s in cert.steps
    ]
    return S.MembershipResponse(
        decision=decision,
        witness=witness,
        certificate_steps=steps,
        outcome=cert.outcome,
        stuck_word=str(cert.stuck_word) if cert.stuck_word is not None else None,
        states_explored=cert.states_explored,
    )


@app.post("/newman", response_model=S.MembershipResponse, response_model_by_alias=True)
def newman_endpoint(req: S.NewmanRequest):
    u = W.parse_word(req.u)
    r = W.parse_word(req.r)
    decision, cert = newman.in_normal_closure(u, r, req.m)
    return _membership_response(decision, cert)


@app.post(
    "/torsion-type", response_model=S.MembershipResponse, response_model_by_alias=True
)
def torsion_type(req: S.TorsionTypeRequest):
    u = W.parse_word(req.u)
    decision, witness = newman.is_torsion_type(u)
    if decision:
        root, m, cert = witness
        return _membership_response(
            True, cert, witness={"relator": str(root), "exponent": m}
        )
    empty = newman.MembershipCertificate(
        u, W.FWord(), (), "no_qualifying_subword", None, 0
    )
    return _membership_response(False, empty)


def _parse_order(text: str) -> Fraction:
    f = Fraction(text)
    if f.denominator < 2 or f <= 0:
        raise ValueError("torsion order must be a positive fraction p/q with q >= 2")
    return f


@app.post("/find-locus", response_model=S.FindLocusResponse, response_model_by_alias=True)
def find_locus(req: S.FindLocusRequest):
    prec = req.precision_bits
    if req.n_min > req.n_max or req.n_min < 1:
        raise ValueError("need 1 <= n_min <= n_max")
    angle = fricke.make_cone_angle(_mpf(req.theta, prec), prec)
    grid = search.GridSpec(
        _mpf(req.grid.start, prec), _mpf(req.grid.stop, prec), _mpf(req.grid.step, prec)
    )
    if req.torsion_order is not None:
        order = _parse_order(req.torsion_order)
        tol = _mpf(req.tol, prec) if req.tol is not None else mpf("1e-20")
        results = []
        for n in range(req.n_min, req.n_max + 1):
            results.extend(
                search.find_torsion_locus(
                    angle, n, order,
                    coordinate=req.coordinate, grid=grid, prec=prec,
                    certify_samples=req.certify_samples, certify_tol=tol,
                )
            )
    else:
        tol = _mpf(req.tol, prec) if req.tol is not None else mpf("1e-25")
        results = search.find_nontorsion_locus(
            angle, range(req.n_min, req.n_max + 1),
            coordinate=req.coordinate, grid=grid, prec=prec,
            certify_samples=req.certify_samples, certify_tol=tol,
        )
    payloads = [S.LocusPayload(**r.to_json()) for r in results]
    return S.FindLocusResponse(results=payloads, certified_count=len(payloads))


def _locus_from_spec(spec: S.LocusSpec, angle, prec: int) -> search.LocusResult:
    with mp.workprec(prec):
        s = _mpf(spec.s, prec)
        if spec.torsion_order is not None:
            order = _parse_order(spec.torsion_order)
            word = search.torsion_word_for_axis(spec.n, spec.coordinate)
            return search.LocusResult(
                angle=angle, coordinate=spec.coordinate, s=s, n=spec.n,
                word=word, torsion_order=order,
            )
        word = search.axis_word(spec.n, spec.coordinate)
        return search.LocusResult(
            angle=angle, coordinate=spec.coordinate, s=s, n=spec.n, word=word
        )


@app.post(
    "/double-point", response_model=S.DoublePointResponse, response_model_by_alias=True
)
def double_point_endpoint(req: S.DoublePointRequest):
    prec = req.precision_bits
    angle = fricke.make_cone_angle(_mpf(req.theta, prec), prec)
    l1 = _locus_from_spec(req.locus1, angle, prec)
    l2 = _locus_from_spec(req.locus2, angle, prec)
    tol = _mpf(req.tol, prec) if req.tol is not None else mpf("1e-25")
    point, r1, r2 = search.double_point(angle, l1, l2, tol=tol)
    return S.DoublePointResponse(
        point=_point_payload(point),
        residual1=fricke.decimal_str(r1, prec),
        residual2=fricke.decimal_str(r2, prec),
    )


@app.get("/verify-appendix")
def verify_appendix_endpoint():
    return appendix.verify_appendix().to_json()
