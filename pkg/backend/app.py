import logging

from amalgamation import amalgamate, make_request, verify_amalgamation
from config import config
from core_conditions import check_extension, validate_condition
from errors import PosetError
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.middleware.trustedhost import TrustedHostMiddleware
from finite_topology import find_irreducible_base, is_t0
from generic_sim import (
    SimulationConfig,
    check_p2_global,
    check_p3_global,
    run_simulation,
)
from models import (
    AmalgamateRequest,
    AmalgamateResponse,
    DecompositionDocument,
    ExtensionDocument,
    LeqRequest,
    LimitDocument,
    ReportDocument,
    SimulateRequest,
    SimulateResponse,
    SpaceDocument,
    TraceDocument,
    TwinsDocument,
    TwinsRequest,
    ValidateRequest,
    VerdictDocument,
)
from twins import is_twin_pair

logging.basicConfig(level=config.LOG_LEVEL)
logger = logging.getLogger(__name__)

# Initialize FastAPI app
app = FastAPI(title="Poset Verifier", root_path="")

# Add trusted host middleware for proxy
app.add_middleware(TrustedHostMiddleware, allowed_hosts=["*"])

# Enable CORS with proper settings for proxy
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
    expose_headers=["*"],
)


def _bad_request(e: PosetError) -> HTTPException:
    logger.info("[api] rejected: %s: %s", type(e).__name__, e)
    return HTTPException(status_code=400, detail=f"{type(e).__name__}: {e}")


# API Endpoints


@app.get("/api/health")
async def health() -> dict[str, str]:
    return {"status": "ok"}


@app.post("/api/validate", response_model=VerdictDocument)
async def validate(request: ValidateRequest) -> VerdictDocument:
    """Check (P1)-(P3) for one condition"""
    try:
        cond = request.condition.to_condition()
        verdict = validate_condition(cond, strict=request.strict)
    except PosetError as e:
        raise _bad_request(e) from e
    return VerdictDocument.from_verdict(verdict)


@app.post("/api/leq", response_model=ExtensionDocument)
async def leq(request: LeqRequest) -> ExtensionDocument:
    """Decide q ≤ p; both conditions must be in P"""
    try:
        verdict = check_extension(
            request.q.to_condition(), request.p.to_condition(), strict=request.strict
        )
    except PosetError as e:
        raise _bad_request(e) from e
    return ExtensionDocument(
        holds=verdict.holds, clause=verdict.clause, witness=verdict.witness
    )


@app.post("/api/twins", response_model=TwinsDocument)
async def twins(request: TwinsRequest) -> TwinsDocument:
    try:
        cert = is_twin_pair(request.p0.to_condition(), request.p1.to_condition())
    except PosetError as e:
        raise _bad_request(e) from e
    if cert is None:
        return TwinsDocument(twins=False)
    return TwinsDocument(
        twins=True,
        sigma=cert.sigma,
        root=sorted(cert.root),
        smash=cert.smash,
        exchange=cert.exchange,
    )


@app.post("/api/amalgamate", response_model=AmalgamateResponse)
async def amalgamate_twins(request: AmalgamateRequest) -> AmalgamateResponse:
    """Amalgamate twins and return the trace with its claim report"""
    try:
        amalgamation = make_request(
            request.p0.to_condition(),
            request.p1.to_condition(),
            request.xi0,
            request.k,
            request.m,
        )
        trace = amalgamate(amalgamation)
    except PosetError as e:
        raise _bad_request(e) from e
    report = verify_amalgamation(trace, amalgamation, strict=request.strict)
    return AmalgamateResponse(
        trace=TraceDocument.from_trace(trace),
        report=ReportDocument.from_report(report),
    )


@app.post("/api/irreducible", response_model=DecompositionDocument)
async def irreducible(request: SpaceDocument) -> DecompositionDocument:
    """Smallest base of the generated topology with an irreducible decomposition"""
    try:
        space = request.to_space()
        result = find_irreducible_base(space)
    except PosetError as e:
        raise _bad_request(e) from e
    return DecompositionDocument.from_result(result, is_t0(space))


@app.post("/api/simulate", response_model=SimulateResponse)
async def simulate(request: SimulateRequest) -> SimulateResponse:
    try:
        struct = run_simulation(
            SimulationConfig(
                universe=request.points,
                depth=request.depth,
                seed=request.seed,
                budget=request.budget or config.SIM_BUDGET,
                grow_rate=request.grow_rate,
                base_repair=request.base_repair,
                amalgamations=request.amalgamations,
            )
        )
    except PosetError as e:
        raise _bad_request(e) from e
    return SimulateResponse(
        limit=LimitDocument.from_limit(struct),
        checks={
            "P2": check_p2_global(struct).ok,
            "P3": check_p3_global(struct).ok,
        },
    )
