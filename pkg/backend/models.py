from typing import Any

from amalgamation import AmalgamationRequest, AmalgamationTrace, ClaimReport
from core_conditions import Cells, Condition, Pair, Verdict, check_structure
from errors import DocumentError
from finite_topology import Decomposition, FiniteSpace, generate_topology
from generic_sim import LimitStructure
from pydantic import BaseModel, Field
from verifier import FuzzReport


def pair_key(pair: Pair) -> str:
    return f"{pair[0]},{pair[1]}"


def parse_pair_key(key: str, field: str = "U") -> Pair:
    """Decode an "alpha,i" key"""
    parts = key.split(",")
    try:
        alpha, i = (int(part) for part in parts)
    except ValueError as e:
        raise DocumentError(
            f"{field} key {key!r} is not of the form 'alpha,i'", f"{field}[{key}]"
        ) from e
    return alpha, i


def encode_cells(cells: Cells) -> dict[str, list[int]]:
    return {pair_key(key): sorted(cells[key]) for key in sorted(cells)}


class ConditionDocument(BaseModel):
    """A condition ⟨A,n,U⟩ with U keyed by "alpha,i" strings"""

    A: list[int]
    n: int
    U: dict[str, list[int]] = Field(default_factory=dict)

    def to_condition(self) -> Condition:
        """Decode and check structure.

        Raises DocumentError or MalformedConditionError.
        """
        cells = {parse_pair_key(key): value for key, value in self.U.items()}
        if len(cells) != len(self.U):
            raise DocumentError("U has duplicate keys", "U")
        if len(set(self.A)) != len(self.A):
            raise DocumentError("A has repeated points", "A")
        cond = Condition.build(self.A, self.n, cells)
        check_structure(cond)
        return cond

    @classmethod
    def from_condition(cls, cond: Condition) -> "ConditionDocument":
        return cls(A=sorted(cond.A), n=cond.n, U=encode_cells(cond.U))


class SpaceDocument(BaseModel):
    """A finite space given by its points and a generating family"""

    points: list[int]
    generators: list[list[int]] = Field(default_factory=list)

    def to_space(self) -> FiniteSpace:
        return generate_topology(self.points, self.generators)


class ViolationDocument(BaseModel):
    clause: str
    witness: list[int]


class VerdictDocument(BaseModel):
    ok: bool
    violations: list[ViolationDocument]

    @classmethod
    def from_verdict(cls, verdict: Verdict) -> "VerdictDocument":
        return cls(
            ok=verdict.ok,
            violations=[
                ViolationDocument(clause=v.clause, witness=list(v.witness))
                for v in verdict.violations
            ],
        )


class ExtensionDocument(BaseModel):
    holds: bool
    clause: str | None = None
    witness: Any = None


class TwinsDocument(BaseModel):
    twins: bool
    sigma: dict[int, int] | None = None
    root: list[int] | None = None
    smash: dict[int, int] | None = None
    exchange: dict[int, int] | None = None


class RequestDocument(BaseModel):
    p0: ConditionDocument
    p1: ConditionDocument
    xi0: int
    k: int
    m: int

    @classmethod
    def from_request(cls, request: AmalgamationRequest) -> "RequestDocument":
        return cls(
            p0=ConditionDocument.from_condition(request.p0),
            p1=ConditionDocument.from_condition(request.p1),
            xi0=request.xi0,
            k=request.k,
            m=request.m,
        )


def _encode_table(
    table: dict[int, dict[Pair, frozenset[Pair]]],
) -> dict[str, dict[str, list[list[int]]]]:
    return {
        str(eps): {
            pair_key(key): [list(pair) for pair in sorted(rows[key])]
            for key in sorted(rows)
        }
        for eps, rows in sorted(table.items())
    }


class TraceDocument(BaseModel):
    """Every intermediate object of an amalgamation"""

    Astar: list[int]
    B: list[int]
    rho: dict[str, int]
    n: int
    V: dict[str, dict[str, list[list[int]]]]
    W: dict[str, dict[str, list[list[int]]]]
    Uprime: dict[str, list[int]]
    Ufinal: dict[str, list[int]]
    p: ConditionDocument

    @classmethod
    def from_trace(cls, trace: AmalgamationTrace) -> "TraceDocument":
        return cls(
            Astar=list(trace.Astar),
            B=list(trace.B),
            rho={pair_key(key): b for key, b in sorted(trace.rho.items())},
            n=trace.n,
            V=_encode_table(trace.V),
            W=_encode_table(trace.W),
            Uprime=encode_cells(trace.Uprime),
            Ufinal=encode_cells(trace.Ufinal or {}),
            p=ConditionDocument.from_condition(trace.p),
        )


class ReportDocument(BaseModel):
    results: dict[str, bool]
    witnesses: dict[str, Any]
    push2_readings: dict[str, bool]
    all_passed: bool

    @classmethod
    def from_report(cls, report: ClaimReport) -> "ReportDocument":
        return cls(
            results=report.results,
            witnesses=report.witnesses,
            push2_readings=report.push2_readings,
            all_passed=report.all_passed,
        )


class DecompositionDocument(BaseModel):
    found: bool
    t0: bool
    base: list[list[int]] | None = None
    owners: dict[int, list[list[int]]] | None = None

    @classmethod
    def from_result(
        cls, result: tuple[Any, Decomposition] | None, t0: bool
    ) -> "DecompositionDocument":
        if result is None:
            return cls(found=False, t0=t0)
        base, decomposition = result
        return cls(
            found=True,
            t0=t0,
            base=[sorted(v) for v in base],
            owners={
                x: [sorted(v) for v in family]
                for x, family in sorted(decomposition.owners.items())
            },
        )


class LimitDocument(BaseModel):
    """A limit structure; the chain itself is summarized by its length"""

    points: list[int]
    depth: int
    U: dict[str, list[int]]
    chain_length: int
    unmet: list[Any] = Field(default_factory=list)

    @classmethod
    def from_limit(cls, struct: LimitStructure) -> "LimitDocument":
        return cls(
            points=list(struct.points),
            depth=struct.depth,
            U=encode_cells(struct.U),
            chain_length=len(struct.chain),
            unmet=[list(obligation) for obligation in struct.unmet],
        )


def describe_case(case: Any) -> Any:
    """JSON-friendly form of a fuzz input"""
    if isinstance(case, AmalgamationRequest):
        return RequestDocument.from_request(case).model_dump()
    if isinstance(case, Condition):
        return ConditionDocument.from_condition(case).model_dump()
    if isinstance(case, FiniteSpace):
        opens = sorted(sorted(o) for o in case.opens)
        return {"points": sorted(case.points), "opens": opens}
    return repr(case)


class FailureDocument(BaseModel):
    trial: int
    property: str
    witness: Any
    shrunk: Any
    shrunk_witness: Any


class FuzzReportDocument(BaseModel):
    trials: int
    properties: list[str]
    failures: list[FailureDocument]
    wall_time: float

    @classmethod
    def from_report(cls, report: FuzzReport) -> "FuzzReportDocument":
        return cls(
            trials=report.trials,
            properties=list(report.properties),
            failures=[
                FailureDocument(
                    trial=f.trial,
                    property=f.property_name,
                    witness=f.witness,
                    shrunk=describe_case(f.shrunk),
                    shrunk_witness=f.shrunk_witness,
                )
                for f in report.failures
            ],
            wall_time=report.wall_time,
        )


# HTTP request bodies


class ValidateRequest(BaseModel):
    condition: ConditionDocument
    strict: bool = False


class LeqRequest(BaseModel):
    q: ConditionDocument
    p: ConditionDocument
    strict: bool = False


class TwinsRequest(BaseModel):
    p0: ConditionDocument
    p1: ConditionDocument


class AmalgamateRequest(BaseModel):
    p0: ConditionDocument
    p1: ConditionDocument
    xi0: int
    k: int
    m: int
    strict: bool = False


class AmalgamateResponse(BaseModel):
    trace: TraceDocument
    report: ReportDocument


class SimulateRequest(BaseModel):
    points: int = Field(ge=1)
    depth: int = Field(ge=1)
    seed: int
    grow_rate: float = Field(default=0.0, ge=0.0, le=1.0)
    base_repair: bool = False
    amalgamations: int = Field(default=0, ge=0)
    budget: int | None = None


class SimulateResponse(BaseModel):
    limit: LimitDocument
    checks: dict[str, bool]
