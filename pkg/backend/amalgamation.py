"""Common extensions of twin conditions.

The construction runs in two steps. First the minimal amalgamation U' is built
on A* ∪ B, where B is a fresh block holding one point ρ(α,i) per pair of A*×n.
Then U' is enlarged on the rows of A0 above U0(ξ0,k) to obtain U, which
realizes ξ0 ∈ U(ξ1,m) ⊂ U(ξ1,k) ⊂ U(ξ0,k).

verify_amalgamation re-checks every claim of the argument by exhaustive
quantification over the finite trace. It accepts arbitrary (even mutated)
traces and never raises for a failing claim.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Any

from core_conditions import (
    Cells,
    Condition,
    Pair,
    check_structure,
    extension_clauses,
    is_included,
    require_valid,
    validate_condition,
)
from errors import (
    AmalgamationHypothesisError,
    MalformedConditionError,
    NotTwinsError,
    WellDefinednessError,
)
from twins import TwinCertificate, is_twin_pair, supports_ordered

logger = logging.getLogger(__name__)

PairSet = frozenset[Pair]
Table = dict[int, dict[Pair, PairSet]]  # side -> (beta, j) -> pairs


@dataclass(frozen=True)
class AmalgamationRequest:
    """Twins p0, p1 with the designated point ξ0 and levels k < m"""

    p0: Condition
    p1: Condition
    cert: TwinCertificate
    xi0: int
    k: int
    m: int

    @property
    def n(self) -> int:
        return self.p0.n

    @property
    def xi1(self) -> int:
        return self.cert.sigma[self.xi0]

    @property
    def root(self) -> frozenset[int]:
        return self.cert.root

    @property
    def astar(self) -> tuple[int, ...]:
        return tuple(sorted(self.p0.support | self.p1.support))

    def side(self, eps: int) -> Condition:
        return self.p1 if eps else self.p0


def make_request(
    p0: Condition, p1: Condition, xi0: int, k: int, m: int
) -> AmalgamationRequest:
    """Bundle two conditions into a request, computing their twin certificate"""
    cert = is_twin_pair(p0, p1)
    if cert is None:
        raise NotTwinsError()
    return AmalgamationRequest(p0=p0, p1=p1, cert=cert, xi0=xi0, k=k, m=m)


def check_hypothesis(request: AmalgamationRequest) -> None:
    """Raise AmalgamationHypothesisError naming the first violated clause"""
    require_valid(request.p0, "p0")
    require_valid(request.p1, "p1")
    cert = is_twin_pair(request.p0, request.p1)
    if cert is None or cert.sigma != request.cert.sigma:
        raise NotTwinsError()
    if not supports_ordered(request.p0.A, request.p1.A):
        raise AmalgamationHypothesisError(
            "support-order", "requires A0∩A1 < A0∖A1 < A1∖A0"
        )
    if request.k < 0:
        raise AmalgamationHypothesisError(
            "0<=k", f"levels are natural numbers, got k={request.k}"
        )
    if not request.k < request.m:
        raise AmalgamationHypothesisError(
            "k<m", f"requires k<m, got k={request.k}, m={request.m}"
        )
    if not request.m < request.n:
        raise AmalgamationHypothesisError(
            "m<n", f"requires m<n, got m={request.m}, n={request.n}"
        )
    if request.xi0 not in request.p0.support - request.p1.support:
        raise AmalgamationHypothesisError(
            "xi0", f"requires xi0 ∈ A0∖A1, got {request.xi0}"
        )


@dataclass
class AmalgamationTrace:
    """Every intermediate object of the construction"""

    Astar: tuple[int, ...]
    B: tuple[int, ...]
    rho: dict[Pair, int]
    n: int
    V: Table
    W: Table
    Uprime: Cells
    Ufinal: Cells | None = None

    @property
    def points(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.Astar) | set(self.B)))

    @property
    def pprime(self) -> Condition:
        return Condition.build(self.points, self.n, self.Uprime)

    @property
    def p(self) -> Condition:
        if self.Ufinal is None:
            raise ValueError("the modification step has not been applied")
        return Condition.build(self.points, self.n, self.Ufinal)

    def embed(self, pairs: PairSet) -> frozenset[int]:
        """Image of a set of pairs under ρ; pairs outside its domain are skipped"""
        return frozenset(self.rho[pair] for pair in pairs if pair in self.rho)

    def copy(self) -> "AmalgamationTrace":
        return replace(
            self,
            Uprime=dict(self.Uprime),
            Ufinal=None if self.Ufinal is None else dict(self.Ufinal),
        )


def fresh_block(
    Astar: tuple[int, ...], n: int
) -> tuple[tuple[int, ...], dict[Pair, int]]:
    """The |A*|·n smallest naturals above max(A*), enumerated lexicographically"""
    ordered = sorted(Astar)
    start = ordered[-1] + 1 if ordered else 0
    pairs = [(alpha, i) for alpha in ordered for i in range(n)]
    rho = {pair: start + offset for offset, pair in enumerate(pairs)}
    return tuple(rho.values()), rho


def compute_V(p_eps: Condition, beta: int, j: int) -> PairSet:
    """{⟨α,i⟩ ∈ A_ε×n : U_ε(α,i) ⊂ U_ε(β,j)}"""
    target = p_eps.U[(beta, j)]
    return frozenset(pair for pair in p_eps.pairs() if p_eps.U[pair] <= target)


def compute_W(
    p0: Condition,
    p1: Condition,
    cert: TwinCertificate,
    eps: int,
    beta: int,
    j: int,
) -> PairSet:
    """Pairs of the other side routed through a root cell below U_ε(β,j)"""
    here, other = (p1, p0) if eps else (p0, p1)
    target = here.U[(beta, j)]
    witnesses = [
        (gamma, l)
        for gamma in sorted(cert.root)
        for l in range(here.n)
        if here.U[(gamma, l)] <= target
    ]
    if not witnesses:
        return frozenset()
    return frozenset(
        pair
        for pair in other.pairs()
        if any(other.U[pair] <= other.U[w] for w in witnesses)
    )


def _uprime_row(
    request: AmalgamationRequest, trace: AmalgamationTrace, eps: int, beta: int, j: int
) -> frozenset[int]:
    here, other = request.side(eps), request.side(1 - eps)
    mirror = request.cert.exchange[beta]
    return (
        here.U[(beta, j)]
        | other.U[(mirror, j)]
        | trace.embed(trace.V[eps][(beta, j)])
        | trace.embed(trace.W[eps][(beta, j)])
    )


def build_uprime(request: AmalgamationRequest) -> AmalgamationTrace:
    """The minimal amalgamation p' = ⟨A*∪B, n, U'⟩ (Ufinal left unset)"""
    n = request.n
    Astar = request.astar
    B, rho = fresh_block(Astar, n)

    V: Table = {0: {}, 1: {}}
    W: Table = {0: {}, 1: {}}
    for eps in (0, 1):
        side = request.side(eps)
        for beta, j in side.pairs():
            V[eps][(beta, j)] = compute_V(side, beta, j)
            W[eps][(beta, j)] = compute_W(
                request.p0, request.p1, request.cert, eps, beta, j
            )

    trace = AmalgamationTrace(Astar=Astar, B=B, rho=rho, n=n, V=V, W=W, Uprime={})
    Uprime: Cells = {}
    for beta in Astar:
        for j in range(n):
            readings = [
                _uprime_row(request, trace, eps, beta, j)
                for eps in (0, 1)
                if beta in request.side(eps).support
            ]
            # Root points are read from both sides and must agree
            if len(readings) == 2 and readings[0] != readings[1]:
                raise WellDefinednessError(beta, j, readings[0], readings[1])
            Uprime[(beta, j)] = readings[0]
    for b in B:
        for j in range(n):
            Uprime[(b, j)] = frozenset({b})

    trace.Uprime = Uprime
    return trace


def modification_guard(request: AmalgamationRequest, z: int, j: int) -> bool:
    """U0(ξ0,k) ⊂ U0(z,j); false wherever U0 is undefined"""
    p0 = request.p0
    if z not in p0.support:
        return False
    return p0.U[(request.xi0, request.k)] <= p0.U[(z, j)]


def apply_modification(trace: AmalgamationTrace, request: AmalgamationRequest) -> Cells:
    """Enlarge U' by U'(ξ1,k) on every row passing the guard"""
    extra = trace.Uprime[(request.xi1, request.k)]
    Ufinal: Cells = {}
    for (z, j), value in trace.Uprime.items():
        Ufinal[(z, j)] = value | extra if modification_guard(request, z, j) else value
    return Ufinal


def amalgamate(request: AmalgamationRequest) -> AmalgamationTrace:
    """Run the whole construction and return its trace"""
    check_hypothesis(request)
    trace = build_uprime(request)
    trace.Ufinal = apply_modification(trace, request)
    logger.debug(
        "[amalgamation] |A*|=%d |B|=%d n=%d xi0=%d xi1=%d",
        len(trace.Astar),
        len(trace.B),
        trace.n,
        request.xi0,
        request.xi1,
    )
    return trace


# Claims checked by verify_amalgamation, in report order
CLAIMS = (
    "push",
    "push2",
    "push3",
    "uprime_valid",
    "uprime_extends",
    "final_valid",
    "final_extends",
    "star",
)
EQUATIONS = ("eq_u_uprime", "eq_u2")
INVARIANTS = ("push2_claim_reading", "restriction", "astar_unchanged")
CHECKS = CLAIMS + EQUATIONS + INVARIANTS


@dataclass
class ClaimReport:
    """One boolean per check plus the least witness of each failure"""

    results: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, Any] = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return all(self.results.values())

    @property
    def failed(self) -> list[str]:
        return [name for name in CHECKS if not self.results.get(name, True)]

    def record(self, name: str, witness: Any | None) -> None:
        self.results[name] = witness is None
        if witness is not None:
            self.witnesses[name] = witness

    @property
    def push2_readings(self) -> dict[str, bool]:
        """Which reading of the second push claim holds"""
        return {
            "construction": self.results.get("push2", False),
            "claim_text": self.results.get("push2_claim_reading", False),
        }


def _push_witness(
    trace: AmalgamationTrace,
    request: AmalgamationRequest,
    table: Cells,
    b_points: bool,
) -> tuple | None:
    """First (β, j, x) with x ∈ table(β,j) violating σ̲(α) ∈ U0(σ̲(β),j)"""
    smash = request.cert.smash
    p0 = request.p0
    rho_inverse = {point: pair for pair, point in trace.rho.items()}
    for beta in trace.Astar:
        if beta not in smash:
            return (beta,)
        for j in range(trace.n):
            target = p0.U.get((smash[beta], j), frozenset())
            for x in sorted(table.get((beta, j), frozenset())):
                if b_points:
                    if x not in rho_inverse:
                        continue
                    alpha = rho_inverse[x][0]
                elif x in smash:
                    alpha = x
                else:
                    continue
                if smash.get(alpha) not in target:
                    return (beta, j, x)
    return None


def _claim_reading_witness(
    trace: AmalgamationTrace, request: AmalgamationRequest
) -> tuple | None:
    """Each ⟨α,i⟩ ∈ W_{1−ε}(σ*(β),j) has σ̲(α) ∈ U0(σ̲(β),j)"""
    smash, exchange = request.cert.smash, request.cert.exchange
    for eps in (0, 1):
        for beta, j in request.side(eps).pairs():
            target = request.p0.U[(smash[beta], j)]
            pairs = trace.W[1 - eps].get((exchange[beta], j), frozenset())
            for alpha, i in sorted(pairs):
                if smash[alpha] not in target:
                    return (eps, beta, j, (alpha, i))
    return None


def _validity_witness(cond: Condition, strict: bool) -> Any | None:
    try:
        verdict = validate_condition(cond, strict=strict)
    except MalformedConditionError as e:
        return ("P1", e.field)
    first = verdict.first
    return None if first is None else (first.clause, first.witness)


def _extension_witness(
    cond: Condition, request: AmalgamationRequest, strict: bool
) -> Any | None:
    try:
        check_structure(cond)
    except MalformedConditionError as e:
        return ("P1", e.field)
    for eps in (0, 1):
        verdict = extension_clauses(cond, request.side(eps), strict)
        if not verdict.holds:
            return (eps, verdict.clause, verdict.witness)
    return None


def _star_witness(
    cells: Cells, request: AmalgamationRequest, strict: bool
) -> Any | None:
    xi0, xi1, k, m = request.xi0, request.xi1, request.k, request.m
    upper = cells.get((xi1, m), frozenset())
    middle = cells.get((xi1, k), frozenset())
    lower = cells.get((xi0, k), frozenset())
    if xi0 not in upper:
        return ("xi0 ∈ U(xi1,m)", xi0, xi1, m)
    if not is_included(upper, middle, strict):
        return ("U(xi1,m) ⊂ U(xi1,k)", xi1, m, k)
    if not is_included(middle, lower, strict):
        return ("U(xi1,k) ⊂ U(xi0,k)", xi1, xi0, k)
    return None


def eq_u2_variant(trace: AmalgamationTrace, request: AmalgamationRequest) -> Cells:
    """U rebuilt with ρ″V1(ξ1,k) in place of U'(ξ1,k)"""
    extra = trace.embed(trace.V[1].get((request.xi1, request.k), frozenset()))
    return {
        (z, j): value | extra if modification_guard(request, z, j) else value
        for (z, j), value in trace.Uprime.items()
    }


def verify_amalgamation(
    trace: AmalgamationTrace, request: AmalgamationRequest, strict: bool = False
) -> ClaimReport:
    """Check every claim of the construction against a trace"""
    report = ClaimReport()
    Ufinal = trace.Ufinal or {}
    pprime, final = trace.pprime, Condition.build(trace.points, trace.n, Ufinal)

    report.record("push", _push_witness(trace, request, trace.Uprime, b_points=False))
    report.record("push2", _push_witness(trace, request, trace.Uprime, b_points=True))
    report.record("push3", _push_witness(trace, request, Ufinal, b_points=True))
    report.record("uprime_valid", _validity_witness(pprime, strict))
    report.record("uprime_extends", _extension_witness(pprime, request, strict))
    report.record("final_valid", _validity_witness(final, strict))
    report.record("final_extends", _extension_witness(final, request, strict))
    report.record("star", _star_witness(Ufinal, request, strict))

    # U(z,j) ∖ U'(z,j) ⊂ ρ″V1(ξ1,k)
    allowed = trace.embed(trace.V[1].get((request.xi1, request.k), frozenset()))
    witness = None
    for key in sorted(Ufinal):
        added = Ufinal[key] - trace.Uprime.get(key, frozenset())
        if not added <= allowed:
            witness = (key, tuple(sorted(added - allowed)))
            break
    report.record("eq_u_uprime", witness)

    variant = eq_u2_variant(trace, request)
    witness = None
    for key in sorted(set(variant) | set(Ufinal)):
        if variant.get(key) != Ufinal.get(key):
            witness = (key,)
            break
    report.record("eq_u2", witness)

    report.record("push2_claim_reading", _claim_reading_witness(trace, request))

    # U'(β,j) ∩ A_ε = U_ε(β,j)
    witness = None
    for eps in (0, 1):
        side = request.side(eps)
        for key in side.pairs():
            row = trace.Uprime.get(key)
            if row is None or row & side.support != side.U[key]:
                witness = (eps, key)
                break
        if witness:
            break
    report.record("restriction", witness)

    astar = frozenset(trace.Astar)
    witness = None
    for key in sorted(Ufinal):
        if Ufinal[key] & astar != trace.Uprime.get(key, frozenset()) & astar:
            witness = (key,)
            break
    report.record("astar_unchanged", witness)

    if not report.all_passed:
        logger.info("[amalgamation] failed checks: %s", ", ".join(report.failed))
    return report
