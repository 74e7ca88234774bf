"""Descending chains of conditions and their limit structures.

A finite chain stands in for the generic filter: the limit structure is the
pointwise union U(α,i) = ⋃{U_p(α,i) : p in the chain}. Genericity is replaced
by an explicit round-robin task list (add a missing point, deepen, optionally
amalgamate with a fresh twin), with seeded random choices inside each task.
"""

import logging
import random
from dataclasses import dataclass, field

from amalgamation import (
    AmalgamationRequest,
    AmalgamationTrace,
    amalgamate,
    make_request,
)
from config import config
from core_conditions import (
    Cells,
    Condition,
    Pair,
    Verdict,
    add_point,
    add_point_joining,
    cells_above,
    check_extension,
    deepen,
    is_included,
    relabel,
    validate_condition,
)
from errors import (
    ConfigurationError,
    InvalidConditionError,
    InvalidSpaceError,
    NoAmalgamablePairError,
    NotAChainError,
    PostconditionError,
    SimulationBudgetExceeded,
)
from finite_topology import Family, FiniteSpace, generate_topology, sort_family
from twins import MarkedCondition, find_amalgamable_pair

logger = logging.getLogger(__name__)


@dataclass
class SimulationConfig:
    """Parameters of one simulation run"""

    universe: int  # N: points 0..N-1 must all be added
    depth: int  # target n
    seed: int
    budget: int = config.SIM_BUDGET  # max extension steps
    grow_rate: float = 0.0  # chance a new point joins existing cells
    base_repair: bool = False
    amalgamations: int = 0  # rounds of amalgamation with a fresh twin

    def __post_init__(self) -> None:
        if self.universe < 1:
            raise ConfigurationError("universe must be at least 1")
        if self.depth < 1:
            raise ConfigurationError("depth must be at least 1")
        if not 0.0 <= self.grow_rate <= 1.0:
            raise ConfigurationError("grow_rate must lie in [0, 1]")


@dataclass
class LimitStructure:
    """The union family over a descending chain"""

    points: tuple[int, ...]
    depth: int
    U: Cells
    chain: list[Condition] = field(default_factory=list)
    unmet: list[tuple[int, Pair, Pair]] = field(default_factory=list)

    def as_condition(self) -> Condition:
        return Condition.build(self.points, self.depth, self.U)


def limit_structure(chain: list[Condition]) -> LimitStructure:
    """Pointwise union of a descending chain, checked against clause (c)"""
    for index, p in enumerate(chain):
        verdict = validate_condition(p)
        if not verdict.ok:
            raise NotAChainError(f"chain element {index} is not in P: {verdict.first}")
    for index in range(1, len(chain)):
        extension = check_extension(chain[index], chain[index - 1])
        if not extension.holds:
            raise NotAChainError(
                f"chain element {index} does not extend element {index - 1}: "
                f"clause {extension.clause} witness {extension.witness}"
            )

    U: dict[Pair, frozenset[int]] = {}
    for p in chain:
        for key, value in p.U.items():
            U[key] = U.get(key, frozenset()) | value
    points = tuple(sorted({a for p in chain for a in p.A}))
    depth = max((p.n for p in chain), default=0)

    for index, p in enumerate(chain):
        support = p.support
        for key in p.pairs():
            if U[key] & support != p.U[key]:
                raise NotAChainError(
                    f"chain element {index} disagrees with the limit at {key}"
                )

    return LimitStructure(
        points=points, depth=depth, U=dict(sorted(U.items())), chain=list(chain)
    )


def check_p3_global(struct: LimitStructure) -> Verdict:
    """(P3) over every (α, β, i) of the limit structure.

    Equivalently: whenever β ∈ U(α,i) ⊂ U(β,0) we have α ≥ β, so no row
    indexed below β isolates β inside U(β,0).
    """
    verdict = validate_condition(struct.as_condition())
    return Verdict([v for v in verdict.violations if v.clause == "P3"])


def check_p2_global(struct: LimitStructure) -> Verdict:
    verdict = validate_condition(struct.as_condition())
    return Verdict([v for v in verdict.violations if v.clause == "P2"])


def unmet_obligations(p: Condition) -> list[tuple[int, Pair, Pair]]:
    """(x, c1, c2) with x ∈ U(c1) ∩ U(c2) but no U(x,l) inside the intersection"""
    unmet = []
    pairs = p.pairs()
    for x in p.A:
        around = [key for key in pairs if x in p.U[key]]
        own = [p.U[(x, l)] for l in range(p.n)]
        for first_index, c1 in enumerate(around):
            for c2 in around[first_index:]:
                meet = p.U[c1] & p.U[c2]
                if not any(cell <= meet for cell in own):
                    unmet.append((x, c1, c2))
    return unmet


def _grow_point(
    p: Condition, alpha: int, rng: random.Random, grow_rate: float
) -> Condition:
    """add_point, or with probability grow_rate join the cells above a random cell"""
    pairs = p.pairs()
    if not pairs or rng.random() >= grow_rate:
        return add_point(p, alpha)
    seed = rng.choice(pairs)
    try:
        return add_point_joining(p, alpha, cells_above(p, seed))
    except InvalidConditionError as e:
        logger.debug("[sim] growth of %d rejected: %s", alpha, e)
        return add_point(p, alpha)


def fresh_twin(p: Condition, floor: int) -> Condition:
    """A copy of p on points at or above floor, disjoint from A_p"""
    start = max(floor, p.A[-1] + 1 if p.A else 0)
    return relabel(p, {a: start + rank for rank, a in enumerate(p.A)})


def _amalgamation_step(p: Condition, rng: random.Random, floor: int) -> Condition:
    twin = fresh_twin(p, floor)
    xi0 = rng.choice(p.A)
    k = rng.randrange(p.n - 1)
    m = rng.randrange(k + 1, p.n)
    request = make_request(p, twin, xi0, k, m)
    return amalgamate(request).p


class _ChainBuilder:
    """Appends extension steps and enforces the step budget"""

    def __init__(self, budget: int):
        self.budget = budget
        self.chain = [Condition.empty()]

    @property
    def current(self) -> Condition:
        return self.chain[-1]

    def push(self, q: Condition, task: str) -> None:
        if len(self.chain) > self.budget:
            partial = limit_structure(self.chain)
            raise SimulationBudgetExceeded(
                f"budget of {self.budget} extension steps exhausted", partial
            )
        self.chain.append(q)
        logger.debug(
            "[sim] step %d: %s |A|=%d n=%d", len(self.chain) - 1, task, len(q.A), q.n
        )


def run_simulation(cfg: SimulationConfig) -> LimitStructure:
    """Extend the empty condition until every point and level is present"""
    rng = random.Random(cfg.seed)
    builder = _ChainBuilder(cfg.budget)
    missing = list(range(cfg.universe))
    rounds = cfg.amalgamations
    if rounds and cfg.depth < 2:
        logger.warning(
            "[sim] amalgamation needs depth >= 2; skipping %d rounds", rounds
        )
        rounds = 0

    while missing or builder.current.n < cfg.depth or rounds:
        if missing:
            alpha = missing.pop(rng.randrange(len(missing)))
            builder.push(_grow_point(builder.current, alpha, rng, cfg.grow_rate), "add")
        if builder.current.n < cfg.depth:
            builder.push(deepen(builder.current), "deepen")
        if rounds and builder.current.n >= 2 and builder.current.A:
            q = _amalgamation_step(builder.current, rng, cfg.universe)
            builder.push(q, "amalgamate")
            rounds -= 1

    unmet: list[tuple[int, Pair, Pair]] = []
    if cfg.base_repair:
        unmet = unmet_obligations(builder.current)
        if unmet:
            logger.info(
                "[sim] base repair: %d open intersections, deepening", len(unmet)
            )
            builder.push(deepen(builder.current), "base-repair")
            unmet = unmet_obligations(builder.current)
        if unmet:
            logger.warning("[sim] base repair left %d obligations unmet", len(unmet))

    struct = limit_structure(builder.chain)
    struct.unmet = unmet
    logger.info(
        "[sim] seed=%d: %d steps, %d points, depth %d",
        cfg.seed,
        len(builder.chain) - 1,
        len(struct.points),
        struct.depth,
    )
    return struct


def kill_irreducibility_attempt(
    family: list[MarkedCondition], k: int, m: int
) -> AmalgamationTrace:
    """Amalgamate the least qualifying twin pair so that
    α_ξ ∈ U_p(α_η,m) and U_p(α_η,k) ⊂ U_p(α_ξ,k)."""
    found = find_amalgamable_pair(family)
    if found is None:
        raise NoAmalgamablePairError("no pair of the family qualifies for amalgamation")
    (xi, eta), cert = found
    first, second = family[xi], family[eta]
    request = AmalgamationRequest(
        p0=first.cond, p1=second.cond, cert=cert, xi0=first.mark, k=k, m=m
    )
    trace = amalgamate(request)

    cells = trace.Ufinal or {}
    low, high = first.mark, second.mark
    nested = is_included(cells[(high, k)], cells[(low, k)])
    if low not in cells[(high, m)] or not nested:
        raise PostconditionError(
            f"killer move failed for pair ({xi}, {eta}) with marks ({low}, {high})"
        )
    logger.info(
        "[sim] killer move on pair (%d, %d), marks (%d, %d)", xi, eta, low, high
    )
    return trace


def export_fragment(
    struct: LimitStructure, subset: set[int] | frozenset[int]
) -> tuple[FiniteSpace, Family]:
    """Subspace on subset generated by the traces U(α,i) ∩ subset, α ∈ subset"""
    chosen = frozenset(subset)
    if not chosen <= set(struct.points):
        raise InvalidSpaceError("subset is not contained in the limit's points")
    traces = [
        struct.U[(alpha, i)] & chosen
        for alpha in sorted(chosen)
        for i in range(struct.depth)
    ]
    return generate_topology(chosen, traces), sort_family(traces)
