"""Randomized verification: generators, fuzz properties, mutations and shrinking.

Inputs are generated by construction (never generate-then-filter), every trial
draws from its own RNG stream derived from (seed, property, trial), and each
failure is shrunk before it is reported.
"""

import functools
import logging
import random
import time
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from typing import Any

from amalgamation import (
    CHECKS,
    AmalgamationRequest,
    AmalgamationTrace,
    amalgamate,
    check_hypothesis,
    make_request,
    verify_amalgamation,
)
from config import config
from core_conditions import (
    Cells,
    Condition,
    add_point,
    add_point_joining,
    cells_above,
    check_extension,
    deepen,
    relabel,
    restrict,
    validate_condition,
)
from errors import (
    ConfigurationError,
    InvalidConditionError,
    PosetError,
    PropertyHoldsError,
    UnknownPropertyError,
)
from finite_topology import (
    FiniteSpace,
    brute_force_irreducible_base,
    check_decomposition,
    enumerate_topologies,
    find_irreducible_base,
    is_t0,
    minimal_neighborhood_decomposition,
)
from generic_sim import kill_irreducibility_attempt
from seeding import derive_rng
from twins import (
    MarkedCondition,
    canonicalize,
    is_twin_pair,
    order_iso,
    supports_ordered,
)

logger = logging.getLogger(__name__)

GROW_RATE = 0.4  # chance of a grow step after each construction step
JOIN_RATE = 0.5  # chance a new point joins existing cells
MAX_FAMILY = 8


@dataclass
class GenParams:
    """Bounds for generated inputs and the size of a campaign"""

    max_points: int = config.FUZZ_MAX_POINTS  # per side
    max_depth: int = config.FUZZ_MAX_DEPTH
    universe: int = config.FUZZ_UNIVERSE  # ordinals are drawn below this
    seed: int = 0
    trials: int = config.FUZZ_TRIALS

    def __post_init__(self) -> None:
        if self.max_points < 0 or self.max_depth < 0:
            raise ConfigurationError("max_points and max_depth must be non-negative")
        if self.universe < 1:
            raise ConfigurationError("universe must be at least 1")
        if self.trials < 0:
            raise ConfigurationError("trials must be non-negative")


@dataclass
class CheckOptions:
    mutation: str | None = None
    strict: bool = False


@dataclass
class FuzzFailure:
    """A failing trial with its original and shrunk inputs"""

    trial: int
    property_name: str
    case: Any
    witness: Any
    shrunk: Any
    shrunk_witness: Any


@dataclass
class FuzzReport:
    trials: int
    properties: tuple[str, ...]
    failures: list[FuzzFailure] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures


# -- generation ---------------------------------------------------------------


def _add_step(p: Condition, alpha: int, rng: random.Random) -> Condition:
    pairs = p.pairs()
    if pairs and rng.random() < JOIN_RATE:
        try:
            return add_point_joining(p, alpha, cells_above(p, rng.choice(pairs)))
        except InvalidConditionError:
            pass
    return add_point(p, alpha)


def _grow_step(p: Condition, rng: random.Random) -> Condition:
    """Put an existing point into U(α,i) and every row of α above level i.

    The result is committed only if it is still in P.
    """
    alpha, i = rng.choice(p.pairs())
    candidates = sorted(p.support - p.U[(alpha, i)])
    if not candidates:
        return p
    y = rng.choice(candidates)
    U = dict(p.U)
    for level in range(i + 1):
        U[(alpha, level)] = U[(alpha, level)] | {y}
    grown = Condition.build(p.A, p.n, U)
    return grown if validate_condition(grown).ok else p


def _build_condition(rng: random.Random, points: list[int], depth: int) -> Condition:
    tasks = ["add"] * len(points) + ["deepen"] * depth
    rng.shuffle(tasks)
    order = list(points)
    rng.shuffle(order)

    p = Condition.empty()
    for task in tasks:
        p = _add_step(p, order.pop(), rng) if task == "add" else deepen(p)
        if p.pairs() and rng.random() < GROW_RATE:
            p = _grow_step(p, rng)
    return p


def gen_condition(params: GenParams, rng: random.Random) -> Condition:
    """A random condition in P with at most max_points points and depth ≤ max_depth"""
    count = rng.randint(min(1, params.max_points), params.max_points)
    count = min(count, params.universe)
    depth = rng.randint(min(1, params.max_depth), params.max_depth) if count else 0
    points = rng.sample(range(params.universe), count)
    return _build_condition(rng, points, depth)


def _twin_layout(params: GenParams, rng: random.Random, copies: int) -> tuple[int, int]:
    """Sizes (d, s) of root and private part so that d + copies·s fits the universe"""
    if params.max_depth < 2:
        raise ConfigurationError("twin requests need max_depth >= 2")
    if params.max_points < 1 or params.universe < copies:
        raise ConfigurationError("universe too small for twin requests")
    s = rng.randint(1, min(params.max_points, params.universe // copies))
    d = rng.randint(0, min(params.max_points - s, params.universe - copies * s))
    return d, s


def _levels(rng: random.Random, n: int) -> tuple[int, int]:
    k = rng.randrange(n - 1)
    return k, rng.randrange(k + 1, n)


def gen_twin_request(params: GenParams, rng: random.Random) -> AmalgamationRequest:
    """Twins over D ∪ S0 and D ∪ S1 with D < S0 < S1, ξ0 ∈ S0 and k < m < n"""
    d, s = _twin_layout(params, rng, copies=2)
    n = rng.randint(2, params.max_depth)
    shape = _build_condition(rng, list(range(d + s)), n)

    sample = sorted(rng.sample(range(params.universe), d + 2 * s))
    root, first, second = sample[:d], sample[d : d + s], sample[d + s :]
    p0 = relabel(shape, dict(enumerate(root + first)))
    p1 = relabel(shape, dict(enumerate(root + second)))

    k, m = _levels(rng, n)
    return make_request(p0, p1, rng.choice(first), k, m)


def gen_twin_family(
    params: GenParams, rng: random.Random
) -> tuple[list[MarkedCondition], int, int]:
    """2–8 pairwise twins sharing a root, marked at one rank.

    Members come in support order, so marks increase with the index and every
    consecutive pair qualifies for the killer move.
    """
    size = rng.randint(2, MAX_FAMILY)
    size = max(2, min(size, params.universe))
    d, s = _twin_layout(params, rng, copies=size)
    n = rng.randint(2, params.max_depth)
    shape = _build_condition(rng, list(range(d + s)), n)
    mark_rank = rng.randrange(d, d + s)

    sample = sorted(rng.sample(range(params.universe), d + size * s))
    root = sample[:d]
    family = []
    for copy in range(size):
        private = sample[d + copy * s : d + (copy + 1) * s]
        labels = dict(enumerate(root + private))
        family.append(MarkedCondition(relabel(shape, labels), labels[mark_rank]))

    k, m = _levels(rng, n)
    return family, k, m


def gen_chain(params: GenParams, rng: random.Random) -> list[Condition]:
    """A generated condition followed by 1–3 extension steps"""
    chain = [gen_condition(params, rng)]
    for _ in range(rng.randint(1, 3)):
        p = chain[-1]
        fresh = sorted(set(range(params.universe)) - p.support)
        if fresh and rng.random() < 0.6:
            chain.append(_add_step(p, rng.choice(fresh), rng))
        else:
            chain.append(deepen(p))
    return chain


@functools.lru_cache(maxsize=None)
def _topologies(n: int, t0_only: bool) -> tuple[FiniteSpace, ...]:
    spaces = enumerate_topologies(n)
    return tuple(s for s in spaces if is_t0(s)) if t0_only else tuple(spaces)


# -- mutations ----------------------------------------------------------------


def _with_row(cells: Cells, key: tuple[int, int], value: frozenset[int]) -> Cells:
    updated = dict(cells)
    updated[key] = value
    return updated


def _push_violation(
    trace: AmalgamationTrace, request: AmalgamationRequest
) -> tuple[int, int, int] | None:
    """First (β, j, α) over A* with σ̲(α) ∉ U0(σ̲(β), j)"""
    smash = request.cert.smash
    for beta in trace.Astar:
        for j in range(trace.n):
            target = request.p0.U[(smash[beta], j)]
            for alpha in trace.Astar:
                if smash[alpha] not in target:
                    return beta, j, alpha
    return None


def _mutate_push(
    trace: AmalgamationTrace, request: AmalgamationRequest
) -> AmalgamationTrace | None:
    found = _push_violation(trace, request)
    if found is None:
        return None
    beta, j, alpha = found
    mutated = trace.copy()
    row = trace.Uprime[(beta, j)] | {alpha}
    mutated.Uprime = _with_row(trace.Uprime, (beta, j), row)
    return mutated


def _mutate_push2(
    trace: AmalgamationTrace, request: AmalgamationRequest
) -> AmalgamationTrace | None:
    found = _push_violation(trace, request)
    if found is None:
        return None
    beta, j, alpha = found
    mutated = trace.copy()
    point = trace.rho[(alpha, 0)]
    row = trace.Uprime[(beta, j)] | {point}
    mutated.Uprime = _with_row(trace.Uprime, (beta, j), row)
    return mutated


def _mutate_push3(
    trace: AmalgamationTrace, request: AmalgamationRequest
) -> AmalgamationTrace | None:
    found = _push_violation(trace, request)
    if found is None or trace.Ufinal is None:
        return None
    beta, j, alpha = found
    mutated = trace.copy()
    point = trace.rho[(alpha, 0)]
    row = trace.Ufinal[(beta, j)] | {point}
    mutated.Ufinal = _with_row(trace.Ufinal, (beta, j), row)
    return mutated


def _copy_row_onto_block(
    cells: Cells, trace: AmalgamationTrace, request: AmalgamationRequest
) -> Cells:
    """Every row of b = ρ(ξ1,0) becomes U(ξ1,0); breaks (P3) at (ξ1, b, 0)"""
    b = trace.rho[(request.xi1, 0)]
    updated = dict(cells)
    for j in range(trace.n):
        updated[(b, j)] = cells[(request.xi1, 0)]
    return updated


def _mutate_uprime_valid(
    trace: AmalgamationTrace, request: AmalgamationRequest
) -> AmalgamationTrace | None:
    mutated = trace.copy()
    mutated.Uprime = _copy_row_onto_block(trace.Uprime, trace, request)
    return mutated


def _mutate_final_valid(
    trace: AmalgamationTrace, request: AmalgamationRequest
) -> AmalgamationTrace | None:
    if trace.Ufinal is None:
        return None
    mutated = trace.copy()
    mutated.Ufinal = _copy_row_onto_block(trace.Ufinal, trace, request)
    return mutated


def _break_restriction(cells: Cells, request: AmalgamationRequest) -> Cells:
    """Add a point of A0 missing from U0(β,j), else drop ξ0 from its deepest row"""
    p0 = request.p0
    for key in p0.pairs():
        missing = sorted(p0.support - p0.U[key])
        if missing:
            return _with_row(cells, key, cells[key] | {missing[0]})
    key = (request.xi0, request.n - 1)
    return _with_row(cells, key, cells[key] - {request.xi0})


def _mutate_uprime_extends(
    trace: AmalgamationTrace, request: AmalgamationRequest
) -> AmalgamationTrace | None:
    mutated = trace.copy()
    mutated.Uprime = _break_restriction(trace.Uprime, request)
    return mutated


def _mutate_final_extends(
    trace: AmalgamationTrace, request: AmalgamationRequest
) -> AmalgamationTrace | None:
    if trace.Ufinal is None:
        return None
    mutated = trace.copy()
    mutated.Ufinal = _break_restriction(trace.Ufinal, request)
    return mutated


def _mutate_star(
    trace: AmalgamationTrace, request: AmalgamationRequest
) -> AmalgamationTrace | None:
    if trace.Ufinal is None:
        return None
    key = (request.xi1, request.m)
    mutated = trace.copy()
    mutated.Ufinal = _with_row(trace.Ufinal, key, trace.Ufinal[key] - {request.xi0})
    return mutated


def _mutate_eq_u_uprime(
    trace: AmalgamationTrace, request: AmalgamationRequest
) -> AmalgamationTrace | None:
    if trace.Ufinal is None:
        return None
    b = trace.rho[(request.xi1, request.k)]
    mutated = trace.copy()
    cells = dict(trace.Ufinal)
    for j in range(trace.n):
        cells[(b, j)] = cells[(b, j)] | {request.xi0}
    mutated.Ufinal = cells
    return mutated


def _mutate_eq_u2(
    trace: AmalgamationTrace, request: AmalgamationRequest
) -> AmalgamationTrace | None:
    if trace.Ufinal is None:
        return None
    key = (request.xi0, request.k)
    point = trace.rho[(request.xi1, request.k)]
    mutated = trace.copy()
    mutated.Ufinal = _with_row(trace.Ufinal, key, trace.Ufinal[key] - {point})
    return mutated


Mutation = Callable[[AmalgamationTrace, AmalgamationRequest], AmalgamationTrace | None]

# Each hook breaks exactly the check of the same name
MUTATIONS: dict[str, Mutation] = {
    "push": _mutate_push,
    "push2": _mutate_push2,
    "push3": _mutate_push3,
    "uprime_valid": _mutate_uprime_valid,
    "uprime_extends": _mutate_uprime_extends,
    "final_valid": _mutate_final_valid,
    "final_extends": _mutate_final_extends,
    "star": _mutate_star,
    "eq_u_uprime": _mutate_eq_u_uprime,
    "eq_u2": _mutate_eq_u2,
}


# -- property checks ------------------------------------------------------------

# Checks that must hold on every amalgam; push2_claim_reading is reported only
REQUIRED_CHECKS = tuple(name for name in CHECKS if name != "push2_claim_reading")


def _error_witness(e: PosetError) -> tuple[str, str, str]:
    return ("error", type(e).__name__, str(e))


def _checked_trace(
    request: AmalgamationRequest, options: CheckOptions, names: tuple[str, ...]
) -> Any | None:
    try:
        trace = amalgamate(request)
    except PosetError as e:
        return _error_witness(e)
    if options.mutation is not None:
        mutated = MUTATIONS[options.mutation](trace, request)
        if mutated is None:
            return None
        trace = mutated
    report = verify_amalgamation(trace, request, strict=options.strict)
    failed = [name for name in report.failed if name in names]
    if not failed:
        return None
    return tuple((name, report.witnesses.get(name)) for name in failed)


def _check_amalgamation_full(
    request: AmalgamationRequest, options: CheckOptions
) -> Any | None:
    return _checked_trace(request, options, REQUIRED_CHECKS)


def _check_eq_u2(request: AmalgamationRequest, options: CheckOptions) -> Any | None:
    return _checked_trace(request, options, ("eq_u_uprime", "eq_u2"))


def _check_strict(request: AmalgamationRequest, options: CheckOptions) -> Any | None:
    strict = CheckOptions(mutation=options.mutation, strict=True)
    return _checked_trace(request, strict, REQUIRED_CHECKS)


def _gen_soundness_case(
    params: GenParams, rng: random.Random
) -> tuple[Condition, AmalgamationRequest]:
    return gen_condition(params, rng), gen_twin_request(params, rng)


def _check_generator_soundness(
    case: tuple[Condition, AmalgamationRequest], options: CheckOptions
) -> Any | None:
    cond, request = case
    verdict = validate_condition(cond)
    if not verdict.ok:
        return ("condition", str(verdict.first))
    try:
        check_hypothesis(request)
    except PosetError as e:
        return ("request", str(e))
    return None


def _check_order_laws(chain: list[Condition], options: CheckOptions) -> Any | None:
    try:
        for index, p in enumerate(chain):
            if not check_extension(p, p, options.strict).holds:
                return ("reflexive", index)
        for later in range(1, len(chain)):
            for earlier in range(later):
                verdict = check_extension(chain[later], chain[earlier], options.strict)
                if not verdict.holds:
                    clause, witness = verdict.clause, verdict.witness
                    return ("descending", earlier, later, clause, witness)
    except PosetError as e:
        return _error_witness(e)
    return None


def _gen_twin_law_case(
    params: GenParams, rng: random.Random
) -> tuple[AmalgamationRequest, Condition]:
    return gen_twin_request(params, rng), gen_condition(params, rng)


def _twin_oracle(p: Condition, q: Condition) -> bool:
    """Twins by shape key plus identity on the common points"""
    if canonicalize(p) != canonicalize(q):
        return False
    sigma = order_iso(p.A, q.A)
    return sigma is not None and all(sigma[x] == x for x in p.support & q.support)


def _check_twin_laws(
    case: tuple[AmalgamationRequest, Condition], options: CheckOptions
) -> Any | None:
    request, other = case
    p0, p1 = request.p0, request.p1
    cert, back = is_twin_pair(p0, p1), is_twin_pair(p1, p0)
    if cert is None or back is None:
        return ("symmetry", cert is None, back is None)
    if back.sigma != cert.inverted().sigma:
        return ("inverse",)
    for x, y in sorted(cert.exchange.items()):
        if cert.exchange[y] != x:
            return ("involution", x)
    for delta in sorted(cert.root):
        if cert.exchange[delta] != delta:
            return ("root-fixed", delta)
    if frozenset(cert.smash.values()) != p0.support:
        return ("smash-onto",)
    for label, q in (("p1", p1), ("other", other)):
        ordered = supports_ordered(p0.A, q.A)
        direct = is_twin_pair(p0, q) is not None
        if (_twin_oracle(p0, q) and ordered) != (direct and ordered):
            return ("oracle", label)
    return None


def _check_killer_move(
    case: tuple[list[MarkedCondition], int, int], options: CheckOptions
) -> Any | None:
    family, k, m = case
    try:
        kill_irreducibility_attempt(family, k, m)
    except PosetError as e:
        return _error_witness(e)
    return None


def _gen_space(params: GenParams, rng: random.Random) -> FiniteSpace:
    return rng.choice(_topologies(rng.randint(1, 3), False))


def _gen_t0_space(params: GenParams, rng: random.Random) -> FiniteSpace:
    return rng.choice(_topologies(rng.randint(1, 4), True))


def _check_topology_oracle(space: FiniteSpace, options: CheckOptions) -> Any | None:
    try:
        found = find_irreducible_base(space)
        oracle = brute_force_irreducible_base(space)
    except PosetError as e:
        return _error_witness(e)
    if (found is None) != (oracle is None):
        return ("disagree", found is not None, oracle is not None)
    if found is not None and not check_decomposition(space, found[1]).holds:
        return ("decomposition",)
    return None


def _check_finite_t0(space: FiniteSpace, options: CheckOptions) -> Any | None:
    verdict = check_decomposition(space, minimal_neighborhood_decomposition(space))
    return None if verdict.holds else (verdict.clause, verdict.witness)


# -- shrinking moves --------------------------------------------------------------


def drop_level(p: Condition, level: int) -> Condition:
    """Remove one level, shifting the deeper ones up"""
    U = {
        (a, i if i < level else i - 1): value
        for (a, i), value in p.U.items()
        if i != level
    }
    return Condition.build(p.A, p.n - 1, U)


def _rebuild_request(
    request: AmalgamationRequest, p0: Condition, k: int, m: int
) -> AmalgamationRequest | None:
    """Copy a shrunk p0 onto the other side along σ; None if the hypothesis breaks"""
    if not validate_condition(p0).ok:
        return None
    p1 = relabel(p0, {a: request.cert.sigma[a] for a in p0.A})
    try:
        candidate = make_request(p0, p1, request.xi0, k, m)
        check_hypothesis(candidate)
    except PosetError:
        return None
    return candidate


def _request_moves(request: AmalgamationRequest) -> Iterator[AmalgamationRequest]:
    p0 = request.p0
    for a in p0.A:
        if a == request.xi0:
            continue
        smaller = restrict(p0, p0.support - {a})
        candidate = _rebuild_request(request, smaller, request.k, request.m)
        if candidate is not None:
            yield candidate

    for level in reversed(range(p0.n)):
        if level in (request.k, request.m):
            continue
        k = request.k - (request.k > level)
        m = request.m - (request.m > level)
        candidate = _rebuild_request(request, drop_level(p0, level), k, m)
        if candidate is not None:
            yield candidate

    for alpha, i in p0.pairs():
        for y in sorted(p0.U[(alpha, i)] - {alpha}):
            U = dict(p0.U)
            for level in range(i, p0.n):
                U[(alpha, level)] = U[(alpha, level)] - {y}
            smaller = Condition.build(p0.A, p0.n, U)
            candidate = _rebuild_request(request, smaller, request.k, request.m)
            if candidate is not None:
                yield candidate


def _family_moves(
    case: tuple[list[MarkedCondition], int, int],
) -> Iterator[tuple[list[MarkedCondition], int, int]]:
    family, k, m = case
    if len(family) <= 2:
        return
    for index in range(len(family)):
        yield family[:index] + family[index + 1 :], k, m


def _chain_moves(chain: list[Condition]) -> Iterator[list[Condition]]:
    for index in range(1, len(chain)):
        yield chain[:index] + chain[index + 1 :]


def _no_moves(case: Any) -> Iterator[Any]:
    return iter(())


@dataclass(frozen=True)
class Property:
    """A named law: how to generate a case, check it and make it smaller"""

    name: str
    generate: Callable[[GenParams, random.Random], Any]
    check: Callable[[Any, CheckOptions], Any | None]
    moves: Callable[[Any], Iterator[Any]] = _no_moves


PROPERTIES: dict[str, Property] = {
    prop.name: prop
    for prop in (
        Property(
            "generator-soundness", _gen_soundness_case, _check_generator_soundness
        ),
        Property("order-laws", gen_chain, _check_order_laws, _chain_moves),
        Property("twin-laws", _gen_twin_law_case, _check_twin_laws),
        Property(
            "amalgamation-full",
            gen_twin_request,
            _check_amalgamation_full,
            _request_moves,
        ),
        Property("eq-u2", gen_twin_request, _check_eq_u2, _request_moves),
        Property("killer-move", gen_twin_family, _check_killer_move, _family_moves),
        Property("topology-oracle", _gen_space, _check_topology_oracle),
        Property("finite-t0", _gen_t0_space, _check_finite_t0),
        Property("strict-inclusion", gen_twin_request, _check_strict, _request_moves),
    )
}

# strict-inclusion measures the strict reading and is expected to fail
DEFAULT_PROPERTIES = tuple(name for name in PROPERTIES if name != "strict-inclusion")


def _lookup(names: tuple[str, ...], mutation: str | None) -> list[Property]:
    unknown = [name for name in names if name not in PROPERTIES]
    if unknown:
        raise UnknownPropertyError(
            f"unknown property {unknown[0]!r}; known: {', '.join(PROPERTIES)}"
        )
    if mutation is not None and mutation not in MUTATIONS:
        raise UnknownPropertyError(
            f"unknown mutation {mutation!r}; known: {', '.join(MUTATIONS)}"
        )
    return [PROPERTIES[name] for name in names]


def shrink(
    case: Any,
    property_name: str,
    mutation: str | None = None,
    strict: bool = False,
    max_steps: int = config.SHRINK_MAX_STEPS,
) -> tuple[Any, Any]:
    """Greedily apply the first move that keeps the property failing.

    Returns the minimal case and its witness. Raises PropertyHoldsError if the
    property holds on the input.
    """
    (prop,) = _lookup((property_name,), mutation)
    options = CheckOptions(mutation=mutation, strict=strict)
    witness = prop.check(case, options)
    if witness is None:
        raise PropertyHoldsError(f"{property_name} holds on the input")

    for step in range(max_steps):
        for candidate in prop.moves(case):
            candidate_witness = prop.check(candidate, options)
            if candidate_witness is not None:
                case, witness = candidate, candidate_witness
                logger.debug("[fuzz] shrink step %d for %s", step, property_name)
                break
        else:
            return case, witness
    logger.warning(
        "[fuzz] shrinking %s stopped after %d steps", property_name, max_steps
    )
    return case, witness


def run_fuzz(
    params: GenParams,
    properties: tuple[str, ...] | list[str] | None = None,
    mutation: str | None = None,
    strict: bool = False,
) -> FuzzReport:
    """Run every named property on params.trials generated cases each"""
    names = tuple(properties) if properties else DEFAULT_PROPERTIES
    selected = _lookup(names, mutation)
    options = CheckOptions(mutation=mutation, strict=strict)
    report = FuzzReport(trials=params.trials, properties=names)
    started = time.perf_counter()

    for trial in range(params.trials):
        for prop in selected:
            rng = derive_rng(params.seed, prop.name, trial)
            case = prop.generate(params, rng)
            witness = prop.check(case, options)
            if witness is None:
                continue
            shrunk, shrunk_witness = shrink(case, prop.name, mutation, strict)
            report.failures.append(
                FuzzFailure(trial, prop.name, case, witness, shrunk, shrunk_witness)
            )
            logger.debug("[fuzz] trial %d: %s failed: %s", trial, prop.name, witness)

    report.failures.sort(key=lambda f: (f.trial, names.index(f.property_name)))
    report.wall_time = time.perf_counter() - started
    logger.info(
        "[fuzz] %d trials x %d properties: %d failures in %.2fs",
        params.trials,
        len(selected),
        len(report.failures),
        report.wall_time,
    )
    return report
