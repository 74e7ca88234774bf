"""Finite topological spaces, bases and irreducible decompositions.

A base 𝒰 is irreducible when it splits as ⋃{𝒰_x : x ∈ X} so that
  (i)  each 𝒰_x is a neighbourhood base of x, and
  (ii) for each x the family 𝒰⁻_x = ⋃_{y≠x} 𝒰_y is not a base.
Owner families may overlap. ∅ never appears in a candidate base.
"""

import itertools
import logging
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

from config import config
from errors import InvalidSpaceError, SearchBudgetExceeded

logger = logging.getLogger(__name__)

OpenSet = frozenset[int]
Family = tuple[OpenSet, ...]


@dataclass(frozen=True)
class FiniteSpace:
    """A finite point set with its family of open sets"""

    points: frozenset[int]
    opens: frozenset[OpenSet]

    @property
    def nonempty_opens(self) -> Family:
        return sort_family(o for o in self.opens if o)


@dataclass
class Decomposition:
    """A base together with an owner family 𝒰_x for every point"""

    base: Family
    owners: dict[int, Family] = field(default_factory=dict)

    def without(self, x: int) -> Family:
        """𝒰⁻_x"""
        members = {v for y, family in self.owners.items() if y != x for v in family}
        return sort_family(members)


@dataclass
class DecompositionVerdict:
    """Outcome of check_decomposition: first failing clause and witness"""

    holds: bool
    clause: str | None = None
    witness: tuple | None = None


def sort_family(family: Iterable[Iterable[int]]) -> Family:
    """Deduplicate and order sets smallest-first, then lexicographically"""
    unique = {frozenset(s) for s in family}
    return tuple(sorted(unique, key=lambda s: (len(s), sorted(s))))


def generate_topology(
    points: Iterable[int], generators: Iterable[Iterable[int]]
) -> FiniteSpace:
    """All unions of finite intersections of the generators, plus ∅ and X"""
    universe = frozenset(points)
    gens = [frozenset(g) for g in generators]
    for g in gens:
        if not g <= universe:
            raise InvalidSpaceError(
                f"generator {sorted(g)} is not a subset of the points"
            )

    meets = set(gens) | {universe}
    frontier = set(meets)
    while frontier:
        fresh = {a & b for a in frontier for b in meets} - meets
        meets |= fresh
        frontier = fresh

    opens = set(meets) | {frozenset()}
    frontier = set(opens)
    while frontier:
        fresh = {a | b for a in frontier for b in opens} - opens
        opens |= fresh
        frontier = fresh

    return FiniteSpace(points=universe, opens=frozenset(opens))


def is_topology(points: Iterable[int], opens: Iterable[Iterable[int]]) -> bool:
    universe = frozenset(points)
    family = {frozenset(o) for o in opens}
    if frozenset() not in family or universe not in family:
        return False
    if any(not o <= universe for o in family):
        return False
    return all(a | b in family and a & b in family for a in family for b in family)


def minimal_neighborhoods(space: FiniteSpace) -> dict[int, OpenSet]:
    """x -> the intersection of all open sets containing x"""
    result = {}
    for x in sorted(space.points):
        around = [o for o in space.opens if x in o]
        result[x] = frozenset.intersection(*around)
    return result


def is_t0(space: FiniteSpace) -> bool:
    neighborhoods = minimal_neighborhoods(space)
    return len(set(neighborhoods.values())) == len(neighborhoods)


def _realizes(family: Iterable[OpenSet], x: int, o: OpenSet) -> bool:
    return any(x in v and v <= o for v in family)


def is_base(space: FiniteSpace, family: Iterable[Iterable[int]]) -> bool:
    """For every open O and x ∈ O some V in the family has x ∈ V ⊂ O"""
    members = [frozenset(v) for v in family]
    return all(_realizes(members, x, o) for o in space.opens for x in o)


def is_neighborhood_base(
    space: FiniteSpace, x: int, family: Iterable[Iterable[int]]
) -> bool:
    members = [frozenset(v) for v in family]
    if any(x not in v for v in members):
        return False
    return all(_realizes(members, x, o) for o in space.opens if x in o)


def check_decomposition(
    space: FiniteSpace, decomposition: Decomposition
) -> DecompositionVerdict:
    """Check the decomposition structure, base-ness, clause (i) and clause (ii)"""
    base = sort_family(decomposition.base)
    owned = sort_family(v for family in decomposition.owners.values() for v in family)
    if owned != base:
        return DecompositionVerdict(False, "structure", ("owners", "base"))
    for x, family in sorted(decomposition.owners.items()):
        for v in family:
            if x not in v:
                return DecompositionVerdict(False, "structure", (x, tuple(sorted(v))))

    if not is_base(space, base):
        return DecompositionVerdict(False, "base", ())

    for x in sorted(space.points):
        if not is_neighborhood_base(space, x, decomposition.owners.get(x, ())):
            return DecompositionVerdict(False, "i", (x,))

    for x in sorted(space.points):
        if is_base(space, decomposition.without(x)):
            return DecompositionVerdict(False, "ii", (x,))

    return DecompositionVerdict(True)


def _check_caps(
    space: FiniteSpace, base_size: int, max_points: int, max_base: int
) -> None:
    if len(space.points) > max_points:
        raise SearchBudgetExceeded(
            f"search is capped at {max_points} points, got {len(space.points)}"
        )
    if base_size > max_base:
        raise SearchBudgetExceeded(
            f"search is capped at {max_base} base members, got {base_size}"
        )


def _owner_domain(member: OpenSet) -> list[frozenset[int]]:
    """Nonempty owner sets for a member, smallest first"""
    ordered = sorted(member)
    return [
        frozenset(combo)
        for size in range(1, len(ordered) + 1)
        for combo in itertools.combinations(ordered, size)
    ]


class _OwnerSearch:
    """Backtracking over owner sets with forward checks for (i) and (ii)"""

    def __init__(self, space: FiniteSpace, base: Family):
        self.space = space
        self.members = base
        self.points = sorted(space.points)
        # (x, O) -> indices of members realizing it
        self.realizers: dict[tuple[int, OpenSet], list[int]] = {}
        for o in space.opens:
            for x in o:
                self.realizers[(x, o)] = [
                    index
                    for index, v in enumerate(base)
                    if x in v and v <= o
                ]
        self.owners: list[frozenset[int] | None] = [None] * len(base)
        self.nodes = 0

    def _clause_i_possible(self) -> bool:
        for (x, _), indices in self.realizers.items():
            if not any(self.owners[i] is None or x in self.owners[i] for i in indices):
                return False
        return True

    def _clause_ii_possible(self) -> bool:
        # some (y, O) must be realized only by members owned by x alone
        for x in self.points:
            if not any(
                all(
                    self.owners[i] == {x}
                    if self.owners[i] is not None
                    else x in self.members[i]
                    for i in indices
                )
                for indices in self.realizers.values()
            ):
                return False
        return True

    def run(self, index: int = 0) -> bool:
        self.nodes += 1
        if index == len(self.members):
            return True
        for owners in _owner_domain(self.members[index]):
            self.owners[index] = owners
            if self._clause_i_possible() and self._clause_ii_possible():
                if self.run(index + 1):
                    return True
        self.owners[index] = None
        return False

    def decomposition(self) -> Decomposition:
        owned: dict[int, list[OpenSet]] = {x: [] for x in self.points}
        for member, owners in zip(self.members, self.owners, strict=True):
            for x in owners or ():
                owned[x].append(member)
        return Decomposition(
            base=self.members,
            owners={x: sort_family(family) for x, family in owned.items()},
        )


def find_irreducible_decomposition(
    space: FiniteSpace,
    base: Iterable[Iterable[int]],
    max_points: int = config.MAX_SEARCH_POINTS,
    max_base: int = config.MAX_SEARCH_BASE,
) -> Decomposition | None:
    """Exhaustive owner-assignment search; None if no decomposition exists"""
    members = sort_family(v for v in base if v)
    _check_caps(space, len(members), max_points, max_base)
    if not is_base(space, members):
        raise InvalidSpaceError("the family is not a base of the space")

    search = _OwnerSearch(space, members)
    found = search.run()
    logger.debug(
        "[topology] owner search over %d members: %d nodes, found=%s",
        len(members),
        search.nodes,
        found,
    )
    if not found:
        return None
    decomposition = search.decomposition()
    if not check_decomposition(space, decomposition).holds:
        raise AssertionError("owner search returned a failing decomposition")
    return decomposition


def candidate_bases(space: FiniteSpace, max_base: int) -> Iterator[Family]:
    """Bases of the space among subfamilies of the nonempty opens, smallest first.

    Every base contains each minimal neighbourhood, so only the remaining
    opens are enumerated.
    """
    mandatory = sort_family(minimal_neighborhoods(space).values())
    optional = [o for o in space.nonempty_opens if o not in mandatory]
    for size in range(0, min(len(optional), max_base - len(mandatory)) + 1):
        for extra in itertools.combinations(optional, size):
            family = sort_family(mandatory + extra)
            if is_base(space, family):
                yield family


def find_irreducible_base(
    space: FiniteSpace,
    max_points: int = config.MAX_SEARCH_POINTS,
    max_base: int = config.MAX_SEARCH_BASE,
) -> tuple[Family, Decomposition] | None:
    """Smallest candidate base admitting an irreducible decomposition"""
    neighborhoods = minimal_neighborhoods(space)
    _check_caps(space, len(set(neighborhoods.values())), max_points, max_base)
    shared = len(set(neighborhoods.values())) < len(neighborhoods)

    for family in candidate_bases(space, max_base):
        decomposition = find_irreducible_decomposition(
            space, family, max_points, max_base
        )
        if decomposition is not None:
            return family, decomposition
        if shared:
            # A member shared as minimal neighbourhood of two points sits in
            # every base and keeps each 𝒰⁻_x a base, so larger bases fail too
            break
    return None


def minimal_neighborhood_decomposition(space: FiniteSpace) -> Decomposition:
    """𝒰_x = {minimal neighbourhood of x}"""
    neighborhoods = minimal_neighborhoods(space)
    return Decomposition(
        base=sort_family(neighborhoods.values()),
        owners={x: (v,) for x, v in neighborhoods.items()},
    )


def enumerate_topologies(n: int) -> list[FiniteSpace]:
    """Every labeled topology on the points 0..n-1 (29 for n = 3)"""
    if n > 4:
        raise SearchBudgetExceeded("topology enumeration is capped at 4 points")
    universe = frozenset(range(n))
    middle = [
        frozenset(combo)
        for size in range(1, n)
        for combo in itertools.combinations(range(n), size)
    ]
    spaces = []
    for mask in range(1 << len(middle)):
        chosen = [s for bit, s in enumerate(middle) if mask >> bit & 1]
        opens = {frozenset(), universe, *chosen}
        if is_topology(universe, opens):
            spaces.append(FiniteSpace(points=universe, opens=frozenset(opens)))
    return spaces


def brute_force_irreducible_base(
    space: FiniteSpace,
) -> tuple[Family, Decomposition] | None:
    """Oracle: every (base, owner assignment) pair, no pruning at all"""
    if len(space.points) > 4:
        raise SearchBudgetExceeded("brute force is capped at 4 points")
    opens = space.nonempty_opens
    points = sorted(space.points)
    for size in range(1, len(opens) + 1):
        for family in itertools.combinations(opens, size):
            if not is_base(space, family):
                continue
            domains = [_owner_domain(v) for v in family]
            for assignment in itertools.product(*domains):
                owned: dict[int, list[OpenSet]] = {x: [] for x in points}
                for member, owners in zip(family, assignment, strict=True):
                    for x in owners:
                        owned[x].append(member)
                decomposition = Decomposition(
                    base=tuple(family),
                    owners={x: sort_family(f) for x, f in owned.items()},
                )
                if check_decomposition(space, decomposition).holds:
                    return tuple(family), decomposition
    return None
