"""Finite conditions ⟨A,n,U⟩, membership in P and the extension order.

Ordinals are natural numbers. Every ⊂ of the defining clauses is read as
non-strict inclusion unless ``strict=True`` is passed, in which case it is read
as proper inclusion.
"""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from errors import DuplicatePointError, InvalidConditionError, MalformedConditionError

Pair = tuple[int, int]
Cells = dict[Pair, frozenset[int]]


@dataclass(frozen=True)
class Condition:
    """A finite approximation ⟨A,n,U⟩ of the base"""

    A: tuple[int, ...]  # support, kept sorted
    n: int  # depth
    U: Cells = field(default_factory=dict)  # (alpha, i) -> subset of A

    @classmethod
    def build(
        cls, A: Iterable[int], n: int, U: Mapping[Pair, Iterable[int]]
    ) -> "Condition":
        """Normalize support and cell values; no validation is done here"""
        return cls(
            A=tuple(sorted(A)),
            n=n,
            U={(a, i): frozenset(v) for (a, i), v in sorted(U.items())},
        )

    @classmethod
    def empty(cls) -> "Condition":
        """The maximum of P: ⟨∅,0,∅⟩"""
        return cls(A=(), n=0, U={})

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.A)

    def pairs(self) -> list[Pair]:
        """A×n in lexicographic order"""
        return [(a, i) for a in self.A for i in range(self.n)]

    def cell(self, alpha: int, i: int) -> frozenset[int]:
        return self.U[(alpha, i)]


@dataclass
class Violation:
    """A failed clause together with its witness tuple"""

    clause: str
    witness: tuple[int, ...]

    def __str__(self) -> str:
        return f"({self.clause}) witness {self.witness}"


@dataclass
class Verdict:
    """Outcome of validate_condition; violations are sorted, least first"""

    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Violation | None:
        return self.violations[0] if self.violations else None


@dataclass
class ExtensionVerdict:
    """Outcome of check_extension: the first failing clause, if any"""

    holds: bool
    clause: str | None = None
    witness: tuple | None = None


def is_included(a: frozenset[int], b: frozenset[int], strict: bool = False) -> bool:
    """The ⊂ of the defining clauses; proper inclusion only in strict mode"""
    return a < b if strict else a <= b


def check_structure(c: Condition) -> None:
    """Raise MalformedConditionError unless U is total on A×n with values in A"""
    if len(set(c.A)) != len(c.A):
        raise MalformedConditionError("support has repeated points", "A")
    if any(a < 0 for a in c.A):
        raise MalformedConditionError("ordinals must be natural numbers", "A")
    if c.n < 0:
        raise MalformedConditionError("depth must be a natural number", "n")

    expected = set(c.pairs())
    extra = sorted(set(c.U) - expected)
    if extra:
        raise MalformedConditionError(
            f"U is defined outside A×n at {extra[0]}", "U", extra[0]
        )
    missing = sorted(expected - set(c.U))
    if missing:
        raise MalformedConditionError(
            f"U is not defined at {missing[0]}", "U", missing[0]
        )

    support = c.support
    for key in c.pairs():
        stray = c.U[key] - support
        if stray:
            raise MalformedConditionError(
                f"U{key} contains points outside A: {sorted(stray)}",
                f"U[{key[0]},{key[1]}]",
                key,
            )


def validate_condition(c: Condition, strict: bool = False) -> Verdict:
    """Check (P2) and (P3); structural (P1) problems raise instead"""
    check_structure(c)
    violations: list[Violation] = []

    # (P2)
    for alpha, i in c.pairs():
        current = c.U[(alpha, i)]
        if alpha not in current:
            violations.append(Violation("P2", (alpha, i)))
        elif i > 0 and not is_included(current, c.U[(alpha, i - 1)], strict):
            violations.append(Violation("P2", (alpha, i)))

    # (P3)
    if c.n > 0:
        for alpha in c.A:
            for beta in c.A:
                if beta <= alpha:
                    continue
                base = c.U[(beta, 0)]
                for i in range(c.n):
                    current = c.U[(alpha, i)]
                    if beta in current and is_included(current, base, strict):
                        violations.append(Violation("P3", (alpha, beta, i)))

    violations.sort(key=lambda v: (v.clause, v.witness))
    return Verdict(violations)


def require_valid(c: Condition, name: str = "condition", strict: bool = False) -> None:
    """Raise InvalidConditionError if c is not in P"""
    verdict = validate_condition(c, strict=strict)
    if not verdict.ok:
        raise InvalidConditionError(f"{name} is not in P: {verdict.first}", verdict)


def check_extension(
    q: Condition, p: Condition, strict: bool = False
) -> ExtensionVerdict:
    """Decide q ≤ p by clauses (a), (b), (c), (d1), (d2) in that order"""
    require_valid(q, "q", strict)
    require_valid(p, "p", strict)
    return extension_clauses(q, p, strict)


def extension_clauses(
    q: Condition, p: Condition, strict: bool = False
) -> ExtensionVerdict:
    """The order clauses alone, without requiring q and p to be in P"""
    missing = sorted(p.support - q.support)
    if missing:
        return ExtensionVerdict(False, "a", (missing[0],))
    if p.n > q.n:
        return ExtensionVerdict(False, "b", (p.n, q.n))

    support = p.support
    pairs = p.pairs()
    for key in pairs:
        if p.U[key] != q.U[key] & support:
            return ExtensionVerdict(False, "c", key)

    for x in pairs:
        for y in pairs:
            if not (p.U[x] & p.U[y]) and q.U[x] & q.U[y]:
                return ExtensionVerdict(False, "d1", (x, y))

    for x in pairs:
        for y in pairs:
            if is_included(p.U[x], p.U[y], strict) and not is_included(
                q.U[x], q.U[y], strict
            ):
                return ExtensionVerdict(False, "d2", (x, y))

    return ExtensionVerdict(True)


def cells_above(p: Condition, key: Pair) -> list[Pair]:
    """Every cell of p that includes U_p(key), key itself included"""
    target = p.U[key]
    return [other for other in p.pairs() if target <= p.U[other]]


def add_point_joining(
    p: Condition, alpha: int, cells: Iterable[Pair] = ()
) -> Condition:
    """Add alpha with singleton rows and put it into the given cells of p.

    The joined cells must be closed upward under inclusion and pairwise
    intersecting, otherwise the result is not an extension of p and
    InvalidConditionError is raised.
    """
    if alpha in p.support:
        raise DuplicatePointError(f"point {alpha} is already in A")
    joined = set(cells)

    U: Cells = {}
    for key, value in p.U.items():
        U[key] = value | {alpha} if key in joined else value
    for i in range(p.n):
        U[(alpha, i)] = frozenset({alpha})
    q = Condition.build(p.A + (alpha,), p.n, U)

    if joined:
        verdict = validate_condition(q)
        if not verdict.ok:
            raise InvalidConditionError(f"joining {alpha} breaks P", verdict)
        extension = check_extension(q, p)
        if not extension.holds:
            raise InvalidConditionError(
                f"joining {alpha} is not an extension: clause {extension.clause}"
            )
    return q


def add_point(p: Condition, alpha: int) -> Condition:
    """Extend p by a fresh point whose rows are all {alpha}"""
    return add_point_joining(p, alpha)


def deepen(p: Condition) -> Condition:
    """Add level n with U(alpha, n) = {alpha}"""
    U = dict(p.U)
    for alpha in p.A:
        U[(alpha, p.n)] = frozenset({alpha})
    return Condition.build(p.A, p.n + 1, U)


def relabel(p: Condition, mapping: Mapping[int, int]) -> Condition:
    """Push p forward along an injective relabeling of its support"""
    U = {(mapping[a], i): {mapping[x] for x in value} for (a, i), value in p.U.items()}
    return Condition.build((mapping[a] for a in p.A), p.n, U)


def restrict(p: Condition, points: Iterable[int]) -> Condition:
    """⟨A∩points, n, U∩points⟩; the result may fail (P3)"""
    kept = p.support & set(points)
    U = {(a, i): value & kept for (a, i), value in p.U.items() if a in kept}
    return Condition.build(kept, p.n, U)
