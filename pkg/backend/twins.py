"""Twin conditions, their twin/smashing/exchange functions, and twin search.

Twin search buckets conditions by a cheap canonical shape key first and only
then runs the exact root and support-order checks inside each bucket.
"""

import logging
from collections import defaultdict
from collections.abc import Iterable
from dataclasses import dataclass

from core_conditions import Condition
from errors import MalformedConditionError

logger = logging.getLogger(__name__)

ShapeKey = tuple[int, int, tuple[tuple[int, ...], ...]]


@dataclass(frozen=True)
class TwinCertificate:
    """The twin function σ between p0 and p1 plus its derived maps"""

    sigma: dict[int, int]  # order isomorphism A0 -> A1
    root: frozenset[int]  # D = A0 ∩ A1
    smash: dict[int, int]  # σ̲ = σ⁻¹ ∪ id_A0, maps A0 ∪ A1 onto A0
    exchange: dict[int, int]  # σ* = σ ∪ σ⁻¹, an involution fixing D

    @classmethod
    def from_sigma(cls, sigma: dict[int, int]) -> "TwinCertificate":
        inverse = {b: a for a, b in sigma.items()}
        root = frozenset(sigma) & frozenset(inverse)
        smash = dict(inverse)
        smash.update({a: a for a in sigma})
        exchange = dict(sigma)
        exchange.update(inverse)
        return cls(sigma=dict(sigma), root=root, smash=smash, exchange=exchange)

    def inverted(self) -> "TwinCertificate":
        """The certificate of the swapped pair (p1, p0)"""
        return TwinCertificate.from_sigma({b: a for a, b in self.sigma.items()})


@dataclass(frozen=True)
class MarkedCondition:
    """A condition with a designated point of its support"""

    cond: Condition
    mark: int

    def __post_init__(self) -> None:
        if self.mark not in self.cond.support:
            raise MalformedConditionError(
                f"mark {self.mark} is not in A", "mark", (self.mark,)
            )


def order_iso(A0: Iterable[int], A1: Iterable[int]) -> dict[int, int] | None:
    """The unique order-preserving bijection A0 -> A1, or None on size mismatch"""
    left, right = sorted(set(A0)), sorted(set(A1))
    if len(left) != len(right):
        return None
    return dict(zip(left, right, strict=True))


def is_twin_pair(p0: Condition, p1: Condition) -> TwinCertificate | None:
    """Return the twin certificate if p0 and p1 are twins (I1 and I2)"""
    if p0.n != p1.n:
        return None
    sigma = order_iso(p0.A, p1.A)
    if sigma is None:
        return None

    # (I1)
    for delta in p0.support & p1.support:
        if sigma[delta] != delta:
            return None

    # (I2)
    for alpha, i in p0.pairs():
        image = frozenset(sigma[x] for x in p0.U[(alpha, i)])
        if p1.U[(sigma[alpha], i)] != image:
            return None

    return TwinCertificate.from_sigma(sigma)


def canonicalize(p: Condition) -> ShapeKey:
    """Shape key: (n, |A|, U pulled back along rank)"""
    rank = {a: r for r, a in enumerate(p.A)}
    table = tuple(
        tuple(sorted(rank[x] for x in p.U[(alpha, i)])) for alpha, i in p.pairs()
    )
    return (p.n, len(p.A), table)


def supports_ordered(A0: Iterable[int], A1: Iterable[int]) -> bool:
    """A0∩A1 < A0∖A1 < A1∖A0, elementwise and vacuous on empty sets"""
    left, right = set(A0), set(A1)
    root, only0, only1 = left & right, left - right, right - left
    return _below(root, only0) and _below(only0, only1)


def _below(lower: set[int], upper: set[int]) -> bool:
    return not lower or not upper or max(lower) < min(upper)


def find_amalgamable_pair(
    family: list[MarkedCondition],
) -> tuple[tuple[int, int], TwinCertificate] | None:
    """Least (ξ, η), ξ < η, of twins with σ(mark_ξ) = mark_η, mark_ξ < mark_η
    and ordered supports; None if no pair qualifies."""
    buckets: dict[ShapeKey, list[int]] = defaultdict(list)
    shape_of: list[ShapeKey] = []
    for index, member in enumerate(family):
        key = canonicalize(member.cond)
        shape_of.append(key)
        buckets[key].append(index)

    for xi, first in enumerate(family):
        for eta in buckets[shape_of[xi]]:
            if eta <= xi:
                continue
            second = family[eta]
            if first.mark >= second.mark:
                continue
            if not supports_ordered(first.cond.A, second.cond.A):
                continue
            cert = is_twin_pair(first.cond, second.cond)
            if cert is None or cert.sigma[first.mark] != second.mark:
                continue
            logger.debug("[twins] amalgamable pair (%d, %d)", xi, eta)
            return (xi, eta), cert

    return None
