"""Interval algebra over the media timeline.

Media time is integer milliseconds from the start of the video. Intervals
are half-open [start, end) with strictly positive duration; an instant
(for example a single frame) is modelled as a one-unit interval. Between
any two intervals exactly one of the 13 qualitative relations holds.

Relation sets carry indefinite temporal knowledge during constraint
propagation: the full set means "no information", the empty set a
contradiction. `propagate` runs path consistency over a network of
interval variables. Path consistency is sound but not complete for
consistency of arbitrary relation-set networks; for networks whose
constraints are singletons induced by concrete intervals it is exact.

All types in this module are immutable values.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from ._allen_table import COMPOSITION_BITS, RELATION_TAGS

__all__ = [
    "AllenRelation",
    "ALL_RELATIONS",
    "InconsistentNetwork",
    "Interval",
    "IntervalNetwork",
    "RelationSet",
    "Timestamp",
    "compose",
    "compose_sets",
    "invert",
    "network_from_intervals",
    "propagate",
    "relation",
]


class AllenRelation(Enum):
    """The 13 mutually exclusive, jointly exhaustive interval relations."""

    BEFORE = "before"
    AFTER = "after"
    MEETS = "meets"
    MET_BY = "met_by"
    OVERLAPS = "overlaps"
    OVERLAPPED_BY = "overlapped_by"
    DURING = "during"
    CONTAINS = "contains"
    STARTS = "starts"
    STARTED_BY = "started_by"
    FINISHES = "finishes"
    FINISHED_BY = "finished_by"
    EQUALS = "equals"

    @property
    def tag(self) -> str:
        return self.value

    def invert(self) -> "AllenRelation":
        return _INVERSES[self]

    @classmethod
    def from_tag(cls, tag: str) -> "AllenRelation":
        try:
            return cls(tag)
        except ValueError:
            raise ValueError(f"unknown relation keyword: {tag!r}") from None

    def __repr__(self) -> str:
        return f"AllenRelation.{self.name}"


ALL_RELATIONS: tuple[AllenRelation, ...] = tuple(AllenRelation)

_INDEX = {rel: i for i, rel in enumerate(ALL_RELATIONS)}

_INVERSES = {
    AllenRelation.BEFORE: AllenRelation.AFTER,
    AllenRelation.AFTER: AllenRelation.BEFORE,
    AllenRelation.MEETS: AllenRelation.MET_BY,
    AllenRelation.MET_BY: AllenRelation.MEETS,
    AllenRelation.OVERLAPS: AllenRelation.OVERLAPPED_BY,
    AllenRelation.OVERLAPPED_BY: AllenRelation.OVERLAPS,
    AllenRelation.DURING: AllenRelation.CONTAINS,
    AllenRelation.CONTAINS: AllenRelation.DURING,
    AllenRelation.STARTS: AllenRelation.STARTED_BY,
    AllenRelation.STARTED_BY: AllenRelation.STARTS,
    AllenRelation.FINISHES: AllenRelation.FINISHED_BY,
    AllenRelation.FINISHED_BY: AllenRelation.FINISHES,
    AllenRelation.EQUALS: AllenRelation.EQUALS,
}

# The enum order must match the frozen table's row/column order.
assert tuple(r.tag for r in ALL_RELATIONS) == RELATION_TAGS


@dataclass(frozen=True, order=True)
class Timestamp:
    """A point on the media timeline, in milliseconds from the start."""

    millis: int

    def __post_init__(self) -> None:
        if not isinstance(self.millis, int):
            raise TypeError(f"timestamp must be an integer, got {type(self.millis).__name__}")
        if self.millis < 0:
            raise ValueError(f"timestamp must be non-negative, got {self.millis}")

    def __str__(self) -> str:
        return f"{self.millis}ms"


@dataclass(frozen=True, order=True)
class Interval:
    """Half-open media segment [start, end) with positive duration."""

    start: Timestamp
    end: Timestamp

    def __post_init__(self) -> None:
        if self.start >= self.end:
            raise ValueError(f"interval must satisfy start < end, got [{self.start}, {self.end})")

    @classmethod
    def of(cls, start_ms: int, end_ms: int) -> "Interval":
        return cls(Timestamp(start_ms), Timestamp(end_ms))

    @property
    def start_ms(self) -> int:
        return self.start.millis

    @property
    def end_ms(self) -> int:
        return self.end.millis

    @property
    def duration_ms(self) -> int:
        return self.end.millis - self.start.millis

    def __str__(self) -> str:
        return f"[{self.start_ms}, {self.end_ms})"


def relation(a: Interval, b: Interval) -> AllenRelation:
    """Return the unique qualitative relation holding from `a` to `b`."""
    a0, a1 = a.start_ms, a.end_ms
    b0, b1 = b.start_ms, b.end_ms
    if a0 == b0 and a1 == b1:
        return AllenRelation.EQUALS
    if a1 < b0:
        return AllenRelation.BEFORE
    if b1 < a0:
        return AllenRelation.AFTER
    if a1 == b0:
        return AllenRelation.MEETS
    if b1 == a0:
        return AllenRelation.MET_BY
    if a0 == b0:
        return AllenRelation.STARTS if a1 < b1 else AllenRelation.STARTED_BY
    if a1 == b1:
        return AllenRelation.FINISHES if a0 > b0 else AllenRelation.FINISHED_BY
    if b0 < a0 and a1 < b1:
        return AllenRelation.DURING
    if a0 < b0 and b1 < a1:
        return AllenRelation.CONTAINS
    return AllenRelation.OVERLAPS if a0 < b0 else AllenRelation.OVERLAPPED_BY


def invert(r: AllenRelation) -> AllenRelation:
    """The relation holding from b to a when `r` holds from a to b."""
    return _INVERSES[r]


@dataclass(frozen=True)
class RelationSet:
    """A subset of the 13 relations; empty means contradiction, full means unknown."""

    members: frozenset[AllenRelation]

    @classmethod
    def of(cls, *relations: AllenRelation) -> "RelationSet":
        return cls(frozenset(relations))

    @classmethod
    def full(cls) -> "RelationSet":
        return _FULL_SET

    @classmethod
    def empty(cls) -> "RelationSet":
        return _EMPTY_SET

    @property
    def is_empty(self) -> bool:
        return not self.members

    @property
    def is_full(self) -> bool:
        return len(self.members) == len(ALL_RELATIONS)

    def invert(self) -> "RelationSet":
        return RelationSet(frozenset(r.invert() for r in self.members))

    def __contains__(self, r: AllenRelation) -> bool:
        return r in self.members

    def __iter__(self) -> Iterator[AllenRelation]:
        # Canonical order keeps printing and serialization deterministic.
        return iter(sorted(self.members, key=_INDEX.__getitem__))

    def __len__(self) -> int:
        return len(self.members)

    def __and__(self, other: "RelationSet") -> "RelationSet":
        return RelationSet(self.members & other.members)

    def __or__(self, other: "RelationSet") -> "RelationSet":
        return RelationSet(self.members | other.members)

    def __str__(self) -> str:
        return "{" + ", ".join(r.tag for r in self) + "}"


_FULL_SET = RelationSet(frozenset(ALL_RELATIONS))
_EMPTY_SET = RelationSet(frozenset())

_COMPOSE: dict[tuple[AllenRelation, AllenRelation], RelationSet] = {}
for _r1 in ALL_RELATIONS:
    for _r2 in ALL_RELATIONS:
        _bits = COMPOSITION_BITS[_INDEX[_r1]][_INDEX[_r2]]
        _COMPOSE[_r1, _r2] = RelationSet(
            frozenset(r for r in ALL_RELATIONS if _bits >> _INDEX[r] & 1)
        )


def compose(r1: AllenRelation, r2: AllenRelation) -> RelationSet:
    """All relations possible from a to c when r1 holds a-to-b and r2 b-to-c."""
    return _COMPOSE[r1, r2]


def compose_sets(s1: RelationSet, s2: RelationSet) -> RelationSet:
    """Pointwise union of compositions; empty if either side is empty."""
    if s1.is_empty or s2.is_empty:
        return _EMPTY_SET
    if s1.is_full and s2.is_full:
        return _FULL_SET
    members: frozenset[AllenRelation] = frozenset()
    for r1 in s1.members:
        for r2 in s2.members:
            members |= _COMPOSE[r1, r2].members
            if len(members) == len(ALL_RELATIONS):
                return _FULL_SET
    return RelationSet(members)


class InconsistentNetwork(Exception):
    """A constraint set became empty: the network admits no interval assignment."""

    def __init__(self, i: str, j: str):
        super().__init__(f"inconsistent constraint network: no relation possible between {i!r} and {j!r}")
        self.pair = (i, j)


@dataclass(frozen=True)
class IntervalNetwork:
    """Qualitative constraint network over named interval variables.

    The constraint map is complete over ordered pairs and kept coherent:
    constraint(j, i) is always the inverse of constraint(i, j) and every
    diagonal entry is {equals}. Treat instances as immutable.
    """

    variables: tuple[str, ...]
    constraints: Mapping[tuple[str, str], RelationSet]

    @classmethod
    def build(
        cls,
        variables: Iterable[str],
        constraints: Mapping[tuple[str, str], RelationSet] | None = None,
    ) -> "IntervalNetwork":
        names = tuple(variables)
        if len(set(names)) != len(names):
            raise ValueError("interval variable names must be unique")
        full: dict[tuple[str, str], RelationSet] = {}
        equals_only = RelationSet.of(AllenRelation.EQUALS)
        for i in names:
            for j in names:
                full[i, j] = equals_only if i == j else RelationSet.full()
        for (i, j), rs in (constraints or {}).items():
            if (i, i) not in full or (j, j) not in full:
                raise ValueError(f"constraint references unknown variable: ({i!r}, {j!r})")
            if i == j:
                if rs != equals_only:
                    raise ValueError(f"diagonal constraint for {i!r} must be {{equals}}")
                continue
            full[i, j] = full[i, j] & rs
            full[j, i] = full[j, i] & rs.invert()
        return cls(names, full)

    def constraint(self, i: str, j: str) -> RelationSet:
        return self.constraints[i, j]


def network_from_intervals(assignment: Mapping[str, Interval]) -> IntervalNetwork:
    """Network with the singleton relation of each concrete interval pair."""
    names = tuple(assignment)
    constraints = {
        (i, j): RelationSet.of(relation(assignment[i], assignment[j]))
        for i in names
        for j in names
        if i != j
    }
    return IntervalNetwork.build(names, constraints)


def propagate(net: IntervalNetwork) -> IntervalNetwork:
    """Tighten every constraint to a path-consistent fixpoint.

    Each returned set is a subset of the corresponding input set.
    Raises InconsistentNetwork as soon as any constraint becomes empty,
    including empty constraints already present in the input.
    """
    names = net.variables
    work: dict[tuple[str, str], RelationSet] = dict(net.constraints)

    for (i, j), rs in work.items():
        if rs.is_empty:
            raise InconsistentNetwork(i, j)

    queue: deque[tuple[str, str]] = deque(
        (i, j) for i in names for j in names if i != j
    )
    queued = set(queue)

    def tighten(a: str, b: str, bound: RelationSet) -> None:
        current = work[a, b]
        updated = current & bound
        if updated == current:
            return
        if updated.is_empty:
            raise InconsistentNetwork(a, b)
        work[a, b] = updated
        work[b, a] = updated.invert()
        for pair in ((a, b), (b, a)):
            if pair not in queued:
                queued.add(pair)
                queue.append(pair)

    while queue:
        i, j = queue.popleft()
        queued.discard((i, j))
        c_ij = work[i, j]
        for k in names:
            if k == i or k == j:
                continue
            tighten(i, k, compose_sets(c_ij, work[j, k]))
            tighten(k, j, compose_sets(work[k, i], c_ij))

    return IntervalNetwork(names, work)


def frame_to_ms(frame: int, fps: Fraction) -> int:
    """Millisecond timestamp of the start of `frame`, floored exactly."""
    if frame < 0:
        raise ValueError("frame index must be non-negative")
    return frame * 1000 * fps.denominator // fps.numerator
