"""Temporal approval elections and the quantities every verifier is built on.

Voters, candidates and rounds are 0-based throughout the library. The JSON
formats in :mod:`temporal_jr.formats` are 1-based and convert at the boundary.
"""

from __future__ import annotations

import enum
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InputError


@dataclass(frozen=True)
class Election:
    """A temporal election with ``n`` voters, ``m`` candidates and ``ell`` rounds.

    ``approvals[i][t]`` is the set of candidates voter ``i`` approves in round
    ``t``. Empty approval sets are legal.
    """

    n: int
    m: int
    ell: int
    approvals: tuple[tuple[frozenset[int], ...], ...]

    def __post_init__(self):
        for name in ("n", "m", "ell"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise InputError(f"{name} must be a positive integer, got {value!r}")
        try:
            rows = tuple(
                tuple(frozenset(operator.index(p) for p in s) for s in row) for row in self.approvals
            )
        except TypeError as exc:
            raise InputError(f"approval sets must hold integer candidates: {exc}") from None
        if len(rows) != self.n:
            raise InputError(f"approvals has {len(rows)} voters, expected n={self.n}")
        for i, row in enumerate(rows):
            if len(row) != self.ell:
                raise InputError(
                    f"voter {i}: approvals has {len(row)} rounds, expected ell={self.ell}"
                )
            for t, s in enumerate(row):
                for p in s:
                    if not 0 <= p < self.m:
                        raise InputError(
                            f"voter {i}, round {t}: candidate {p!r} outside 0..{self.m - 1}"
                        )
        object.__setattr__(self, "approvals", rows)

    @classmethod
    def from_lists(cls, approvals: Sequence[Sequence[Iterable[int]]], m: int | None = None) -> "Election":
        """Build an election from nested lists, inferring ``m`` when omitted."""
        if not approvals or not approvals[0]:
            raise InputError("need at least one voter and one round")
        if m is None:
            m = 1 + max((p for row in approvals for s in row for p in s), default=0)
        return cls(len(approvals), m, len(approvals[0]), tuple(tuple(frozenset(s) for s in row) for row in approvals))

    @cached_property
    def masks(self) -> tuple[tuple[int, ...], ...]:
        """Candidate bitmask per voter and round (bit ``p`` set iff ``p`` approved)."""
        return tuple(tuple(sum(1 << p for p in s) for s in row) for row in self.approvals)

    @cached_property
    def supporters(self) -> tuple[tuple[int, ...], ...]:
        """Voter bitmask per round and candidate: ``supporters[t][p]``."""
        table = [[0] * self.m for _ in range(self.ell)]
        for i, row in enumerate(self.approvals):
            for t, s in enumerate(row):
                for p in s:
                    table[t][p] |= 1 << i
        return tuple(tuple(r) for r in table)

    @cached_property
    def round_support(self) -> tuple[frozenset[int], ...]:
        """Candidates approved by at least one voter, per round."""
        return tuple(
            frozenset(p for p in range(self.m) if self.supporters[t][p]) for t in range(self.ell)
        )

    @cached_property
    def enumeration_size(self) -> int:
        """``m**ell * 2**ell``: candidate sequences times round subsets."""
        return self.m ** self.ell * 2 ** self.ell

    @cached_property
    def monotonic(self) -> bool:
        return all(row[t] & ~row[t + 1] == 0 for row in self.masks for t in range(self.ell - 1))

    @cached_property
    def nonempty(self) -> bool:
        return all(m for row in self.masks for m in row)

    @cached_property
    def group_tables(self):
        """Per-group size, agreement and demand for all ``2**n`` groups."""
        from .kernels import build_group_tables

        return build_group_tables(self)

    def check_voter(self, i: int) -> None:
        if not isinstance(i, int) or not 0 <= i < self.n:
            raise InputError(f"voter index {i!r} outside 0..{self.n - 1}")


@dataclass(frozen=True)
class Outcome:
    """One chosen candidate per round; repeats are allowed."""

    choices: tuple[int, ...]

    def __post_init__(self):
        try:
            choices = tuple(operator.index(p) for p in self.choices)
        except TypeError as exc:
            raise InputError(f"outcome choices must be integers: {exc}") from None
        object.__setattr__(self, "choices", choices)

    def __len__(self):
        return len(self.choices)

    def check(self, e: Election) -> None:
        if len(self.choices) != e.ell:
            raise InputError(f"outcome has {len(self.choices)} rounds, expected ell={e.ell}")
        for t, p in enumerate(self.choices):
            if not 0 <= p < e.m:
                raise InputError(f"outcome round {t}: candidate {p!r} outside 0..{e.m - 1}")


@dataclass(frozen=True, order=True)
class VoterGroup:
    """A nonempty set of voters kept as a sorted, duplicate-free tuple."""

    members: tuple[int, ...]

    def __post_init__(self):
        members = tuple(sorted(set(self.members)))
        if not members:
            raise InputError("voter group must be nonempty")
        if members[0] < 0:
            raise InputError(f"negative voter index {members[0]}")
        object.__setattr__(self, "members", members)

    @classmethod
    def from_mask(cls, mask: int) -> "VoterGroup":
        return cls(tuple(i for i in range(mask.bit_length()) if mask >> i & 1))

    @property
    def mask(self) -> int:
        return sum(1 << i for i in self.members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def check(self, e: Election) -> None:
        if self.members[-1] >= e.n:
            raise InputError(f"voter index {self.members[-1]} outside 0..{e.n - 1}")


class Axiom(enum.Enum):
    JR = "JR"
    PJR = "PJR"
    EJR = "EJR"


class Strength(enum.Enum):
    WEAK = "weak"
    STRONG = "strong"


@dataclass(frozen=True)
class AxiomSpec:
    axiom: Axiom
    strength: Strength = Strength.STRONG

    @property
    def weak(self) -> bool:
        return self.strength is Strength.WEAK

    @classmethod
    def parse(cls, text: str) -> "AxiomSpec":
        """Parse ``"EJR"``, ``"w-EJR"``, ``"weak-pjr"`` or ``"s-jr"``."""
        raw = text.strip().lower()
        strength = Strength.STRONG
        for prefix, s in (("weak-", Strength.WEAK), ("w-", Strength.WEAK),
                          ("strong-", Strength.STRONG), ("s-", Strength.STRONG)):
            if raw.startswith(prefix):
                raw, strength = raw[len(prefix):], s
                break
        try:
            return cls(Axiom(raw.upper()), strength)
        except ValueError:
            raise InputError(f"unknown axiom {text!r}") from None

    def __str__(self):
        return ("w-" if self.weak else "") + self.axiom.value


ALL_SPECS = tuple(AxiomSpec(a, s) for s in (Strength.STRONG, Strength.WEAK) for a in Axiom)


@dataclass(frozen=True)
class Witness:
    """A voter group certifying that an outcome violates an axiom.

    ``observed`` is the best member satisfaction for JR/EJR and the group's
    coverage for PJR.
    """

    group: VoterGroup
    beta: int
    alpha: int
    observed: int


def satisfaction(e: Election, o: Outcome, i: int) -> int:
    e.check_voter(i)
    o.check(e)
    row = e.approvals[i]
    return sum(1 for t, p in enumerate(o.choices) if p in row[t])


def satisfactions(e: Election, o: Outcome) -> tuple[int, ...]:
    """Satisfaction of every voter, in voter order."""
    o.check(e)
    return tuple(
        sum(1 for t, p in enumerate(o.choices) if row[t] >> p & 1) for row in e.masks
    )


def coverage(e: Election, o: Outcome, g: VoterGroup) -> int:
    """Number of rounds whose chosen candidate some member of ``g`` approves."""
    g.check(e)
    o.check(e)
    return sum(
        1 for t, p in enumerate(o.choices) if any(e.masks[i][t] >> p & 1 for i in g.members)
    )


def agreement(e: Election, g: VoterGroup) -> int:
    """Rounds in which all members of ``g`` approve a common candidate."""
    g.check(e)
    count = 0
    for t in range(e.ell):
        common = -1
        for i in g.members:
            common &= e.masks[i][t]
        count += common != 0
    return count


def demand(e: Election, g: VoterGroup) -> int:
    """``floor(agreement * |g| / n)`` in exact integer arithmetic."""
    return agreement(e, g) * len(g) // e.n


def alt_demand(e: Election, g: VoterGroup) -> Fraction:
    """The decoupled demand ``min(agreement, ell * |g| / n)`` as an exact rational."""
    return min(Fraction(agreement(e, g)), Fraction(e.ell * len(g), e.n))


def is_monotonic(e: Election) -> bool:
    """True iff approvals only grow from one round to the next."""
    return e.monotonic


def all_nonempty(e: Election) -> bool:
    return e.nonempty


@dataclass(frozen=True)
class CandidateMap:
    """Relabeling produced by :func:`dedup_candidates`.

    ``lift[t][q]`` is the original candidate standing for reduced candidate
    ``q`` in round ``t`` (the smallest index of its class); ``forward[t][p]``
    is the reduced label of original candidate ``p``. Reduced labels at or
    beyond ``len(lift[t])`` do not exist in round ``t``.
    """

    lift: tuple[tuple[int, ...], ...]
    forward: tuple[tuple[int, ...], ...]

    def lift_outcome(self, o: Outcome) -> Outcome:
        choices = []
        for t, q in enumerate(o.choices):
            if not 0 <= q < len(self.lift[t]):
                raise InputError(f"round {t}: reduced candidate {q} does not exist in this round")
            choices.append(self.lift[t][q])
        return Outcome(tuple(choices))

    def lower_outcome(self, o: Outcome) -> Outcome:
        return Outcome(tuple(self.forward[t][p] for t, p in enumerate(o.choices)))


def dedup_candidates(e: Election) -> tuple[Election, CandidateMap]:
    """Merge, round by round, candidates that have exactly the same approvers.

    Classes are numbered by their smallest original candidate, so an election
    whose candidates are already separated maps to itself. All candidates
    nobody approves in a round form one class.
    """
    lift, forward = [], []
    for t in range(e.ell):
        reps: dict[int, int] = {}
        fwd = []
        order: list[int] = []
        for p in range(e.m):
            key = e.supporters[t][p]
            if key not in reps:
                reps[key] = len(order)
                order.append(p)
            fwd.append(reps[key])
        lift.append(tuple(order))
        forward.append(tuple(fwd))
    m_new = max(len(x) for x in lift)
    rows = tuple(
        tuple(frozenset(forward[t][p] for p in e.approvals[i][t]) for t in range(e.ell))
        for i in range(e.n)
    )
    return Election(e.n, m_new, e.ell, rows), CandidateMap(tuple(lift), tuple(forward))
