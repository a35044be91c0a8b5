"""Rules that produce EJR outcomes, and a harness for semi-online rules."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .election import (
    Axiom,
    AxiomSpec,
    Election,
    Outcome,
    VoterGroup,
    agreement,
    is_monotonic,
)
from .errors import CapacityError, InputError, PreconditionError
from .verify import DEFAULT_BUDGETS, Budgets, outcome_profile, verify_bruteforce


@dataclass(frozen=True)
class CohesiveGroup:
    group: VoterGroup
    beta: int
    alpha: int
    rounds: tuple[int, ...]


@dataclass(frozen=True)
class CohesiveFamily:
    """Disjoint groups reserved by the greedy stage, sorted by agreement."""

    selected: tuple[CohesiveGroup, ...]

    def to_json(self) -> dict:
        return {
            "groups": [
                {
                    "group": [i + 1 for i in g.group.members],
                    "beta": g.beta,
                    "alpha": g.alpha,
                    "rounds": [t + 1 for t in g.rounds],
                }
                for g in self.selected
            ]
        }


def _greedy_stage(masks: np.ndarray, beta: np.ndarray, alpha: np.ndarray) -> list[int]:
    """Pick max-demand groups, dropping everything that meets a picked group.

    Ties go to larger agreement, then to the smaller bitmask.
    """
    alive = beta > 0
    picked = []
    while alive.any():
        idx = np.flatnonzero(alive)
        # lexsort: last key is primary
        best = idx[np.lexsort((masks[idx], -beta[idx], -alpha[idx]))[0]]
        g = int(masks[best])
        picked.append(int(best))
        alive &= (masks & g) == 0
    return picked


def _assign(e: Election, chosen: list[tuple[int, int, int]]) -> tuple[Outcome, CohesiveFamily]:
    """Second stage: reserve ``alpha`` agreement rounds per group, lowest β first."""
    choices = [0] * e.ell
    free = [True] * e.ell
    out = []
    # stable sort keeps selection order among equal agreement
    for gmask, beta, alpha in sorted(chosen, key=lambda x: x[1]):
        members = [i for i in range(e.n) if gmask >> i & 1]
        rounds = []
        for t in range(e.ell):
            if len(rounds) == alpha:
                break
            if not free[t]:
                continue
            common = -1
            for i in members:
                common &= e.masks[i][t]
            if common:
                rounds.append(t)
                free[t] = False
                choices[t] = (common & -common).bit_length() - 1
        if len(rounds) < alpha:
            raise AssertionError(
                f"group {members} has only {len(rounds)} free agreement rounds for demand {alpha}"
            )
        out.append(CohesiveGroup(VoterGroup(tuple(members)), beta, alpha, tuple(rounds)))
    return Outcome(tuple(choices)), CohesiveFamily(tuple(out))


def gcr(e: Election, budgets: Budgets = DEFAULT_BUDGETS) -> tuple[Outcome, CohesiveFamily]:
    """Two-stage Greedy Cohesive Rule over all ``2**n`` voter groups.

    Rounds no reserved group claims keep candidate 0.
    """
    if e.n > budgets.max_voters:
        raise CapacityError(f"gcr enumerates 2^n groups; n={e.n} exceeds budget-n={budgets.max_voters}")
    tables = e.group_tables
    masks = np.arange(1 << e.n, dtype=np.int64)
    picked = _greedy_stage(masks, tables.beta, tables.alpha)
    chosen = [(g, int(tables.beta[g]), int(tables.alpha[g])) for g in picked]
    return _assign(e, chosen)


def gcr_monotonic(e: Election) -> tuple[Outcome, CohesiveFamily]:
    """Greedy Cohesive Rule in polynomial time for monotonic elections.

    With approvals that only grow, a group first agreeing in round ``t`` on
    ``p`` lies inside ``N_{p,t}`` (voters approving ``p`` in round ``t``), and
    the still-unreserved part of ``N_{p,t}`` has at least its agreement and
    size. So the max-demand group among unreserved voters is always one of
    the ``m * ell`` sets ``N_{p,t} & free``, and the greedy stage only needs
    those.
    """
    if not is_monotonic(e):
        raise PreconditionError("gcr_monotonic requires a monotonic election")
    free = (1 << e.n) - 1
    chosen = []
    while True:
        best = None
        for t in range(e.ell):
            for p in range(e.m):
                g = e.supporters[t][p] & free
                if not g:
                    continue
                b = agreement(e, VoterGroup.from_mask(g))
                key = (-(b * bin(g).count("1") // e.n), -b, g)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        alpha, beta, g = -best[0], -best[1], best[2]
        chosen.append((g, beta, alpha))
        free &= ~g
    return _assign(e, chosen)


# A semi-online rule sees ell, the approval profiles of the rounds revealed so
# far (profile[i] is voter i's approval set) and its own earlier choices.
SemiOnlineRule = Callable[[int, Sequence[tuple[frozenset[int], ...]], Sequence[int]], int]


def run_semionline(e: Election, rule: SemiOnlineRule) -> Outcome:
    """Reveal rounds one at a time; the rule only ever receives the revealed prefix."""
    revealed: list[tuple[frozenset[int], ...]] = []
    committed: list[int] = []
    for t in range(e.ell):
        revealed.append(tuple(e.approvals[i][t] for i in range(e.n)))
        choice = rule(e.ell, tuple(revealed), tuple(committed))
        if not isinstance(choice, (int, np.integer)) or not 0 <= choice < e.m:
            raise InputError(f"rule chose {choice!r} in round {t}, outside 0..{e.m - 1}")
        committed.append(int(choice))
    return Outcome(tuple(committed))


def constant_rule(choice: int = 0) -> SemiOnlineRule:
    return lambda ell, revealed, committed: choice


def script_rule(script: Sequence[int]) -> SemiOnlineRule:
    """Replay a fixed outcome."""
    script = tuple(script)
    return lambda ell, revealed, committed: script[len(committed)]


def greedy_plurality_rule(m: int) -> SemiOnlineRule:
    """Choose the current round's most approved candidate, lowest index on ties."""

    def rule(ell, revealed, committed):
        counts = [0] * m
        for s in revealed[-1]:
            for p in s:
                counts[p] += 1
        return max(range(m), key=lambda p: (counts[p], -p))

    return rule


def _ejr_fails_on_known_groups(e: Election, sat: list[int], k: int) -> bool:
    if any(sat[i] < 1 for i in range(k, e.n)):
        return True
    need = agreement(e, VoterGroup(tuple(range(k)))) * k // e.n
    return max(sat[:k]) < need


def semionline_impossibility_check(k: int, full_check: bool | None = None) -> bool:
    """True iff every completion of the forced prefix fails strong EJR.

    The first ``k`` rounds are fixed to ``p_t`` in round ``t``. Each
    completion is first tested against the singleton groups ``{i}``, ``i >= k``
    and the group of the first ``k`` voters; brute force is the fallback, and
    with ``full_check`` (default for ``k <= 4``) it rechecks every completion.
    """
    from .generators import gen_semionline

    if k < 4:
        raise InputError(f"semi-online instance needs k >= 4, got {k}")
    if full_check is None:
        full_check = k <= 4
    e = gen_semionline(k)
    ejr = AxiomSpec(Axiom.EJR)
    prefix = tuple(range(k))
    for tail in product(range(e.m), repeat=e.ell - k):
        o = Outcome(prefix + tail)
        sat, _ = outcome_profile(e, o)
        if _ejr_fails_on_known_groups(e, sat, k):
            if full_check and verify_bruteforce(e, o, ejr).holds:
                raise AssertionError(f"completion {o.choices} passes brute force but not the quick test")
            continue
        if k <= 6 and not verify_bruteforce(e, o, ejr).holds:
            continue
        return False
    return True
