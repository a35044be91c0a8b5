"""Verification of JR, PJR and EJR (weak and strong) for a fixed outcome.

``verify_bruteforce`` scores every voter group and is the reference every
other verifier is tested against. The structured verifiers only inspect
prefixes of satisfaction-sorted voter families: a group of ``r`` voters that
violates an axiom can be swapped for the ``r`` least satisfied voters of a
family it belongs to without lowering the demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .election import (
    Axiom,
    AxiomSpec,
    Election,
    Outcome,
    Strength,
    VoterGroup,
    Witness,
    agreement,
    all_nonempty,
    is_monotonic,
)
from .errors import CapacityError, PreconditionError
from .kernels import group_coverage, group_max


@dataclass(frozen=True)
class Budgets:
    """Enumeration caps; configuration rather than constants."""

    max_voters: int = 24
    max_enumeration: int = 1 << 26


DEFAULT_BUDGETS = Budgets()


@dataclass(frozen=True)
class VerifyReport:
    spec: AxiomSpec
    holds: bool
    witness: Witness | None
    method: str
    groups_examined: int

    def to_json(self) -> dict:
        w = self.witness
        return {
            "axiom": self.spec.axiom.value,
            "strength": self.spec.strength.value,
            "holds": self.holds,
            "method": self.method,
            "witness": None
            if w is None
            else {
                "group": [i + 1 for i in w.group.members],
                "beta": w.beta,
                "alpha": w.alpha,
                "observed": w.observed,
            },
            "groups_examined": self.groups_examined,
        }


@dataclass(frozen=True)
class SortedGroupFamily:
    """Members of ``base`` ordered by (satisfaction, voter index).

    ``prefix(r)`` is the group of the first ``r`` voters in that order.
    """

    base: VoterGroup
    order: tuple[int, ...] = field(default=())

    @classmethod
    def build(cls, base: VoterGroup, sat: tuple[int, ...] | list[int]) -> "SortedGroupFamily":
        return cls(base, tuple(sorted(base.members, key=lambda i: (sat[i], i))))

    def prefix(self, r: int) -> VoterGroup:
        return VoterGroup(self.order[:r])

    def prefixes(self) -> Iterable[VoterGroup]:
        for r in range(1, len(self.order) + 1):
            yield self.prefix(r)


def outcome_profile(e: Election, o: Outcome) -> tuple[list[int], list[int]]:
    """Per-voter satisfaction and bitmask of rounds where the voter is satisfied."""
    return _profile(e, o)[0]


# Verifying several axioms for one outcome recomputes the same per-outcome
# data, so the most recent profile and its all-groups arrays are kept.
_last_profile: list = [None, None, None]


def _profile(e: Election, o: Outcome):
    if _last_profile[0] is e and _last_profile[1] == o.choices:
        return _last_profile[2]
    o.check(e)
    sat, hits = [], []
    choices = o.choices
    for row in e.masks:
        h = 0
        for t, p in enumerate(choices):
            if row[t] >> p & 1:
                h |= 1 << t
        hits.append(h)
        sat.append(bin(h).count("1"))
    entry = ((sat, hits), {})
    _last_profile[:] = [e, o.choices, entry]
    return entry


def _group_observed(e: Election, o: Outcome, axiom: Axiom) -> np.ndarray:
    (sat, hits), arrays = _profile(e, o)
    key = "coverage" if axiom is Axiom.PJR else "max"
    if key not in arrays:
        arrays[key] = group_coverage(hits, e.ell) if key == "coverage" else group_max(sat)
    return arrays[key]


def _fails(axiom: Axiom, observed: int, alpha: int) -> bool:
    if axiom is Axiom.JR:
        return alpha >= 1 and observed == 0
    return observed < alpha


def _witness(e: Election, members, observed: int) -> Witness:
    g = VoterGroup(tuple(members))
    beta = agreement(e, g)
    return Witness(g, beta, beta * len(g) // e.n, observed)


_AXIOM_ROWS = (Axiom.JR, Axiom.PJR, Axiom.EJR)


_SMALL_N = 6
_small_tables: list = [None, None]


def _small_first_violations(e: Election, sat: list[int], hits: list[int]) -> dict:
    # below ~64 groups numpy call overhead dominates, so plain lists win
    if _small_tables[0] is not e:
        tables = e.group_tables
        _small_tables[:] = [e, (tables.alpha.tolist(), (tables.beta == e.ell).tolist())]
    alpha, full = _small_tables[1]
    best, cov = [-1], [0]
    for b in range(e.n):
        s, h = sat[b], hits[b]
        best += [x if x > s else s for x in best]
        cov += [x | h for x in cov]
    found = {}
    for axiom in _AXIOM_ROWS:
        strong = weak = 0
        for g in range(1, len(best)):
            a = alpha[g]
            if axiom is Axiom.JR:
                bad = a >= 1 and best[g] == 0
            elif axiom is Axiom.PJR:
                bad = cov[g].bit_count() < a
            else:
                bad = best[g] < a
            if bad:
                if not strong:
                    strong = g
                if full[g]:
                    weak = g
                    break
        found[axiom, False] = strong
        found[axiom, True] = weak
    return found


def _first_violations(e: Election, o: Outcome) -> dict[tuple[Axiom, bool], int]:
    """Smallest violating group bitmask (0 if none) for all six specs at once."""
    (sat, hits), arrays = _profile(e, o)
    found = arrays.get("bruteforce")
    if found is None and e.n <= _SMALL_N:
        found = arrays["bruteforce"] = _small_first_violations(e, sat, hits)
    if found is None:
        tables = e.group_tables
        best = _group_observed(e, o, Axiom.EJR)
        cov = _group_observed(e, o, Axiom.PJR)
        strong = np.stack(
            [(tables.alpha >= 1) & (best == 0), cov < tables.alpha, best < tables.alpha]
        )
        strong[:, 0] = False
        bad = np.concatenate([strong, strong & (tables.beta == e.ell)])
        first = np.argmax(bad, axis=1)
        hit = bad[np.arange(6), first]
        found = {
            (axiom, weak): int(first[k]) if hit[k] else 0
            for k, (weak, axiom) in enumerate(
                (w, a) for w in (False, True) for a in _AXIOM_ROWS
            )
        }
        arrays["bruteforce"] = found
    return found


def verify_bruteforce(
    e: Election, o: Outcome, spec: AxiomSpec, budgets: Budgets = DEFAULT_BUDGETS
) -> VerifyReport:
    """Check every nonempty voter group; the witness is the smallest violating bitmask."""
    _profile(e, o)  # validates o
    if e.n > budgets.max_voters:
        raise CapacityError(
            f"brute force needs n <= {budgets.max_voters} (budget-n), got n={e.n}"
        )
    g = _first_violations(e, o)[spec.axiom, spec.weak]
    if not g:
        return VerifyReport(spec, True, None, "bruteforce", (1 << e.n) - 1)
    tables = e.group_tables
    observed = _group_observed(e, o, spec.axiom)
    witness = Witness(
        VoterGroup.from_mask(g), int(tables.beta[g]), int(tables.alpha[g]), int(observed[g])
    )
    return VerifyReport(spec, False, witness, "bruteforce", g)


def verify_jr_alt_demand(
    e: Election, o: Outcome, budgets: Budgets = DEFAULT_BUDGETS
) -> VerifyReport:
    """Strong JR with the decoupled demand ``min(beta, ell*|g|/n)`` in place of ``alpha``.

    A group needs a satisfied member once that demand reaches 1, i.e. when it
    agrees in some round and ``ell * |g| >= n``. The witness reports the floor
    of the decoupled demand.
    """
    o.check(e)
    if e.n > budgets.max_voters:
        raise CapacityError(f"brute force needs n <= {budgets.max_voters} (budget-n), got n={e.n}")
    tables = e.group_tables
    observed = _group_observed(e, o, Axiom.JR)
    alt = np.minimum(tables.beta, e.ell * tables.size // e.n)
    bad = (alt >= 1) & (observed == 0)
    bad[0] = False
    spec = AxiomSpec(Axiom.JR)
    if not bad.any():
        return VerifyReport(spec, True, None, "bruteforce-alt-demand", (1 << e.n) - 1)
    g = int(np.argmax(bad))
    witness = Witness(VoterGroup.from_mask(g), int(tables.beta[g]), int(alt[g]), 0)
    return VerifyReport(spec, False, witness, "bruteforce-alt-demand", g)


def _scan_prefixes(
    e: Election,
    order: list[int],
    sat: list[int],
    hits: list[int],
    axiom: Axiom,
    tsize: int | None,
) -> tuple[int, int, int]:
    """Return ``(r, observed, examined)`` for the first failing prefix, ``r = 0`` if none.

    A prefix of ``r`` voters is checked against ``floor(r * tsize / n)``, or
    against its own demand when ``tsize`` is None.
    """
    n = e.n
    if tsize is not None and axiom is not Axiom.PJR:
        # orders ascend in satisfaction, so the current voter is the best so far
        jr = axiom is Axiom.JR
        for r, i in enumerate(order, 1):
            s = sat[i]
            if jr and s:
                break
            if s < r * tsize // n:
                return r, s, r
        return 0, 0, len(order)
    cov = 0
    best = -1
    inter = [-1] * e.ell
    for r, i in enumerate(order, 1):
        best = max(best, sat[i])
        cov |= hits[i]
        if tsize is None:
            inter = [a & b for a, b in zip(inter, e.masks[i])]
            need = sum(1 for x in inter if x) * r // n
        else:
            need = r * tsize // n
        observed = bin(cov).count("1") if axiom is Axiom.PJR else best
        if _fails(axiom, observed, need):
            return r, observed, r
    return 0, 0, len(order)


def _members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def agreement_families(e: Election, weak: bool) -> dict[int, int]:
    """All distinct nonempty voter sets ``{i : o'_t in s_it for t in T}``.

    Maps each set (as a voter bitmask) to the largest ``|T|`` producing it,
    over all candidate sequences ``o'`` and round sets ``T`` (only ``T`` equal
    to all rounds when ``weak``). Insertion order is the canonical scan order.
    """
    full = (1 << e.n) - 1
    states: dict[int, int] = {full: 0}
    for t in range(e.ell):
        nxt: dict[int, int] = {}
        for mask, size in states.items():
            if not weak and nxt.get(mask, -1) < size:
                nxt[mask] = size
            for sup in e.supporters[t]:
                sub = mask & sup
                if sub and nxt.get(sub, -1) < size + 1:
                    nxt[sub] = size + 1
        states = nxt
    return {mask: size for mask, size in states.items() if size > 0}


_family_cache: dict[tuple[int, bool], tuple[Election, list]] = {}


def _cached_families(e: Election, weak: bool) -> list[tuple[int, list[int], int]]:
    """``(mask, members, |T|)`` per family, in scan order, cached per election."""
    key = (id(e), weak)
    hit = _family_cache.get(key)
    if hit is not None and hit[0] is e:
        return hit[1]
    fams = []
    for mask, size in agreement_families(e, weak).items():
        members = _members(mask)
        # every prefix demand is at most floor(|family| * |T| / n); zero means nothing to check
        if len(members) * size >= e.n:
            fams.append((mask, members, size))
    if len(_family_cache) > 64:
        _family_cache.clear()
    _family_cache[key] = (e, fams)
    return fams


def enumeration_cost(e: Election) -> int:
    """Number of (candidate sequence, round set) pairs the enumerative verifier may visit."""
    return e.enumeration_size


def verify_enumerative(
    e: Election, o: Outcome, spec: AxiomSpec, budgets: Budgets = DEFAULT_BUDGETS
) -> VerifyReport:
    """Scan prefixes of every family ``N_{o',T}`` against ``floor(r*|T|/n)``.

    Families that coincide as voter sets are scanned once with their largest
    ``|T|``, which is the strictest threshold.
    """
    _profile(e, o)  # validates o
    cost = enumeration_cost(e)
    if cost > budgets.max_enumeration:
        raise CapacityError(
            f"enumerative verifier needs m^ell*2^ell <= {budgets.max_enumeration} "
            f"(budget-enum), got {cost}"
        )
    (sat, hits), arrays = _profile(e, o)
    orders = arrays.setdefault("orders", {})
    examined = 0
    for mask, members, tsize in _cached_families(e, spec.weak):
        order = orders.get(mask)
        if order is None:
            order = orders[mask] = sorted(members, key=lambda i: (sat[i], i))
        r, observed, count = _scan_prefixes(e, order, sat, hits, spec.axiom, tsize)
        examined += count
        if r:
            return VerifyReport(
                spec, False, _witness(e, order[:r], observed), "enumerative", examined
            )
    return VerifyReport(spec, True, None, "enumerative", examined)


def verify_monotonic(e: Election, o: Outcome, spec: AxiomSpec) -> VerifyReport:
    """Polynomial verifier for elections whose approvals only grow over time.

    Strong axioms scan the families ``N_{p,t}`` of voters approving ``p`` in
    round ``t``; weak axioms only need ``t = 0``. Prefixes are checked against
    their actual demand, in ``(p, t, r)`` order.
    """
    _profile(e, o)  # validates o
    if not is_monotonic(e):
        raise PreconditionError("verify_monotonic requires a monotonic election")
    (sat, hits), arrays = _profile(e, o)
    orders = arrays.setdefault("orders", {})
    rounds = range(1) if spec.weak else range(e.ell)
    seen = set()
    examined = 0
    for p in range(e.m):
        for t in rounds:
            mask = e.supporters[t][p]
            if not mask or mask in seen:
                continue
            seen.add(mask)
            order = orders.get(mask)
            if order is None:
                order = orders[mask] = sorted(_members(mask), key=lambda i: (sat[i], i))
            r, observed, count = _scan_prefixes(e, order, sat, hits, spec.axiom, None)
            examined += count
            if r:
                w = _witness(e, order[:r], observed)
                if spec.weak and w.beta != e.ell:
                    raise AssertionError("weak family prefix without full agreement")
                return VerifyReport(spec, False, w, "monotonic", examined)
    return VerifyReport(spec, True, None, "monotonic", examined)


def has_two_support(e: Election, o: Outcome) -> bool:
    """True iff each round's approved candidates plus the chosen one number at most two."""
    arrays = _profile(e, o)[1]
    found = arrays.get("two_support")
    if found is None:
        support = e.round_support
        found = arrays["two_support"] = all(
            len(support[t] | {p}) <= 2 for t, p in enumerate(o.choices)
        )
    return found


def _grumpy(e: Election, o: Outcome) -> list[int]:
    return [
        i
        for i, row in enumerate(e.masks)
        if all(m and m & (m - 1) == 0 and not m >> p & 1 for m, p in zip(row, o.choices))
    ]


def _grumpy_report(e: Election, o: Outcome, spec: AxiomSpec, method: str) -> VerifyReport:
    group = _grumpy(e, o)
    if len(group) * e.ell // e.n == 0:
        return VerifyReport(spec, True, None, method, 1)
    return VerifyReport(spec, False, _witness(e, group, 0), method, 1)


def verify_two_candidates_wjr(e: Election, o: Outcome) -> VerifyReport:
    """w-JR via the grumpy voters when at most two candidates matter per round.

    A voter is grumpy if in every round they approve exactly one candidate and it
    is not the chosen one. Grumpy voters agree in every round, and any w-JR
    violation lies inside them, so w-JR holds iff their demand is zero.
    """
    o.check(e)
    if not has_two_support(e, o):
        raise PreconditionError(
            "two-candidate verifier needs at most two relevant candidates per round "
            "(approved candidates plus the chosen one)"
        )
    return _grumpy_report(e, o, AxiomSpec(Axiom.JR, Strength.WEAK), "two-candidate-wjr")


def verify_two_candidates_jr_nonempty(e: Election, o: Outcome) -> VerifyReport:
    """Strong JR in the same two-candidate setting when no approval set is empty."""
    o.check(e)
    if not has_two_support(e, o):
        raise PreconditionError(
            "two-candidate verifier needs at most two relevant candidates per round "
            "(approved candidates plus the chosen one)"
        )
    if not all_nonempty(e):
        raise PreconditionError("JR two-candidate verifier needs nonempty approval sets")
    return _grumpy_report(e, o, AxiomSpec(Axiom.JR), "two-candidate-jr")


def applicable_methods(e: Election, o: Outcome, spec: AxiomSpec, budgets: Budgets = DEFAULT_BUDGETS) -> list[str]:
    """Verifiers whose preconditions and budgets admit this input, cheapest first."""
    methods = []
    if is_monotonic(e):
        methods.append("monotonic")
    if spec.axiom is Axiom.JR and has_two_support(e, o):
        if spec.weak:
            methods.append("two-candidate-wjr")
        elif all_nonempty(e):
            methods.append("two-candidate-jr")
    if enumeration_cost(e) <= budgets.max_enumeration:
        methods.append("enumerative")
    if e.n <= budgets.max_voters:
        methods.append("bruteforce")
    return methods


def run_method(
    method: str, e: Election, o: Outcome, spec: AxiomSpec, budgets: Budgets = DEFAULT_BUDGETS
) -> VerifyReport:
    if method == "bruteforce":
        return verify_bruteforce(e, o, spec, budgets)
    if method == "enumerative":
        return verify_enumerative(e, o, spec, budgets)
    if method == "monotonic":
        return verify_monotonic(e, o, spec)
    if method in ("two-candidate-wjr", "two-candidate-jr"):
        wanted = AxiomSpec(Axiom.JR, Strength.WEAK if method.endswith("wjr") else Strength.STRONG)
        if spec != wanted:
            raise PreconditionError(f"{method} only verifies {wanted}")
        if method == "two-candidate-wjr":
            return verify_two_candidates_wjr(e, o)
        return verify_two_candidates_jr_nonempty(e, o)
    raise ValueError(f"unknown verification method {method!r}")


def route(e: Election, o: Outcome, spec: AxiomSpec, budgets: Budgets = DEFAULT_BUDGETS) -> VerifyReport:
    """Dispatch to the cheapest applicable verifier."""
    o.check(e)
    methods = applicable_methods(e, o, spec, budgets)
    if not methods:
        raise CapacityError(
            f"no applicable verifier: n={e.n} exceeds budget-n={budgets.max_voters} and "
            f"m^ell*2^ell={enumeration_cost(e)} exceeds budget-enum={budgets.max_enumeration}"
        )
    return run_method(methods[0], e, o, spec, budgets)
