"""Integer program whose feasible points are EJR outcomes.

Rounds are grouped into *types* by their full approval profile after merging
candidates with identical approvers, and ``x[p, tau]`` counts how often
candidate ``p`` is chosen in rounds of type ``tau``. Binary ``xi[i, V]``
selects the member of group ``V`` whose satisfaction must reach the group's
demand. Optional per-voter satisfaction floors and a welfare objective turn
the feasibility model into an optimization model.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path

from .election import CandidateMap, Election, Outcome, VoterGroup, dedup_candidates
from .errors import CapacityError, InputError

DEFAULT_NODE_BUDGET = 1 << 22


@dataclass(frozen=True)
class RoundType:
    profile: tuple[frozenset[int], ...]
    candidates: int
    rounds: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.rounds)


@dataclass(frozen=True)
class Variable:
    name: str
    lower: int
    upper: int


@dataclass(frozen=True)
class Constraint:
    name: str
    coeffs: tuple[tuple[int, int], ...]  # (variable index, coefficient)
    sense: str  # "=", ">=" or "<="
    rhs: int


@dataclass
class IlpModel:
    election: Election
    reduced: Election
    mapping: CandidateMap
    types: list[RoundType]
    variables: list[Variable] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: dict[int, int] | None = None
    # x variable index per (type, reduced candidate)
    x_index: dict[tuple[int, int], int] = field(default_factory=dict)
    # (group mask, demand, {voter: xi variable index}) for groups with demand > 0
    groups: list[tuple[int, int, dict[int, int]]] = field(default_factory=list)
    floors: tuple[int, ...] | None = None

    def satisfaction_terms(self, i: int) -> list[tuple[int, int]]:
        """``sat_i`` as ``(variable, coefficient)`` pairs over the ``x`` variables."""
        terms = []
        for k, tau in enumerate(self.types):
            for p in sorted(tau.profile[i]):
                terms.append((self.x_index[k, p], 1))
        return terms

    def evaluate(self, values: list[int], terms) -> int:
        return sum(c * values[v] for v, c in terms)

    def is_feasible(self, values: list[int]) -> bool:
        if len(values) != len(self.variables):
            return False
        for var, x in zip(self.variables, values):
            if not var.lower <= x <= var.upper:
                return False
        for con in self.constraints:
            lhs = self.evaluate(values, con.coeffs)
            if con.sense == "=" and lhs != con.rhs:
                return False
            if con.sense == ">=" and lhs < con.rhs:
                return False
            if con.sense == "<=" and lhs > con.rhs:
                return False
        return True

    def welfare(self, values: list[int]) -> int:
        return sum(self.evaluate(values, self.satisfaction_terms(i)) for i in range(self.election.n))


def round_types(reduced: Election, mapping: CandidateMap) -> list[RoundType]:
    """Group rounds by (approval profile, number of candidates present), first occurrence first."""
    index: dict[tuple, list[int]] = {}
    for t in range(reduced.ell):
        key = (tuple(reduced.approvals[i][t] for i in range(reduced.n)), len(mapping.lift[t]))
        index.setdefault(key, []).append(t)
    return [RoundType(profile, c, tuple(rounds)) for (profile, c), rounds in index.items()]


def build_model(
    e: Election, floors=None, objective: str | None = None, max_voters: int = 24
) -> IlpModel:
    """Build the EJR model, optionally with satisfaction floors and ``objective="max-welfare"``."""
    if objective not in (None, "none", "max-welfare"):
        raise InputError(f"unknown objective {objective!r}")
    if floors is not None:
        floors = tuple(int(d) for d in floors)
        if len(floors) != e.n:
            raise InputError(f"floors has {len(floors)} entries, expected n={e.n}")
    if e.n > max_voters:
        raise CapacityError(f"EJR model enumerates 2^n groups; n={e.n} exceeds {max_voters}")
    reduced, mapping = dedup_candidates(e)
    types = round_types(reduced, mapping)
    model = IlpModel(e, reduced, mapping, types, floors=floors)
    for k, tau in enumerate(types):
        for p in range(tau.candidates):
            model.x_index[k, p] = len(model.variables)
            model.variables.append(Variable(f"x_{p + 1}_t{k + 1}", 0, tau.count))
    for k, tau in enumerate(types):
        model.constraints.append(
            Constraint(
                f"type_t{k + 1}",
                tuple((model.x_index[k, p], 1) for p in range(tau.candidates)),
                "=",
                tau.count,
            )
        )
    sat_terms = [model.satisfaction_terms(i) for i in range(e.n)]
    tables = reduced.group_tables
    for g in range(1, 1 << e.n):
        alpha = int(tables.alpha[g])
        if alpha == 0:
            continue
        gid = len(model.groups) + 1
        members = VoterGroup.from_mask(g).members
        xi = {}
        for i in members:
            xi[i] = len(model.variables)
            model.variables.append(Variable(f"xi_{i + 1}_{gid}", 0, 1))
        model.constraints.append(
            Constraint(f"pick_g{gid}", tuple((xi[i], 1) for i in members), ">=", 1)
        )
        for i in members:
            model.constraints.append(
                Constraint(f"ejr_g{gid}_v{i + 1}", tuple(sat_terms[i]) + ((xi[i], -alpha),), ">=", 0)
            )
        model.groups.append((g, alpha, xi))
    if floors is not None:
        for i, d in enumerate(floors):
            if d > 0:
                model.constraints.append(Constraint(f"floor_v{i + 1}", tuple(sat_terms[i]), ">=", d))
    if objective == "max-welfare":
        obj: dict[int, int] = {}
        for terms in sat_terms:
            for v, c in terms:
                obj[v] = obj.get(v, 0) + c
        model.objective = obj
    return model


@dataclass(frozen=True)
class Solution:
    status: str  # "optimal", "feasible" or "infeasible"
    values: tuple[int, ...] | None
    welfare: int | None
    nodes: int


def solve_exact(model: IlpModel, node_budget: int = DEFAULT_NODE_BUDGET) -> Solution:
    """Depth-first branch and bound over the ``x`` variables in (type, candidate) order.

    Values are tried in increasing order, so the first feasible point found is
    the lexicographically smallest; with an objective only strictly better
    points replace the incumbent, which keeps the lexicographically smallest
    optimum. The ``xi`` variables are set afterwards to the lowest-index
    member of each group that meets its demand.
    """
    e = model.election
    n = e.n
    types = model.types
    # per type and reduced candidate: voter bitmask of approvers
    approvers = [
        [sum(1 << i for i in range(n) if p in tau.profile[i]) for p in range(tau.candidates)]
        for tau in types
    ]
    # per voter: best satisfaction still obtainable from types k..end
    suffix_cap = [[0] * n for _ in range(len(types) + 1)]
    for k in range(len(types) - 1, -1, -1):
        for i in range(n):
            gets = any(approvers[k][p] >> i & 1 for p in range(types[k].candidates))
            suffix_cap[k][i] = suffix_cap[k + 1][i] + (types[k].count if gets else 0)
    suffix_welfare = [0] * (len(types) + 1)
    for k in range(len(types) - 1, -1, -1):
        best = max(bin(a).count("1") for a in approvers[k])
        suffix_welfare[k] = suffix_welfare[k + 1] + best * types[k].count
    groups = [([i for i in range(n) if g >> i & 1], alpha) for g, alpha, _ in model.groups]
    floors = model.floors or (0,) * n
    maximize = model.objective is not None

    sat = [0] * n
    x = [0] * len(model.variables)
    best_values: list[int] | None = None
    best_welfare = -1
    nodes = 0

    def promising(k: int) -> bool:
        caps = [sat[i] + suffix_cap[k][i] for i in range(n)]
        if any(caps[i] < floors[i] for i in range(n)):
            return False
        for members, alpha in groups:
            if max(caps[i] for i in members) < alpha:
                return False
        return True

    def place(k: int, p: int, remaining: int) -> bool:
        """Assign x for type k from candidate p on; returns True to stop the search."""
        nonlocal nodes, best_values, best_welfare
        nodes += 1
        if nodes > node_budget:
            raise CapacityError(
                f"exact ILP search exceeded {node_budget} nodes; export the model with emit_lp"
            )
        if k == len(types):
            if not promising(k):
                return False
            w = sum(sat)
            if best_values is None or (maximize and w > best_welfare):
                best_values, best_welfare = list(x), w
            return not maximize
        tau = types[k]
        last = p == tau.candidates - 1
        choices = [remaining] if last else range(remaining + 1)
        for v in choices:
            idx = model.x_index[k, p]
            x[idx] = v
            for i in range(n):
                if approvers[k][p] >> i & 1:
                    sat[i] += v
            if last:
                ok = promising(k + 1) and not (
                    maximize
                    and best_values is not None
                    and sum(sat) + suffix_welfare[k + 1] <= best_welfare
                )
                stop = place(k + 1, 0, types[k + 1].count) if ok and k + 1 < len(types) else (
                    place(k + 1, 0, 0) if ok else False
                )
            else:
                stop = place(k, p + 1, remaining - v)
            for i in range(n):
                if approvers[k][p] >> i & 1:
                    sat[i] -= v
            x[idx] = 0
            if stop:
                return True
        return False

    if types:
        place(0, 0, types[0].count)
    if best_values is None:
        return Solution("infeasible", None, None, nodes)
    sats = [model.evaluate(best_values, model.satisfaction_terms(i)) for i in range(n)]
    for _g, alpha, xi in model.groups:
        for i in sorted(xi):
            if sats[i] >= alpha:
                best_values[xi[i]] = 1
                break
    if not model.is_feasible(best_values):
        raise AssertionError("solver produced an infeasible assignment")
    return Solution("optimal" if maximize else "feasible", tuple(best_values), sum(sats), nodes)


def decode(model: IlpModel, values) -> Outcome:
    """Spread each type's counts over its rounds (earliest rounds, lowest candidates first)
    and lift the reduced candidates back to original ones."""
    if values is None:
        raise InputError("cannot decode an infeasible model")
    choices = [0] * model.election.ell
    for k, tau in enumerate(model.types):
        rounds = iter(tau.rounds)
        for p in range(tau.candidates):
            for _ in range(values[model.x_index[k, p]]):
                choices[next(rounds)] = p
    return model.mapping.lift_outcome(Outcome(tuple(choices)))


def encode(model: IlpModel, o: Outcome) -> list[int]:
    """Assignment representing outcome ``o`` (``xi`` set as in :func:`solve_exact`)."""
    o.check(model.election)
    values = [0] * len(model.variables)
    lowered = model.mapping.lower_outcome(o)
    type_of = {t: k for k, tau in enumerate(model.types) for t in tau.rounds}
    for t, q in enumerate(lowered.choices):
        values[model.x_index[type_of[t], q]] += 1
    sats = [model.evaluate(values, model.satisfaction_terms(i)) for i in range(model.election.n)]
    for _g, alpha, xi in model.groups:
        for i in sorted(xi):
            if sats[i] >= alpha:
                values[xi[i]] = 1
                break
    return values


def _linear(coeffs, names) -> str:
    parts = []
    for v, c in coeffs:
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        term = names[v] if mag == 1 else f"{mag} {names[v]}"
        parts.append(f"{sign} {term}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def format_lp(model: IlpModel) -> str:
    """The model in CPLEX LP text format."""
    names = [v.name for v in model.variables]
    out = io.StringIO()
    e = model.election
    out.write(f"\\ EJR model: n={e.n} m={e.m} ell={e.ell} types={len(model.types)}\n")
    if model.objective:
        out.write("Maximize\n")
        out.write(f" welfare: {_linear(sorted(model.objective.items()), names)}\n")
    else:
        out.write("Minimize\n")
        out.write(f" obj: 0 {names[0]}\n" if names else " obj:\n")
    out.write("Subject To\n")
    for con in model.constraints:
        out.write(f" {con.name}: {_linear(con.coeffs, names)} {con.sense} {con.rhs}\n")
    out.write("Bounds\n")
    for v in model.variables:
        out.write(f" {v.lower} <= {v.name} <= {v.upper}\n")
    out.write("Generals\n")
    for v in model.variables:
        out.write(f" {v.name}\n")
    out.write("End\n")
    return out.getvalue()


def emit_lp(model: IlpModel, destination) -> None:
    Path(destination).write_text(format_lp(model))
