"""Instance constructors: hardness reductions, counterexamples, random elections.

Each reduction returns a :class:`ReductionBundle` whose designated outcome
violates the designated axiom exactly when the source graph has the property
named in the bundle. Padding and dummy candidates always take the highest
candidate indices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .election import Axiom, AxiomSpec, Election, Outcome, Strength
from .errors import InputError, PreconditionError
from .graphs import Graph


@dataclass(frozen=True)
class ReductionBundle:
    election: Election
    outcome: Outcome
    spec: AxiomSpec
    prop: str
    parameter: int

    @property
    def claim(self) -> str:
        return f"outcome fails {self.spec} <=> graph has {self.prop} {self.parameter}"


def _election(rows, m: int) -> Election:
    return Election(len(rows), m, len(rows[0]), tuple(tuple(frozenset(s) for s in r) for r in rows))


def gen_clique_wjr(g: Graph, kappa: int) -> ReductionBundle:
    """Clique of size ``kappa`` <=> all-``p3`` outcome fails w-JR (3 candidates)."""
    if kappa < 1:
        raise InputError(f"kappa must be >= 1, got {kappa}")
    nu = g.order
    if nu < 1:
        raise InputError("graph needs at least one vertex")
    p1, p2, p3 = 0, 1, 2
    rows = []
    for i in range(nu):
        row = []
        for t in range(nu):
            if t == i:
                row.append({p2})
            elif g.adjacent(i, t):
                row.append({p1, p2})
            else:
                row.append({p1})
        rows.append(row)
    rows += [[{p3}] * nu for _ in range((kappa - 1) * nu)]
    return ReductionBundle(
        _election(rows, 3), Outcome((p3,) * nu), AxiomSpec(Axiom.JR, Strength.WEAK), "clique", kappa
    )


def gen_is3_wejr(g: Graph, kappa: int) -> ReductionBundle:
    """Independent set of size ``>= kappa`` in a max-degree-3 graph <=> all-``q``
    outcome fails w-EJR (2 candidates)."""
    nu = g.order
    if g.max_degree() > 3:
        raise PreconditionError(f"IS-3 reduction needs max degree <= 3, got {g.max_degree()}")
    if not 1 <= kappa <= nu - 3:
        raise PreconditionError(f"IS-3 reduction needs 1 <= kappa <= nu - 3 = {nu - 3}, got {kappa}")
    p, q = 0, 1
    ell = 2 * nu + 1 - kappa
    rows = []
    for i in range(nu):
        row = []
        for t in range(ell):
            if t >= nu:
                row.append({p})
            elif t == i:
                row.append({q})
            elif g.adjacent(i, t):
                row.append({p})
            else:
                row.append({p, q})
        rows.append(row)
    rows += [[{p, q}] * nu + [{p}] * (ell - nu) for _ in range(nu + 1 - kappa)]
    return ReductionBundle(
        _election(rows, 2), Outcome((q,) * ell), AxiomSpec(Axiom.EJR, Strength.WEAK),
        "independent-set", kappa,
    )


def _bipartite_sides(g: Graph) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if g.parts is None or len(g.parts) != 2:
        raise InputError("expected a bipartite graph with declared parts (L, R)")
    return g.parts[0], g.parts[1]


def gen_biclique_jr(
    g: Graph, kappa: int, nonempty_pad: bool = False, axiom: Axiom = Axiom.JR
) -> ReductionBundle:
    """Biclique with ``>= kappa`` edges <=> all-``q`` outcome fails strong JR/PJR/EJR.

    With ``nonempty_pad`` every empty approval set of left voter ``i`` becomes
    ``{pad_i}``, a candidate nobody else approves.
    """
    left, right = _bipartite_sides(g)
    nu, lam = len(left), len(right)
    if kappa <= nu + lam:
        raise PreconditionError(
            f"biclique reduction needs kappa > |L| + |R| = {nu + lam}; apply blowup() first"
        )
    if lam < 1:
        raise InputError("right side must be nonempty (it indexes the rounds)")
    p, q = 0, 1
    rows = []
    for a, v in enumerate(left):
        row = []
        for u in right:
            if g.adjacent(v, u):
                row.append({p})
            else:
                row.append({2 + a} if nonempty_pad else set())
        rows.append(row)
    rows += [[{q}] * lam for _ in range(kappa - nu)]
    m = 2 + nu if nonempty_pad else 2
    return ReductionBundle(
        _election(rows, m), Outcome((q,) * lam), AxiomSpec(axiom, Strength.STRONG), "biclique", kappa
    )


def blowup(g: Graph, kappa: int) -> tuple[Graph, int]:
    """Replace every vertex by ``xi = |L| + |R| + 1`` copies; bicliques scale by ``xi**2``."""
    left, right = _bipartite_sides(g)
    xi = len(left) + len(right) + 1
    index = {}
    for v in (*left, *right):
        index[v] = len(index)
    edges = []
    for u, v in g.edges:
        for a in range(xi):
            for b in range(xi):
                edges.append((index[u] * xi + a, index[v] * xi + b))
    g2 = Graph.with_part_sizes((xi * len(left), xi * len(right)), edges)
    return g2, xi * xi * kappa


def gen_multicolored_wjr(g: Graph, k: int | None = None) -> ReductionBundle:
    """Multicolored clique <=> all-dummy outcome fails w-JR, with one round per part."""
    if g.parts is None:
        raise InputError("multicolored reduction needs declared parts")
    parts = g.parts
    if k is None:
        k = len(parts)
    if k != len(parts) or k < 2 or any(len(p) == 0 for p in parts):
        raise InputError(f"expected {k} nonempty parts, got sizes {[len(p) for p in parts]}")
    n1 = g.order
    dummy = n1
    rows = []
    part_of = {v: j for j, p in enumerate(parts) for v in p}
    for v in range(n1):
        row = []
        for j, p in enumerate(parts):
            if part_of[v] == j:
                row.append({v})
            else:
                row.append({u for u in p if g.adjacent(u, v)})
        rows.append(row)
    if n1 < k * k:
        rows += [[set()] * k for _ in range(k * k - n1)]
    elif n1 > k * k:
        extra = -(-(n1 - k * k) // (k - 1))
        rows += [[set(p) for p in parts] for _ in range(extra)]
    return ReductionBundle(
        _election(rows, n1 + 1), Outcome((dummy,) * k), AxiomSpec(Axiom.JR, Strength.WEAK),
        "multicolored-clique", k,
    )


def gen_example1() -> Election:
    """Six voters, fifteen pair candidates and six personal candidates over three rounds.

    Candidates ``0..14`` are the pairs ``{a, b}`` in lexicographic order, and
    ``15 + i`` is voter ``i``'s personal candidate.
    """
    pairs = list(combinations(range(6), 2))
    rows = []
    for i in range(6):
        first = {c for c, pair in enumerate(pairs) if i in pair}
        rows.append([first, {15 + i}, {15 + i}])
    return _election(rows, 21)


def gen_semionline(k: int) -> Election:
    """The ``2k``-voter instance on which no semi-online rule provides EJR."""
    if k < 4:
        raise InputError(f"semi-online instance needs k >= 4, got {k}")
    n = 2 * k
    rows = []
    for i in range(k):
        rows.append([{i}] * k + [{n - 1}] * k)
    for j in range(k):
        rows.append([{k + j}] * k + [{j}] * k)
    return _election(rows, n)


def gen_random(seed: int, n: int, m: int, ell: int, density: float) -> Election:
    """Each ``(voter, round, candidate)`` approval is drawn independently.

    Uses the stdlib Mersenne Twister (``random.Random(seed).random()``), whose
    output for integer seeds is identical across platforms; draws are made in
    voter, round, candidate order.
    """
    if min(n, m, ell) < 1:
        raise InputError("n, m and ell must be positive")
    if not 0.0 <= density <= 1.0:
        raise InputError(f"density must lie in [0, 1], got {density}")
    rng = random.Random(seed)
    rows = [
        [{p for p in range(m) if rng.random() < density} for _ in range(ell)] for _ in range(n)
    ]
    return _election(rows, m)
