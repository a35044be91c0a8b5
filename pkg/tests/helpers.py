"""Hypothesis strategies and definition-level oracles written with plain sets."""

from itertools import combinations

from hypothesis import strategies as st

from temporal_jr.election import Axiom, Election, Outcome


@st.composite
def elections(draw, max_n=5, max_m=3, max_ell=4, monotonic=False, nonempty=False):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    ell = draw(st.integers(1, max_ell))
    subset = st.frozensets(st.integers(0, m - 1), min_size=1 if nonempty else 0)
    rows = []
    for _ in range(n):
        row = [draw(subset)]
        for _ in range(ell - 1):
            row.append(row[-1] | draw(subset) if monotonic else draw(subset))
        rows.append(tuple(row))
    return Election(n, m, ell, tuple(rows))


@st.composite
def election_outcomes(draw, **kwargs):
    e = draw(elections(**kwargs))
    o = Outcome(tuple(draw(st.integers(0, e.m - 1)) for _ in range(e.ell)))
    return e, o


@st.composite
def two_candidate_instances(draw, max_n=6, max_ell=5, nonempty=False):
    """At most two candidates are approved or chosen in any round."""
    n = draw(st.integers(1, max_n))
    ell = draw(st.integers(1, max_ell))
    m = draw(st.integers(2, 4))
    pairs = [draw(st.lists(st.integers(0, m - 1), min_size=2, max_size=2, unique=True)) for _ in range(ell)]
    rows = []
    for _ in range(n):
        row = []
        for a, b in pairs:
            options = [{a}, {b}, {a, b}] + ([] if nonempty else [set()])
            row.append(frozenset(draw(st.sampled_from(options))))
        rows.append(tuple(row))
    o = Outcome(tuple(draw(st.sampled_from(p)) for p in pairs))
    return Election(n, m, ell, tuple(rows)), o


def naive_sat(e, o, i):
    return sum(1 for t in range(e.ell) if o.choices[t] in e.approvals[i][t])


def naive_beta(e, group):
    count = 0
    for t in range(e.ell):
        common = set(range(e.m))
        for i in group:
            common &= e.approvals[i][t]
        count += bool(common)
    return count


def naive_alpha(e, group):
    return naive_beta(e, group) * len(group) // e.n


def naive_coverage(e, o, group):
    return sum(1 for t in range(e.ell) if any(o.choices[t] in e.approvals[i][t] for i in group))


def naive_holds(e, o, axiom, weak):
    """Definition-level check over every group, using only set operations."""
    for r in range(1, e.n + 1):
        for group in combinations(range(e.n), r):
            beta = naive_beta(e, group)
            if weak and beta != e.ell:
                continue
            alpha = beta * r // e.n
            sats = [naive_sat(e, o, i) for i in group]
            if axiom is Axiom.JR and alpha >= 1 and max(sats) == 0:
                return False
            if axiom is Axiom.PJR and naive_coverage(e, o, group) < alpha:
                return False
            if axiom is Axiom.EJR and max(sats) < alpha:
                return False
    return True
