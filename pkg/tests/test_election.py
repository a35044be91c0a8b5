from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from helpers import elections, election_outcomes, naive_beta, naive_coverage, naive_sat
from temporal_jr.election import (
    ALL_SPECS,
    Axiom,
    AxiomSpec,
    Election,
    Outcome,
    Strength,
    VoterGroup,
    agreement,
    all_nonempty,
    alt_demand,
    coverage,
    dedup_candidates,
    demand,
    is_monotonic,
    satisfaction,
    satisfactions,
)
from temporal_jr.errors import InputError
from temporal_jr.generators import gen_biclique_jr, gen_clique_wjr, gen_example1, gen_semionline
from temporal_jr.graphs import Graph


def test_election_validation():
    with pytest.raises(InputError, match="n must be"):
        Election(0, 1, 1, ())
    with pytest.raises(InputError, match="voter 0, round 1"):
        Election(1, 2, 2, ((frozenset({0}), frozenset({2})),))
    with pytest.raises(InputError, match="rounds"):
        Election(1, 2, 2, ((frozenset({0}),),))
    with pytest.raises(InputError, match="voters"):
        Election(2, 2, 1, ((frozenset({0}),),))


def test_empty_approvals_are_legal():
    e = Election.from_lists([[set(), set()]], m=1)
    o = Outcome((0, 0))
    assert satisfaction(e, o, 0) == 0
    assert not all_nonempty(e)


def test_outcome_and_group_validation():
    e = Election.from_lists([[{0}, {1}]])
    with pytest.raises(InputError):
        Outcome((0,)).check(e)
    with pytest.raises(InputError):
        Outcome((0, 2)).check(e)
    with pytest.raises(InputError):
        VoterGroup(())
    with pytest.raises(InputError):
        satisfaction(e, Outcome((0, 1)), 1)
    with pytest.raises(InputError):
        agreement(e, VoterGroup((0, 1)))
    assert VoterGroup((3, 1, 1)).members == (1, 3)
    assert VoterGroup.from_mask(0b1010) == VoterGroup((1, 3))
    assert VoterGroup((1, 3)).mask == 0b1010


def test_axiom_spec_parsing():
    assert AxiomSpec.parse("w-EJR") == AxiomSpec(Axiom.EJR, Strength.WEAK)
    assert AxiomSpec.parse("pjr") == AxiomSpec(Axiom.PJR)
    assert str(AxiomSpec(Axiom.JR, Strength.WEAK)) == "w-JR"
    assert len(set(ALL_SPECS)) == 6
    with pytest.raises(InputError):
        AxiomSpec.parse("core")


def test_semionline_prefix_satisfaction():
    e = gen_semionline(4)
    # prefix p_1..p_k, then a completion that serves the second half of the voters
    o = Outcome((0, 1, 2, 3, 0, 1, 2, 3))
    for i in range(4):
        assert satisfaction(e, o, i) == 1


def test_example1_agreement_and_demands():
    e = gen_example1()
    for r in range(1, 7):
        for g in combinations(range(6), r):
            group = VoterGroup(g)
            expected_beta = {1: 3, 2: 1}.get(r, 0)
            assert agreement(e, group) == expected_beta
            assert demand(e, group) == 0
            if r == 2:
                assert alt_demand(e, group) == 1


def test_semionline_group_demand():
    e = gen_semionline(4)
    assert demand(e, VoterGroup(tuple(range(4)))) == 2


def test_clique_voters_have_demand_one():
    tri = Graph(3, frozenset({(0, 1), (1, 2), (0, 2)}))
    b = gen_clique_wjr(tri, 3)
    assert demand(b.election, VoterGroup((0, 1, 2))) == 1
    assert all_nonempty(b.election)


def test_zero_agreement_zero_demand():
    e = Election.from_lists([[{0}], [{1}]])
    assert agreement(e, VoterGroup((0, 1))) == 0
    assert demand(e, VoterGroup((0, 1))) == 0


def test_full_group_alt_demand():
    e = Election.from_lists([[{0}, {0}], [{0, 1}, {0}]])
    assert alt_demand(e, VoterGroup((0, 1))) == 2


def test_monotonic_examples():
    static = Election.from_lists([[{0, 1}] * 3, [{1}] * 3])
    assert is_monotonic(static)
    assert not is_monotonic(Election.from_lists([[{0}, set()]]))
    path_edge = Graph(3, frozenset({(0, 1)}))
    # voter 0 approves {p1, p2} in round 1 and only {p2} in its own round 0
    e = gen_clique_wjr(path_edge, 2).election
    assert not is_monotonic(e)


def test_all_nonempty_examples():
    g = Graph.with_part_sizes((3, 2), [(0, 3), (0, 4), (1, 3), (1, 4), (2, 3)])
    assert not all_nonempty(gen_biclique_jr(g, 6).election)
    assert all_nonempty(gen_biclique_jr(g, 6, nonempty_pad=True).election)
    assert not all_nonempty(Election.from_lists([[set()]], m=1))


@given(election_outcomes(max_n=6, max_m=4, max_ell=5))
def test_satisfaction_matches_recount(eo):
    e, o = eo
    assert satisfactions(e, o) == tuple(naive_sat(e, o, i) for i in range(e.n))
    assert all(0 <= s <= e.ell for s in satisfactions(e, o))


@given(election_outcomes(), st.data())
def test_coverage_agreement_demand(eo, data):
    e, o = eo
    members = data.draw(st.lists(st.integers(0, e.n - 1), min_size=1, unique=True))
    g = VoterGroup(tuple(members))
    cov = coverage(e, o, g)
    assert cov == naive_coverage(e, o, g.members)
    assert cov >= max(satisfaction(e, o, i) for i in g)
    beta = agreement(e, g)
    assert beta == naive_beta(e, g.members)
    alpha = demand(e, g)
    assert e.n * alpha <= beta * len(g) < e.n * (alpha + 1)
    assert alt_demand(e, g) >= alpha
    assert alt_demand(e, g) == min(Fraction(beta), Fraction(e.ell * len(g), e.n))
    if len(g) == 1:
        assert cov == satisfaction(e, o, g.members[0])


def test_full_coverage():
    e = Election.from_lists([[{0}, {1}], [{1}, {0}]])
    assert coverage(e, Outcome((1, 1)), VoterGroup((0, 1))) == 2


@given(elections(max_n=5))
def test_agreement_is_antitone(e):
    groups = [VoterGroup(c) for r in range(1, e.n + 1) for c in combinations(range(e.n), r)]
    beta = {g.members: agreement(e, g) for g in groups}
    for g in groups:
        for h in groups:
            if set(g.members) <= set(h.members):
                assert beta[g.members] >= beta[h.members]


@given(elections(max_n=5, max_m=4))
def test_dedup_preserves_agreement_and_demand(e):
    reduced, mapping = dedup_candidates(e)
    assert reduced.m <= e.m
    for r in range(1, e.n + 1):
        for c in combinations(range(e.n), r):
            g = VoterGroup(c)
            assert agreement(reduced, g) == agreement(e, g)
            assert demand(reduced, g) == demand(e, g)


def test_dedup_merges_duplicates_and_lifts_to_representative():
    e = Election.from_lists([[{0, 1}, {0, 1, 2}], [{2}, {0, 1}]], m=3)
    reduced, mapping = dedup_candidates(e)
    assert reduced.m == 2
    lifted = mapping.lift_outcome(Outcome((0, 0)))
    assert lifted == Outcome((0, 0))
    # candidate 1 is a duplicate of 0 in both rounds
    assert mapping.lower_outcome(Outcome((1, 1))) == Outcome((0, 0))


def test_dedup_identity_on_separated_election():
    e = Election.from_lists([[{0}, {1}], [{1}, {0}]])
    reduced, mapping = dedup_candidates(e)
    assert reduced == e
    assert mapping.lift_outcome(Outcome((1, 0))) == Outcome((1, 0))


@given(election_outcomes(max_m=4))
def test_dedup_lift_preserves_satisfaction(eo):
    e, o = eo
    reduced, mapping = dedup_candidates(e)
    lowered = mapping.lower_outcome(o)
    assert satisfactions(reduced, lowered) == satisfactions(e, o)
    assert satisfactions(e, mapping.lift_outcome(lowered)) == satisfactions(e, o)
