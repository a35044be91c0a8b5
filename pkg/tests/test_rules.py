import pytest
from hypothesis import given

from helpers import elections, naive_alpha, naive_beta, naive_sat
from temporal_jr.election import Axiom, AxiomSpec, Election, Outcome, VoterGroup
from temporal_jr.errors import CapacityError, InputError, PreconditionError
from temporal_jr.generators import gen_example1, gen_random, gen_semionline
from temporal_jr.rules import (
    constant_rule,
    gcr,
    gcr_monotonic,
    greedy_plurality_rule,
    run_semionline,
    script_rule,
    semionline_impossibility_check,
)
from temporal_jr.verify import Budgets, verify_bruteforce

EJR = AxiomSpec(Axiom.EJR)


def check_family(e, o, family):
    """Stage-two guarantees: disjoint groups, sorted agreement, exact reservations."""
    seen_voters, seen_rounds = set(), set()
    betas = []
    for g in family.selected:
        members = g.group.members
        assert not seen_voters & set(members)
        seen_voters |= set(members)
        assert g.beta == naive_beta(e, members) > 0
        assert g.alpha == naive_alpha(e, members)
        assert len(g.rounds) == g.alpha
        assert not seen_rounds & set(g.rounds)
        seen_rounds |= set(g.rounds)
        for t in g.rounds:
            common = set.intersection(*(set(e.approvals[i][t]) for i in members))
            assert o.choices[t] in common
        for i in members:
            assert naive_sat(e, o, i) >= g.alpha
        betas.append(g.beta)
    assert betas == sorted(betas)


def test_gcr_forced():
    e = Election.from_lists([[{0}, {0}], [{0}, {0}]])
    o, family = gcr(e)
    assert o == Outcome((0, 0))
    assert family.selected[0].group == VoterGroup((0, 1))
    assert family.selected[0].alpha == 2


def test_gcr_example1_keeps_initialization():
    e = gen_example1()
    o, family = gcr(e)
    assert all(g.alpha == 0 for g in family.selected)
    assert o == Outcome((0, 0, 0))
    assert verify_bruteforce(e, o, EJR).holds


@given(elections(max_n=6, max_m=4, max_ell=5))
def test_gcr_provides_ejr(e):
    o, family = gcr(e)
    assert verify_bruteforce(e, o, EJR).holds
    check_family(e, o, family)


def test_gcr_cap():
    e = gen_random(0, 5, 2, 2, 0.5)
    with pytest.raises(CapacityError):
        gcr(e, Budgets(max_voters=4))


@given(elections(max_n=6, max_m=4, max_ell=5, monotonic=True))
def test_gcr_monotonic_provides_ejr(e):
    o, family = gcr_monotonic(e)
    assert verify_bruteforce(e, o, EJR).holds
    check_family(e, o, family)


@given(elections(max_n=6, max_m=4, max_ell=1))
def test_gcr_monotonic_static_preferences(e):
    static = Election(e.n, e.m, 4, tuple(row * 4 for row in e.approvals))
    o, _ = gcr_monotonic(static)
    assert verify_bruteforce(static, o, EJR).holds


def test_gcr_monotonic_single_candidate():
    e = Election.from_lists([[{0}, {0}], [set(), {0}]])
    assert gcr_monotonic(e)[0] == Outcome((0, 0))


def test_gcr_monotonic_unanimous_candidate_always_chosen():
    e = Election.from_lists([[{1}, {1, 2}, {0, 1, 2}], [{1}, {1}, {1}], [{1, 2}, {1, 2}, {1, 2}]], m=3)
    assert e.monotonic
    o, _ = gcr_monotonic(e)
    assert o == Outcome((1, 1, 1))


def test_gcr_monotonic_precondition():
    with pytest.raises(PreconditionError):
        gcr_monotonic(Election.from_lists([[{0}, set()]]))


def test_run_semionline_constant_and_script():
    e = gen_random(4, 4, 3, 5, 0.5)
    assert run_semionline(e, constant_rule(0)) == Outcome((0,) * 5)
    o, _ = gcr(e)
    assert run_semionline(e, script_rule(o.choices)) == o


def test_run_semionline_reveals_only_prefix():
    e = gen_random(5, 3, 3, 4, 0.5)
    seen = []

    def rule(ell, revealed, committed):
        assert ell == e.ell
        assert len(revealed) == len(committed) + 1
        seen.append(revealed[-1])
        return 0

    run_semionline(e, rule)
    assert seen == [tuple(e.approvals[i][t] for i in range(e.n)) for t in range(e.ell)]


def test_run_semionline_rejects_bad_choice():
    e = gen_random(5, 3, 3, 4, 0.5)
    with pytest.raises(InputError):
        run_semionline(e, constant_rule(3))


def test_greedy_plurality_on_semionline_instance():
    e = gen_semionline(4)
    o = run_semionline(e, greedy_plurality_rule(e.m))
    # rounds 1..k: every approved candidate has one approver, so the tie-break picks index 0
    assert o.choices[:4] == (0, 0, 0, 0)
    assert not verify_bruteforce(e, o, EJR).holds


def test_semionline_impossibility():
    assert semionline_impossibility_check(4)
    e = gen_semionline(4)
    o, _ = gcr(e)
    assert verify_bruteforce(e, o, EJR).holds


def test_semionline_repeated_completion_fails():
    e = gen_semionline(4)
    o = Outcome((0, 1, 2, 3, 0, 0, 0, 0))
    report = verify_bruteforce(e, o, EJR)
    assert not report.holds
    assert naive_sat(e, o, 4) >= 1
    first_half = VoterGroup((0, 1, 2, 3))
    assert naive_alpha(e, first_half.members) == 2
    assert max(naive_sat(e, o, i) for i in first_half) < 2


def test_semionline_check_k5_quick_path():
    assert semionline_impossibility_check(5, full_check=False)


def test_semionline_k_too_small():
    with pytest.raises(InputError):
        semionline_impossibility_check(3)
