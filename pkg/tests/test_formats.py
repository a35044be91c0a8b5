import json

import pytest
from hypothesis import given

from helpers import election_outcomes
from temporal_jr.election import Election, Outcome
from temporal_jr.errors import InputError
from temporal_jr.formats import (
    dumps,
    election_from_json,
    election_to_json,
    floors_from_json,
    load_election,
    load_floors,
    load_outcome,
    outcome_from_json,
    outcome_to_json,
    read_json,
)


def small():
    return Election.from_lists([[{0}, {0, 1}], [set(), {1}]])


def test_election_json_is_one_based():
    data = election_to_json(small())
    assert data == {"n": 2, "m": 2, "ell": 2, "approvals": [[[1], [1, 2]], [[], [2]]]}
    assert election_from_json(data) == small()


@given(election_outcomes())
def test_round_trips(eo):
    e, o = eo
    assert election_from_json(json.loads(dumps(election_to_json(e)))) == e
    assert outcome_from_json(json.loads(dumps(outcome_to_json(o))), e) == o


def test_outcome_variants():
    e = small()
    assert outcome_from_json([1, 2], e) == Outcome((0, 1))
    assert outcome_from_json({"outcome": [2, 2]}, e) == Outcome((1, 1))
    assert outcome_from_json({"choices": [5]}) == Outcome((4,))


@pytest.mark.parametrize(
    "data, message",
    [
        ([], "expected a JSON object"),
        ({"n": 1, "m": 1, "ell": 1}, "missing key 'approvals'"),
        ({"n": 0, "m": 1, "ell": 1, "approvals": []}, "positive"),
        ({"n": "2", "m": 1, "ell": 1, "approvals": []}, r"election\.n: expected an integer"),
        ({"n": 2, "m": 1, "ell": 1, "approvals": [[[1]]]}, "1 voters listed, expected n=2"),
        ({"n": 1, "m": 1, "ell": 2, "approvals": [[[1]]]}, r"approvals\[voter 1\]: 1 rounds"),
        ({"n": 1, "m": 2, "ell": 1, "approvals": [[[3]]]}, r"approvals\[voter 1\]\[round 1\]: candidate 3 outside 1..2"),
        ({"n": 1, "m": 2, "ell": 1, "approvals": [[[True]]]}, r"\[round 1\]: expected an integer"),
        ({"n": 1, "m": 2, "ell": 1, "approvals": [[3]]}, r"\[round 1\]: expected a list"),
    ],
)
def test_election_errors(data, message):
    with pytest.raises(InputError, match=message):
        election_from_json(data)


def test_outcome_errors():
    e = small()
    with pytest.raises(InputError, match="missing key 'choices'"):
        outcome_from_json({}, e)
    with pytest.raises(InputError, match="1 entries, expected ell=2"):
        outcome_from_json([1], e)
    with pytest.raises(InputError, match=r"round 2\]: candidate 3 outside 1..2"):
        outcome_from_json([1, 3], e)
    with pytest.raises(InputError, match="outside >= 1"):
        outcome_from_json([0])


def test_floors():
    assert floors_from_json({"floors": [0, 2]}, 2) == (0, 2)
    assert floors_from_json([1, 1], 2) == (1, 1)
    with pytest.raises(InputError, match="expected n=3"):
        floors_from_json([1, 1], 3)
    with pytest.raises(InputError, match=r"floors\[voter 2\]: negative"):
        floors_from_json([1, -1], 2)
    with pytest.raises(InputError, match="missing key"):
        floors_from_json({"d": [1]}, 1)


def test_file_loading(tmp_path):
    e = small()
    (tmp_path / "e.json").write_text(dumps(election_to_json(e)))
    (tmp_path / "o.json").write_text(dumps(outcome_to_json(Outcome((1, 0)))))
    (tmp_path / "f.json").write_text("[1, 0]")
    assert load_election(tmp_path / "e.json") == e
    assert load_outcome(tmp_path / "o.json", e) == Outcome((1, 0))
    assert load_floors(tmp_path / "f.json", 2) == (1, 0)
    (tmp_path / "bad.json").write_text('{"n": 1,\n')
    with pytest.raises(InputError, match="malformed JSON at line 2"):
        load_election(tmp_path / "bad.json")
    with pytest.raises(InputError, match="cannot read"):
        read_json(tmp_path / "missing.json", "election")


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1]}) == '{\n  "a": [\n    1\n  ],\n  "b": 1\n}\n'
