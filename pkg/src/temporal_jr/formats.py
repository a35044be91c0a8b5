"""JSON formats for elections, outcomes and floors (1-based indices on disk)."""

from __future__ import annotations

import json
from pathlib import Path

from .election import Election, Outcome
from .errors import InputError


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{where}: expected an integer, got {value!r}")
    return value


def _list(value, where: str) -> list:
    if not isinstance(value, list):
        raise InputError(f"{where}: expected a list, got {type(value).__name__}")
    return value


def _loads(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def election_from_json(data) -> Election:
    if not isinstance(data, dict):
        raise InputError("election: expected a JSON object")
    for key in ("n", "m", "ell", "approvals"):
        if key not in data:
            raise InputError(f"election: missing key {key!r}")
    n, m, ell = (_int(data[k], f"election.{k}") for k in ("n", "m", "ell"))
    if min(n, m, ell) < 1:
        raise InputError("election: n, m and ell must be positive")
    rows = _list(data["approvals"], "approvals")
    if len(rows) != n:
        raise InputError(f"approvals: {len(rows)} voters listed, expected n={n}")
    approvals = []
    for i, row in enumerate(rows, start=1):
        row = _list(row, f"approvals[voter {i}]")
        if len(row) != ell:
            raise InputError(f"approvals[voter {i}]: {len(row)} rounds, expected ell={ell}")
        sets = []
        for t, s in enumerate(row, start=1):
            where = f"approvals[voter {i}][round {t}]"
            cands = set()
            for p in _list(s, where):
                p = _int(p, where)
                if not 1 <= p <= m:
                    raise InputError(f"{where}: candidate {p} outside 1..{m}")
                cands.add(p - 1)
            sets.append(frozenset(cands))
        approvals.append(tuple(sets))
    return Election(n, m, ell, tuple(approvals))


def election_to_json(e: Election) -> dict:
    return {
        "n": e.n,
        "m": e.m,
        "ell": e.ell,
        "approvals": [[sorted(p + 1 for p in s) for s in row] for row in e.approvals],
    }


def outcome_from_json(data, e: Election | None = None) -> Outcome:
    """Accepts ``{"choices": [...]}`` (or ``"outcome"``) or a bare list."""
    if isinstance(data, dict):
        key = "choices" if "choices" in data else "outcome" if "outcome" in data else None
        if key is None:
            raise InputError("outcome: missing key 'choices'")
        data = data[key]
    choices = _list(data, "outcome.choices")
    if e is not None and len(choices) != e.ell:
        raise InputError(f"outcome.choices: {len(choices)} entries, expected ell={e.ell}")
    out = []
    for t, p in enumerate(choices, start=1):
        p = _int(p, f"outcome.choices[round {t}]")
        if p < 1 or (e is not None and p > e.m):
            bound = f"1..{e.m}" if e is not None else ">= 1"
            raise InputError(f"outcome.choices[round {t}]: candidate {p} outside {bound}")
        out.append(p - 1)
    return Outcome(tuple(out))


def outcome_to_json(o: Outcome) -> dict:
    return {"choices": [p + 1 for p in o.choices]}


def floors_from_json(data, n: int) -> tuple[int, ...]:
    """Per-voter satisfaction floors: ``{"floors": [...]}`` or a bare list of length ``n``."""
    if isinstance(data, dict):
        if "floors" not in data:
            raise InputError("floors: missing key 'floors'")
        data = data["floors"]
    values = _list(data, "floors")
    if len(values) != n:
        raise InputError(f"floors: {len(values)} entries, expected n={n}")
    out = []
    for i, d in enumerate(values, start=1):
        d = _int(d, f"floors[voter {i}]")
        if d < 0:
            raise InputError(f"floors[voter {i}]: negative floor {d}")
        out.append(d)
    return tuple(out)


def read_json(path, what: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{what}: cannot read {path}: {exc.strerror}") from None
    return _loads(text, what)


def load_election(path) -> Election:
    return election_from_json(read_json(path, "election"))


def load_outcome(path, e: Election | None = None) -> Outcome:
    return outcome_from_json(read_json(path, "outcome"), e)


def load_floors(path, n: int) -> tuple[int, ...]:
    return floors_from_json(read_json(path, "floors"), n)


def dumps(data) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
