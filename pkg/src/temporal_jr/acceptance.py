"""Acceptance checks shared by ``temporal-jr selfcheck`` and the test suite.

Each check returns a :class:`CheckResult`; ``quick=True`` shrinks the sweeps
so the whole set finishes in a few seconds.
"""

from __future__ import annotations

import hashlib
import os
import random
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass
from itertools import combinations, product
from pathlib import Path
from typing import Callable, Iterator

from .election import ALL_SPECS, Axiom, AxiomSpec, Election, Outcome, satisfactions
from .generators import (
    gen_biclique_jr,
    gen_clique_wjr,
    gen_example1,
    gen_is3_wejr,
    gen_multicolored_wjr,
    gen_semionline,
)
from .graphs import Graph, graph_oracle
from .ilp import build_model, decode, solve_exact
from .rules import gcr, gcr_monotonic, semionline_impossibility_check
from .verify import (
    applicable_methods,
    route,
    run_method,
    verify_bruteforce,
    verify_jr_alt_demand,
)

EJR = AxiomSpec(Axiom.EJR)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float
    limit: float | None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        limit = f" (limit {self.limit:g}s)" if self.limit is not None else ""
        return f"{status} {self.name}: {self.detail} [{self.seconds:.1f}s{limit}]"


def _timed(name: str, limit: float | None, body: Callable[[], tuple[bool, str]]) -> CheckResult:
    start = time.perf_counter()
    ok, detail = body()
    elapsed = time.perf_counter() - start
    if limit is not None and elapsed > limit:
        ok, detail = False, f"{detail}; over time limit"
    return CheckResult(name, ok, detail, elapsed, limit)


# ---------------------------------------------------------------- instances


def all_elections(n: int, m: int, ell: int) -> Iterator[Election]:
    """Every approval assignment for the given dimensions."""
    subsets = [frozenset(p for p in range(m) if code >> p & 1) for code in range(1 << m)]
    for rows in product(product(subsets, repeat=ell), repeat=n):
        yield Election(n, m, ell, rows)


def random_election(rng: random.Random, n: int, m: int, ell: int, density: float) -> Election:
    rows = [[frozenset(p for p in range(m) if rng.random() < density) for _ in range(ell)] for _ in range(n)]
    return Election(n, m, ell, tuple(tuple(r) for r in rows))


def random_monotonic(rng: random.Random, n: int, m: int, ell: int, density: float) -> Election:
    """Approvals that only grow: each voter adds candidates round by round."""
    rows = []
    for _ in range(n):
        current: set[int] = set()
        row = []
        for _ in range(ell):
            current |= {p for p in range(m) if rng.random() < density / 2}
            row.append(frozenset(current))
        rows.append(tuple(row))
    return Election(n, m, ell, tuple(rows))


def random_two_candidate(rng: random.Random, n: int, m: int, ell: int, nonempty: bool) -> tuple[Election, Outcome]:
    """At most two candidates matter per round; the outcome picks one of them."""
    pairs = [rng.sample(range(m), 2) if m >= 2 else [0, 0] for _ in range(ell)]
    options = [[{a}, {b}, {a, b}] + ([] if nonempty else [set()]) for a, b in pairs]
    rows = [tuple(frozenset(rng.choice(options[t])) for t in range(ell)) for _ in range(n)]
    o = Outcome(tuple(rng.choice(pairs[t]) for t in range(ell)))
    return Election(n, m, ell, tuple(rows)), o


def sample_instance(rng: random.Random, k: int, max_n=6, max_m=4, max_ell=5) -> tuple[Election, Outcome]:
    """Cycle through plain, monotonic and two-candidate instances."""
    n, m, ell = rng.randint(1, max_n), rng.randint(1, max_m), rng.randint(1, max_ell)
    kind = k % 4
    if kind >= 2 and m >= 2:
        return random_two_candidate(rng, n, m, ell, nonempty=kind == 3)
    density = rng.choice((0.25, 0.5, 0.75))
    e = random_monotonic(rng, n, m, ell, density) if kind == 1 else random_election(rng, n, m, ell, density)
    return e, Outcome(tuple(rng.randrange(m) for _ in range(ell)))


# ---------------------------------------------------------------- checks


def _agree(e: Election, o: Outcome) -> tuple[int, str | None]:
    """Compare every applicable structured verifier with brute force on all specs."""
    compared = 0
    for spec in ALL_SPECS:
        ref = verify_bruteforce(e, o, spec).holds
        for method in applicable_methods(e, o, spec):
            if method == "bruteforce":
                continue
            compared += 1
            if run_method(method, e, o, spec).holds != ref:
                return compared, f"{method} disagrees on {spec} for {e} / {o}"
    return compared, None


def check_oracle_sweep(quick: bool = False, seed: int = 0) -> CheckResult:
    dims = [(n, m, ell) for n in range(1, 5) for m in range(1, 3) for ell in range(1, 3)]
    if quick:
        dims = [d for d in dims if d[0] * d[1] * d[2] <= 8]
    samples = 100 if quick else 1000

    def body():
        compared = elections = 0
        for n, m, ell in dims:
            outcomes = [Outcome(c) for c in product(range(m), repeat=ell)]
            for e in all_elections(n, m, ell):
                elections += 1
                for o in outcomes:
                    c, err = _agree(e, o)
                    compared += c
                    if err:
                        return False, err
        rng = random.Random(seed)
        for k in range(samples):
            e, o = sample_instance(rng, k)
            c, err = _agree(e, o)
            compared += c
            if err:
                return False, err
        return True, f"{elections} exhaustive + {samples} random elections, {compared} comparisons agree"

    return _timed("oracle-equivalence sweep", 60, body)


def check_gcr(quick: bool = False, seed: int = 0) -> CheckResult:
    count = 50 if quick else 500

    def body():
        rng = random.Random(seed)
        for _ in range(count):
            n, m, ell = rng.randint(1, 6), rng.randint(1, 4), rng.randint(1, 5)
            e = random_election(rng, n, m, ell, rng.choice((0.25, 0.5, 0.75)))
            if not verify_bruteforce(e, gcr(e)[0], EJR).holds:
                return False, f"gcr output fails EJR on {e}"
        for _ in range(count):
            n, m, ell = rng.randint(1, 6), rng.randint(1, 4), rng.randint(1, 5)
            e = random_monotonic(rng, n, m, ell, rng.choice((0.25, 0.5, 0.75)))
            if not verify_bruteforce(e, gcr_monotonic(e)[0], EJR).holds:
                return False, f"gcr_monotonic output fails EJR on {e}"
        return True, f"gcr {count}/{count}, gcr_monotonic {count}/{count} pass EJR"

    return _timed("GCR soundness", 60, body)


def best_ejr_welfare(e: Election) -> int:
    """Largest welfare among EJR outcomes, by exhaustive outcome search."""
    best = -1
    for c in product(range(e.m), repeat=e.ell):
        o = Outcome(c)
        w = sum(satisfactions(e, o))
        if w > best and verify_bruteforce(e, o, EJR).holds:
            best = w
    return best


def check_ilp(quick: bool = False, seed: int = 0) -> CheckResult:
    count = 20 if quick else 200

    def body():
        rng = random.Random(seed)
        confirmed = 0
        for _ in range(count):
            n, m, ell = rng.randint(1, 5), rng.randint(1, 3), rng.randint(1, 4)
            e = random_election(rng, n, m, ell, rng.choice((0.25, 0.5, 0.75)))
            plain = build_model(e)
            sol = solve_exact(plain)
            if sol.values is None or not verify_bruteforce(e, decode(plain, sol.values), EJR).holds:
                return False, f"ILP outcome fails EJR on {e}"
            model = build_model(e, objective="max-welfare")
            sol = solve_exact(model)
            o = decode(model, sol.values)
            if not verify_bruteforce(e, o, EJR).holds or sum(satisfactions(e, o)) != sol.welfare:
                return False, f"max-welfare ILP outcome invalid on {e}"
            gcr_welfare = sum(satisfactions(e, gcr(e)[0]))
            if sol.welfare < gcr_welfare:
                return False, f"ILP welfare {sol.welfare} < gcr welfare {gcr_welfare} on {e}"
            if e.m ** e.ell <= 10**5:
                best = best_ejr_welfare(e)
                if sol.welfare != best:
                    return False, f"ILP welfare {sol.welfare} != optimum {best} on {e}"
                if gcr_welfare == best:
                    confirmed += 1
        return True, (
            f"{count}/{count} ILP outcomes pass EJR, welfare optimal and >= gcr; "
            f"equal to gcr on all {confirmed} instances where gcr is optimal"
        )

    return _timed("ILP soundness and optimality", None, body)


def all_graphs(order: int) -> Iterator[Graph]:
    pairs = list(combinations(range(order), 2))
    for code in range(1 << len(pairs)):
        yield Graph(order, frozenset(p for k, p in enumerate(pairs) if code >> k & 1))


def all_multipartite(sizes) -> Iterator[Graph]:
    probe = Graph.with_part_sizes(sizes, ())
    where = {v: j for j, part in enumerate(probe.parts) for v in part}
    pairs = [(u, v) for u, v in combinations(range(probe.order), 2) if where[u] != where[v]]
    for code in range(1 << len(pairs)):
        yield Graph.with_part_sizes(sizes, [p for k, p in enumerate(pairs) if code >> k & 1])


def random_degree3_graph(rng: random.Random, order: int) -> Graph:
    pairs = list(combinations(range(order), 2))
    rng.shuffle(pairs)
    density = rng.choice((0.3, 0.5, 0.8))
    degree = [0] * order
    edges = []
    for u, v in pairs:
        if degree[u] < 3 and degree[v] < 3 and rng.random() < density:
            edges.append((u, v))
            degree[u] += 1
            degree[v] += 1
    return Graph(order, frozenset(edges))


def _bundle_agrees(bundle, g: Graph) -> bool:
    violated = not route(bundle.election, bundle.outcome, bundle.spec).holds
    return violated == graph_oracle(g, bundle.prop, bundle.parameter)


def check_reductions(quick: bool = False, seed: int = 0) -> CheckResult:
    max_clique_order = 4 if quick else 5
    is3_graphs = 20 if quick else 200

    def body():
        counts = {}
        n = 0
        for order in range(1, max_clique_order + 1):
            for g in all_graphs(order):
                for kappa in range(1, order + 1):
                    n += 1
                    if not _bundle_agrees(gen_clique_wjr(g, kappa), g):
                        return False, f"clique reduction wrong for {g}, kappa={kappa}"
        counts["clique"] = n
        rng = random.Random(seed)
        n = 0
        for _ in range(is3_graphs):
            g = random_degree3_graph(rng, 7)
            for kappa in range(1, 5):
                n += 1
                if not _bundle_agrees(gen_is3_wejr(g, kappa), g):
                    return False, f"IS-3 reduction wrong for {g}, kappa={kappa}"
        counts["is3"] = n
        n = 0
        for nl, nr in product(range(1, 4), range(1, 3)):
            kappa = nl * nr
            if kappa <= nl + nr:
                continue
            for g in all_multipartite((nl, nr)):
                for pad in (False, True):
                    for axiom in Axiom:
                        n += 1
                        if not _bundle_agrees(gen_biclique_jr(g, kappa, pad, axiom), g):
                            return False, f"biclique reduction wrong for {g}, pad={pad}, {axiom}"
        counts["biclique"] = n
        n = 0
        for sizes in product((1, 2), repeat=3):
            if quick and sum(sizes) > 5:
                continue
            for g in all_multipartite(sizes):
                n += 1
                if not _bundle_agrees(gen_multicolored_wjr(g), g):
                    return False, f"multicolored reduction wrong for {g}"
        counts["multicolored"] = n
        return True, ", ".join(f"{k} {v}/{v}" for k, v in counts.items())

    return _timed("reduction equivalences", 120, body)


def check_example1(quick: bool = False, seed: int = 0) -> CheckResult:
    def body():
        e = gen_example1()
        choices = product(range(e.m), repeat=e.ell)
        if quick:
            choices = (c for k, c in enumerate(choices) if k % 10 == 0)
        total = ejr_ok = alt_ok = 0
        for c in choices:
            o = Outcome(c)
            total += 1
            ejr_ok += verify_bruteforce(e, o, EJR).holds
            alt_ok += verify_jr_alt_demand(e, o).holds
        ok = ejr_ok == total and alt_ok == 0
        return ok, f"{ejr_ok}/{total} outcomes pass EJR, {alt_ok}/{total} pass JR with decoupled demand"

    return _timed("decoupled-demand impossibility", 30, body)


def check_semionline(quick: bool = False, seed: int = 0) -> CheckResult:
    def body():
        impossible = semionline_impossibility_check(4)
        e = gen_semionline(4)
        offline = verify_bruteforce(e, gcr(e)[0], EJR).holds
        return impossible and offline, (
            f"every completion fails EJR: {impossible}; gcr outcome passes EJR: {offline}"
        )

    return _timed("semi-online impossibility", 30, body)


# ---------------------------------------------------------------- determinism


def _cli_runs(workdir: Path, seed: int) -> list[list[str]]:
    graph = workdir / "triangle.txt"
    graph.write_text("3 3\n1 2\n2 3\n1 3\n")
    floors = workdir / "floors.json"
    floors.write_text('{"floors": [1, 1, 1, 1, 1, 1, 1, 1]}\n')
    rnd = workdir / "random.json"
    semi = workdir / "semionline.json"
    ex1 = workdir / "example1.json"
    bundle = workdir / "clique.json"
    return [
        ["gen", "random", "--seed", str(seed), "--n", "5", "--m", "3", "--ell", "4", "--density", "0.5", "-o", str(rnd)],
        ["gen", "semionline", "--k", "4", "-o", str(semi)],
        ["gen", "example1", "-o", str(ex1)],
        ["reduce", "clique", "--graph", str(graph), "--kappa", "3", "-o", str(bundle)],
        ["verify", str(bundle), "--axiom", "jr", "--weak"],
        ["solve", str(rnd), "--rule", "gcr", "-o", str(workdir / "gcr.json"), "--trace", str(workdir / "trace.json")],
        ["verify", str(rnd), str(workdir / "gcr.json"), "--axiom", "ejr"],
        ["solve", str(rnd), "--rule", "ilp", "--max-welfare", "--emit-lp", str(workdir / "model.lp")],
        ["solve", str(semi), "--rule", "ilp", "--max-welfare", "--floors", str(floors)],
        ["solve", str(ex1), "--rule", "gcr-mono"],
    ]


def run_cli_digest(seed: int = 0, hash_seed: str = "0", limit: int | None = None) -> str:
    """Run a fixed batch of CLI invocations in a fresh interpreter and hash all outputs."""
    digest = hashlib.sha256()
    with tempfile.TemporaryDirectory() as tmp:
        workdir = Path(tmp)
        env = dict(os.environ, PYTHONHASHSEED=hash_seed)
        for argv in _cli_runs(workdir, seed)[:limit]:
            proc = subprocess.run(
                [sys.executable, "-m", "temporal_jr", *argv],
                capture_output=True, env=env, cwd=tmp,
            )
            digest.update(" ".join(a.replace(tmp, "$TMP") for a in argv).encode())
            digest.update(str(proc.returncode).encode())
            digest.update(proc.stdout.replace(tmp.encode(), b"$TMP"))
            for path in sorted(workdir.iterdir()):
                digest.update(path.name.encode() + path.read_bytes())
    return digest.hexdigest()


def check_determinism(quick: bool = False, seed: int = 0) -> CheckResult:
    def body():
        limit = 8 if quick else None
        first = run_cli_digest(seed, "0", limit)
        second = run_cli_digest(seed, "12345", limit)
        return first == second, f"output digest {first[:16]} {'matches' if first == second else 'differs from ' + second[:16]} on rerun"

    return _timed("deterministic CLI output", None, body)


CHECKS: tuple[Callable[..., CheckResult], ...] = (
    check_oracle_sweep,
    check_gcr,
    check_ilp,
    check_reductions,
    check_example1,
    check_semionline,
    check_determinism,
)


def run_all(quick: bool = False, seed: int = 0, echo: Callable[[str], None] | None = None) -> list[CheckResult]:
    results = []
    for check in CHECKS:
        result = check(quick=quick, seed=seed)
        results.append(result)
        if echo is not None:
            echo(result.line())
    return results
