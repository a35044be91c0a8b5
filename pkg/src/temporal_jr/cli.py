"""Command-line interface: ``temporal-jr verify|solve|gen|reduce|selfcheck``.

Exit codes: 0 success (axiom holds), 1 axiom violated or selfcheck failure,
2 input error, 3 capacity error, 4 infeasible ILP.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formats
from .election import Axiom, AxiomSpec, Election, Outcome, Strength, satisfactions
from .errors import CapacityError, InputError, PreconditionError
from .generators import (
    ReductionBundle,
    gen_biclique_jr,
    gen_clique_wjr,
    gen_example1,
    gen_is3_wejr,
    gen_multicolored_wjr,
    gen_random,
    gen_semionline,
)
from .graphs import load_graph
from .verify import Budgets, route, run_method

EXIT_OK, EXIT_VIOLATED, EXIT_INPUT, EXIT_CAPACITY, EXIT_INFEASIBLE = 0, 1, 2, 3, 4

METHODS = ("bruteforce", "enumerative", "monotonic", "two-candidate-wjr", "two-candidate-jr")


def _emit(data, path: str | None) -> None:
    text = formats.dumps(data)
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _budgets(args) -> Budgets:
    return Budgets(max_voters=args.budget_n, max_enumeration=args.budget_enum)


def bundle_to_json(b: ReductionBundle) -> dict:
    return {
        "election": formats.election_to_json(b.election),
        "outcome": formats.outcome_to_json(b.outcome),
        "axiom": b.spec.axiom.value,
        "strength": b.spec.strength.value,
        "property": b.prop,
        "parameter": b.parameter,
        "claim": b.claim,
    }


def _load_instance(path: str) -> tuple[Election, dict | None]:
    """An election file, or a reduction bundle (then the bundle dict is returned too)."""
    data = formats.read_json(path, "election")
    if isinstance(data, dict) and "election" in data:
        return formats.election_from_json(data["election"]), data
    return formats.election_from_json(data), None


def cmd_verify(args) -> int:
    e, bundle = _load_instance(args.election)
    if args.outcome is not None:
        o = formats.load_outcome(args.outcome, e)
    elif bundle is not None and "outcome" in bundle:
        o = formats.outcome_from_json(bundle["outcome"], e)
    else:
        raise InputError("no outcome given (pass OUTCOME or a bundle file)")
    if args.axiom is not None:
        spec = AxiomSpec(Axiom(args.axiom.upper()), Strength.WEAK if args.weak else Strength.STRONG)
    elif bundle is not None:
        try:
            spec = AxiomSpec(Axiom(bundle["axiom"]), Strength(bundle["strength"]))
        except (KeyError, ValueError):
            raise InputError("bundle: missing or invalid 'axiom'/'strength'") from None
    else:
        raise InputError("--axiom is required")
    budgets = _budgets(args)
    report = route(e, o, spec, budgets) if args.method is None else run_method(args.method, e, o, spec, budgets)
    _emit(report.to_json(), args.output)
    return EXIT_OK if report.holds else EXIT_VIOLATED


def cmd_solve(args) -> int:
    from .ilp import build_model, decode, emit_lp, solve_exact
    from .rules import gcr, gcr_monotonic

    e, _ = _load_instance(args.election)
    if args.rule != "ilp" and (args.max_welfare or args.floors or args.emit_lp):
        raise InputError("--max-welfare, --floors and --emit-lp only apply to --rule ilp")
    if args.rule == "ilp":
        floors = formats.load_floors(args.floors, e.n) if args.floors else None
        model = build_model(
            e, floors, "max-welfare" if args.max_welfare else None, max_voters=args.budget_n
        )
        if args.emit_lp:
            emit_lp(model, args.emit_lp)
        sol = solve_exact(model)
        if sol.values is None:
            _emit({"status": "infeasible", "outcome": None, "welfare": None}, args.output)
            return EXIT_INFEASIBLE
        o = decode(model, sol.values)
        _emit(
            {"status": sol.status, "outcome": formats.outcome_to_json(o)["choices"], "welfare": sol.welfare},
            args.output,
        )
        return EXIT_OK
    if args.rule == "gcr":
        o, family = gcr(e, _budgets(args))
    else:
        o, family = gcr_monotonic(e)
    out = formats.outcome_to_json(o)
    out["welfare"] = sum(satisfactions(e, o))
    _emit(out, args.output)
    if args.trace:
        Path(args.trace).write_text(formats.dumps(family.to_json()), encoding="utf-8")
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.kind == "example1":
        e = gen_example1()
    elif args.kind == "semionline":
        e = gen_semionline(args.k)
    else:
        e = gen_random(args.seed, args.n, args.m, args.ell, args.density)
    _emit(formats.election_to_json(e), args.output)
    return EXIT_OK


def cmd_reduce(args) -> int:
    g = load_graph(args.graph)
    if args.kind == "clique":
        b = gen_clique_wjr(g, args.kappa)
    elif args.kind == "is3":
        b = gen_is3_wejr(g, args.kappa)
    elif args.kind == "biclique":
        b = gen_biclique_jr(g, args.kappa, nonempty_pad=args.pad, axiom=Axiom(args.axiom.upper()))
    else:
        if args.kappa is not None and g.parts is not None and args.kappa != len(g.parts):
            raise InputError(f"--kappa {args.kappa} must equal the number of parts {len(g.parts)}")
        b = gen_multicolored_wjr(g, args.kappa)
    _emit(bundle_to_json(b), args.output)
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    from .acceptance import run_all

    results = run_all(quick=args.quick, seed=args.seed, echo=print)
    failed = [r.name for r in results if not r.passed]
    if failed:
        print("selfcheck failed: " + ", ".join(failed))
        return EXIT_VIOLATED
    print(f"selfcheck passed: {len(results)} checks")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="temporal-jr", description="Justified representation in temporal approval elections."
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", metavar="PATH", help="write JSON here instead of standard output")
    common.add_argument("--budget-n", type=int, default=Budgets.max_voters,
                        help="largest n for all-groups enumeration (default %(default)s)")
    common.add_argument("--budget-enum", type=int, default=Budgets.max_enumeration,
                        help="largest m^ell*2^ell for the enumerative verifier (default %(default)s)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check an outcome against JR/PJR/EJR")
    p.add_argument("election", help="election JSON or reduction bundle JSON")
    p.add_argument("outcome", nargs="?", help="outcome JSON (optional for bundles)")
    p.add_argument("--axiom", choices=("jr", "pjr", "ejr"))
    p.add_argument("--weak", action="store_true", help="restrict to groups agreeing in every round")
    p.add_argument("--method", choices=METHODS, help="force a verifier instead of routing")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", parents=[common], help="compute an EJR outcome")
    p.add_argument("election")
    p.add_argument("--rule", choices=("gcr", "gcr-mono", "ilp"), required=True)
    p.add_argument("--max-welfare", action="store_true", help="ILP: maximize total satisfaction")
    p.add_argument("--floors", metavar="FILE", help="ILP: per-voter satisfaction floors JSON")
    p.add_argument("--emit-lp", metavar="PATH", help="ILP: also write the model as an LP file")
    p.add_argument("--trace", metavar="PATH", help="gcr: write the reserved groups here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", parents=[common], help="generate an election")
    p.add_argument("kind", choices=("example1", "semionline", "random"))
    p.add_argument("--k", type=int, default=4, help="semionline: half the number of voters")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--ell", type=int, default=4)
    p.add_argument("--density", type=float, default=0.5)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("reduce", parents=[common], help="build a hardness-reduction bundle from a graph")
    p.add_argument("kind", choices=("clique", "is3", "biclique", "mcc"))
    p.add_argument("--graph", required=True, metavar="FILE")
    p.add_argument("--kappa", type=int, help="target size (mcc: number of parts, optional)")
    p.add_argument("--pad", action="store_true", help="biclique: replace empty approvals by private candidates")
    p.add_argument("--axiom", choices=("jr", "pjr", "ejr"), default="jr", help="biclique: axiom to certify")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("selfcheck", help="run the bundled acceptance checks")
    p.add_argument("--quick", action="store_true", help="reduced sizes, a few seconds")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "reduce" and args.kind != "mcc" and args.kappa is None:
        parser.error(f"reduce {args.kind} requires --kappa")
    try:
        return args.func(args)
    except (InputError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
