"""Command line interface: ``ccra <verb> [options]``.

Exit codes: 0 success (or feasible), 3 infeasible, 2 any error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import CCRAError, InvalidInstance
from .model import apply_redirections, instance_from_dict, instance_to_dict
from .preprocess import add_virtual_actives
from .reductions import (
    HS_VARIANTS,
    VC_VARIANTS,
    CubicGraph,
    SetSystem,
    forward_certificate,
    reduce_hitting_set,
    reduce_vertex_cover,
)
from .solvers import Solution, solve
from .tally import evaluate, is_unique_winner, unique_winner
from .toolkit import GenConfig, bench, gen_random
from .unravel import unravel

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE = 0, 2, 3


class UsageError(Exception):
    pass


def _read_json(args) -> object:
    text = sys.stdin.read() if args.input in (None, "-") else open(args.input, encoding="utf-8").read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"input is not valid JSON: {exc}") from exc


def _write(args, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2) + "\n"
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _scores(instance, scores) -> dict:
    return {instance.candidates[c]: s for c, s in enumerate(scores)}


def _solution_payload(instance, solution: Solution | None) -> dict:
    if solution is None:
        return {"feasible": False, "cost": None, "redirections": [], "scores_after": None}
    return {
        "feasible": True,
        "cost": solution.total_cost,
        "redirections": solution.redirection_dicts(instance),
        "scores_after": _scores(instance, solution.resulting_scores),
    }


def cmd_validate(args) -> int:
    try:
        inst = instance_from_dict(_read_json(args))
    except InvalidInstance as exc:
        _write(args, {"valid": False, "violations": [{"code": v.code, "message": v.message} for v in exc.violations]})
        return EXIT_ERROR
    _write(args, {"valid": True, "stats": inst.stats.as_dict()})
    return EXIT_OK


def cmd_unravel(args) -> int:
    inst = instance_from_dict(_read_json(args))
    _write(args, {"rule": inst.rule, **unravel(inst).to_dict(inst)})
    return EXIT_OK


def cmd_tally(args) -> int:
    inst = instance_from_dict(_read_json(args))
    board = evaluate(inst)
    winner = unique_winner(board)
    _write(
        args,
        {
            "scores": _scores(inst, board.scores),
            "unique_winner": None if winner is None else inst.candidates[winner],
            "preferred_wins": is_unique_winner(board, inst.preferred),
        },
    )
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = instance_from_dict(_read_json(args))
    if args.preprocess:
        inst = add_virtual_actives(inst)
    targets = None
    if args.targets:
        names = [t.strip() for t in args.targets.split(",") if t.strip()]
        unknown = [t for t in names if t not in inst.voter_index]
        if unknown:
            raise UsageError(f"unknown target voters: {', '.join(unknown)}")
        targets = [inst.voter_index[t] for t in names]
    epsilon = Fraction(args.epsilon) if args.epsilon is not None else None
    solution, report = solve(inst, args.algo, epsilon=epsilon, targets=targets)
    payload = _solution_payload(inst, solution)
    payload["algo"] = report.algo
    payload["stats"] = dict(report.stats, wall_time=round(report.wall_time, 6))
    if args.preprocess:
        payload["instance"] = instance_to_dict(inst)
    _write(args, payload)
    return EXIT_OK if solution is not None else EXIT_INFEASIBLE


def cmd_reduce(args) -> int:
    raw = _read_json(args)
    if args.kind == "vc":
        if args.k is None:
            raise UsageError("reduce vc needs --k")
        inst, cert = reduce_vertex_cover(CubicGraph.from_dict(raw), args.k, args.variant or "multi_a")
    else:
        if args.k is not None:
            raw = dict(raw, k=args.k)
        inst, cert = reduce_hitting_set(SetSystem.from_dict(raw), (args.variant or "multi").replace("-", "_"))
    payload = instance_to_dict(inst)
    if args.certificate:
        payload = {"instance": payload, "certificate": cert.ids()}
    _write(args, payload)
    return EXIT_OK


def cmd_certify(args) -> int:
    raw = _read_json(args)
    cover = [c.strip() for c in args.cover.split(",") if c.strip()]
    if "edges" in raw:
        if args.k is None:
            raise UsageError("certify on a graph needs --k")
        inst, cert = reduce_vertex_cover(CubicGraph.from_dict(raw), args.k, args.variant or "multi_a")
    else:
        if args.k is not None:
            raw = dict(raw, k=args.k)
        inst, cert = reduce_hitting_set(SetSystem.from_dict(raw), (args.variant or "multi").replace("-", "_"))
    redirections = forward_certificate(cert, cover)
    after = apply_redirections(inst, redirections, enforce_budget=True)
    board = evaluate(after)
    wins = is_unique_winner(board, inst.preferred)
    _write(
        args,
        {
            "budget": inst.budget,
            "cost": inst.redirection_cost(redirections),
            "redirections": [
                {"from": inst.voters[r.source], "old_to": inst.voters[r.old_target], "new_to": inst.voters[r.new_target]}
                for r in redirections
            ],
            "scores_after": _scores(inst, board.scores),
            "preferred_wins": wins,
        },
    )
    return EXIT_OK if wins else EXIT_INFEASIBLE


def cmd_gen(args) -> int:
    budget = Fraction(args.budget) if "/" in args.budget or "." in args.budget else int(args.budget)
    cfg = GenConfig(
        n=args.n,
        m=args.m,
        max_out_degree=args.max_out,
        max_ballot_size=args.max_ballot,
        max_cost=args.max_cost,
        budget=budget,
        seed=args.seed,
        rule=args.rule,
        max_active=args.max_active,
        special=args.special,
    )
    _write(args, instance_to_dict(gen_random(cfg)))
    return EXIT_OK


def cmd_bench(args) -> int:
    raw = _read_json(args)
    entries = raw["suite"] if isinstance(raw, dict) else raw
    suite = []
    for entry in entries:
        eps = entry.get("epsilon")
        suite.append((instance_from_dict(entry["instance"]), entry.get("algo", "auto"), None if eps is None else Fraction(str(eps))))
    _write(args, bench(suite, oracle=args.oracle))
    return EXIT_OK


def _global_flags(parser, *, suppress: bool = False) -> None:
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--input", "-i", default=default(None), help="input file (default: stdin)")
    parser.add_argument("--output", "-o", default=default(None), help="output file (default: stdout)")
    parser.add_argument("--seed", type=int, default=default(0), help="random seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ccra", description="Control by redirecting delegation arcs.")
    _global_flags(parser)
    # repeated after the verb too; SUPPRESS keeps the top-level values unless overridden
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", parents=[common], help="validate an instance").set_defaults(func=cmd_validate)
    sub.add_parser("unravel", parents=[common], help="resolve every voter's ballot").set_defaults(func=cmd_unravel)
    sub.add_parser("tally", parents=[common], help="approval scores and winner").set_defaults(func=cmd_tally)

    p = sub.add_parser("solve", parents=[common], help="find a cheapest successful redirection set")
    p.add_argument("--algo", default="auto", choices=["auto", "brute", "tree-dp", "xp", "fptas"])
    p.add_argument("--epsilon", help="approximation parameter in (0, 1], e.g. 0.5 or 1/4")
    p.add_argument("--preprocess", action="store_true", help="add virtual active voters first")
    p.add_argument("--targets", help="comma-separated voters allowed as new targets (brute force only)")
    p.set_defaults(func=cmd_solve)

    variants = sorted({v.replace("_", "-") for v in VC_VARIANTS} | set(HS_VARIANTS))
    p = sub.add_parser("reduce", parents=[common], help="build a hardness gadget instance")
    p.add_argument("kind", choices=["vc", "hs"])
    p.add_argument("--variant", choices=variants)
    p.add_argument("--k", type=int, help="budget (vertex cover) or threshold override (hitting set)")
    p.add_argument("--certificate", action="store_true", help="also emit the gadget id scheme")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("certify", parents=[common], help="map a cover forward and check the outcome")
    p.add_argument("--cover", required=True, help="comma-separated cover vertices or elements")
    p.add_argument("--variant", choices=variants)
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("gen", parents=[common], help="generate a random instance")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--max-out", type=int, default=1)
    p.add_argument("--max-ballot", type=int, default=1)
    p.add_argument("--max-cost", type=int, default=1)
    p.add_argument("--budget", default="0", help="integer, or fraction of total arc cost such as 1/2")
    p.add_argument("--max-active", type=int)
    p.add_argument("--rule", default="union")
    p.add_argument("--special", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", parents=[common], help="run a suite and print CSV")
    p.add_argument("--oracle", action="store_true", help="add brute-force reference columns")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CCRAError as exc:
        payload = {"error": exc.code, "message": str(exc)}
        if isinstance(exc, InvalidInstance):
            payload["violations"] = [{"code": v.code, "message": v.message} for v in exc.violations]
        print(json.dumps(payload), file=sys.stderr)
        return EXIT_ERROR
    except (UsageError, ValueError, KeyError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
