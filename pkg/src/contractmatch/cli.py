"""Command-line interface.

Exit codes: 0 when the command succeeds (or the checked property holds),
1 when a checked property fails (witnesses are printed), 2 on malformed
input, violated preconditions of an explicitly requested property, or an
exceeded enumeration budget. Output is line-oriented JSON so runs can be
diffed in CI.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import generator, model, procedure, stability, verify
from .errors import (
    BudgetExceededError,
    ContractMatchError,
    InfeasibleOutcomeError,
    PreconditionViolatedError,
)
from .model import EnumerationBudget, Outcome, money_str
from .procedure import POLICIES
from .verify import PropertyReport

BUDGET_ENV_VAR = "CONTRACTMATCH_MAX_OUTCOMES"

PROPERTY_NAMES = (
    "pairwise-efficiency",
    "disjoint-yields",
    "firm-pareto",
    "firm-optimality",
    "employment-invariance",
    "sides-opposed",
    "pair-tradeoff",
    "group-tradeoff",
)


def _jsonable(value):
    if isinstance(value, Outcome):
        return model.outcome_to_dict(value)
    if isinstance(value, model.Allocation):
        return {str(a): money_str(v) for a, v in value.payments}
    if isinstance(value, Fraction):
        return money_str(value)
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(_jsonable(v) for v in value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


def _print_json(data) -> None:
    print(json.dumps(_jsonable(data), sort_keys=True))


def _budget(args) -> EnumerationBudget:
    if getattr(args, "max", None) is not None:
        return EnumerationBudget(args.max)
    env = os.environ.get(BUDGET_ENV_VAR)
    if env:
        return EnumerationBudget(int(env))
    return EnumerationBudget()


def _cmd_solve(args) -> int:
    inst = model.read_instance_file(args.instance)
    if args.all_tiebreaks:
        for outcome in procedure.enumerate_procedure_outcomes(inst, _budget(args)):
            _print_json(model.outcome_to_dict(outcome))
        return 0
    outcome, trace = procedure.run_procedure(inst, POLICIES[args.policy])
    _print_json(model.outcome_to_dict(outcome))
    if args.trace:
        for step in trace.steps:
            _print_json(procedure.trace_step_to_dict(step))
    return 0


def _cmd_check(args) -> int:
    inst = model.read_instance_file(args.instance)
    outcome = model.read_outcome_file(args.outcome)
    certificates = stability.blocking_coalitions(inst, outcome)
    _print_json({"stable": not certificates})
    for cert in certificates:
        _print_json({"coalition": list(cert.coalition), "contract": cert.allocation})
    return 0 if not certificates else 1


def _cmd_core(args) -> int:
    inst = model.read_instance_file(args.instance)
    core = stability.enumerate_core(inst, _budget(args))
    for outcome in core:
        _print_json(model.outcome_to_dict(outcome))
    _print_json({"count": len(core)})
    return 0


def _stable_pairs(inst, budget, cap=6):
    core = stability.enumerate_core(inst, budget)[:cap]
    return [(o1, o2) for o1 in core for o2 in core if o1 != o2]


def _run_property(name: str, inst, budget) -> PropertyReport:
    if name == "pairwise-efficiency":
        return verify.is_pairwise_efficient(inst)
    if name == "disjoint-yields":
        return verify.has_disjoint_yields(inst)
    if name == "firm-pareto":
        witnesses = []
        for outcome in procedure.enumerate_procedure_outcomes(inst, budget):
            report = verify.is_weakly_pareto_optimal_for_firms(inst, outcome, budget)
            if not report.holds:
                witnesses.append((outcome,) + report.witnesses)
        return PropertyReport("firm-pareto", not witnesses, tuple(witnesses))
    if name == "firm-optimality":
        if not verify.is_pairwise_efficient(inst).holds:
            raise PreconditionViolatedError("pairwise-efficiency")
        if not verify.has_disjoint_yields(inst).holds:
            raise PreconditionViolatedError("disjoint-yields")
        outcomes = procedure.enumerate_procedure_outcomes(inst, budget)
        if len(outcomes) != 1:
            return PropertyReport(
                "firm-optimality", False, tuple(outcomes), {"reason": "not a singleton"}
            )
        report = verify.check_firm_optimality(inst, outcomes[0], budget)
        return PropertyReport("firm-optimality", report.holds, report.witnesses)
    if name == "employment-invariance":
        return verify.check_employment_invariance(inst, budget)
    if name == "sides-opposed":
        witnesses = []
        for o1, o2 in _stable_pairs(inst, budget):
            report = verify.check_sides_opposed(inst, o1, o2)
            if not report.holds:
                witnesses.append((o1, o2) + report.witnesses)
        return PropertyReport("sides-opposed", not witnesses, tuple(witnesses))
    if name == "pair-tradeoff":
        witnesses = []
        for o1, o2 in _stable_pairs(inst, budget):
            report = verify.check_pair_tradeoff(inst, o1, o2)
            if not report.holds:
                witnesses.append((o1, o2) + report.witnesses)
        return PropertyReport("pair-tradeoff", not witnesses, tuple(witnesses))
    if name == "group-tradeoff":
        witnesses = []
        checked = 0
        outcomes = model.enumerate_outcomes(inst, budget)[:8]
        core = stability.enumerate_core(inst, budget)[:4]
        for o in outcomes:
            vo = o.payoff_map()
            for s in core:
                vs = s.payoff_map()
                group = [a for a in inst.agents if vs[a] > vo[a]]
                if not group:
                    continue
                try:
                    report = verify.check_group_tradeoff(inst, o, s, group)
                except PreconditionViolatedError:
                    continue
                checked += 1
                if not report.holds:
                    witnesses.append((o, s, tuple(group)) + report.witnesses)
        return PropertyReport(
            "group-tradeoff", not witnesses, tuple(witnesses), {"samples": checked}
        )
    raise ContractMatchError(f"unknown property {name!r}")


def _cmd_verify(args) -> int:
    inst = model.read_instance_file(args.instance)
    budget = _budget(args)
    explicit = args.properties is not None
    names = args.properties.split(",") if explicit else list(PROPERTY_NAMES)
    exit_code = 0
    for name in names:
        name = name.strip()
        if name not in PROPERTY_NAMES:
            print(f"error: unknown property {name!r}", file=sys.stderr)
            return 2
        try:
            report = _run_property(name, inst, budget)
        except (PreconditionViolatedError, ContractMatchError) as exc:
            if explicit:
                print(f"error: {name}: {exc}", file=sys.stderr)
                return 2
            _print_json({"property": name, "skipped": str(exc)})
            continue
        record = {"property": name, "holds": report.holds, "witnesses": report.witnesses}
        if report.details:
            record["details"] = report.details
        _print_json(record)
        if not report.holds:
            exit_code = 1
    return exit_code


def _cmd_gen(args) -> int:
    params = generator.GenParams(
        n_firms=args.firms,
        n_workers=args.workers,
        contracts_per_pair=(args.min_contracts, args.max_contracts),
        value_range=(args.min_value, args.max_value),
        menu_density=args.density,
        force_pairwise_efficient=args.pairwise_efficient,
        force_disjoint_yields=args.disjoint_yields,
        seed=args.seed,
    )
    inst = generator.gen_random(params)
    print(json.dumps(model.instance_to_dict(inst), indent=2, sort_keys=True))
    return 0


def _cmd_example(args) -> int:
    inst = generator.builtin(args.name)
    print(json.dumps(model.instance_to_dict(inst), indent=2, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contractmatch",
        description="Solve and verify two-sided contract-menu matching problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the firm-proposing procedure")
    p.add_argument("instance")
    p.add_argument("--policy", choices=sorted(POLICIES), default="default")
    p.add_argument("--trace", action="store_true", help="append one record per stage")
    p.add_argument(
        "--all-tiebreaks",
        action="store_true",
        help="print every outcome reachable under some tie resolution",
    )
    p.add_argument("--max", type=int, help="enumeration budget")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("check", help="test an outcome for stability")
    p.add_argument("instance")
    p.add_argument("outcome")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("core", help="enumerate all stable outcomes")
    p.add_argument("instance")
    p.add_argument("--max", type=int, help="enumeration budget")
    p.set_defaults(func=_cmd_core)

    p = sub.add_parser("verify", help="run property checkers")
    p.add_argument("instance")
    p.add_argument(
        "--properties",
        help="comma-separated list; default runs all, skipping those whose "
        "preconditions fail (explicitly requested ones exit 2 instead)",
    )
    p.add_argument("--max", type=int, help="enumeration budget")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("gen", help="generate a seeded random instance")
    p.add_argument("--firms", type=int, default=3)
    p.add_argument("--workers", type=int, default=3)
    p.add_argument("--min-contracts", type=int, default=1)
    p.add_argument("--max-contracts", type=int, default=3)
    p.add_argument("--min-value", type=int, default=0)
    p.add_argument("--max-value", type=int, default=5)
    p.add_argument("--density", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pairwise-efficient", action="store_true")
    p.add_argument("--disjoint-yields", action="store_true")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("example", help="print a builtin instance")
    p.add_argument("name", choices=generator.BUILTIN_NAMES)
    p.set_defaults(func=_cmd_example)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BudgetExceededError, InfeasibleOutcomeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ContractMatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
