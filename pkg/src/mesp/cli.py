"""Command-line entry point: ``mesp <command> ...``.

Exit status is 0 on success, 1 for invalid input (bad files, flags or
documents; unsupported instance shapes) and 2 when a computation runs out of
budget or precision.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io
from .bench import bench_suite, write_report
from .errors import (DimensionUnsupported, MespError, ParseError, UnknownSuite,
                     ValidationError)
from .exact import Objective, joint_outcome_oracle, solve_exact
from .fptas import FptasConfig, dp_min_min
from .hardness import gen_cnf_binary, gen_cnf_subset, gen_subset_sum, parse_dimacs
from .montecarlo import monte_carlo_estimate
from .zonotope import solve_maxmin_binary, solve_maxmin_subset
from .model import BinaryInstance, negate_instance

INPUT_ERRORS = (ValidationError, UnknownSuite, DimensionUnsupported)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _int_list(csv_text: str) -> list:
    try:
        return [int(x) for x in csv_text.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {csv_text!r}", "--z") \
            from None


# commands -------------------------------------------------------------------

def _solve(args):
    instance = io.parse_instance(_read(args.input))
    obj = Objective(args.objective)
    extra = {}
    if args.alg == "exact":
        res = solve_exact(instance, obj)
        sel, value = res.selection, res.value
        extra["optima_count"] = res.optima_count
    elif args.alg == "fptas":
        if obj is not Objective.MIN_MIN:
            raise ValidationError("the approximation scheme handles min-min only",
                                  "UNSUPPORTED_OBJECTIVE")
        eps = io.parse_rational(args.epsilon, "--epsilon")
        res = dp_min_min(instance, FptasConfig(eps))
        sel, value = res.selection, res.exact_value
        extra.update(epsilon=res.epsilon, ratio_bound=res.ratio_bound, gamma=res.gamma,
                     T=res.T, table_entries=res.table_entries,
                     reachable_states=res.reachable_states)
    else:
        if obj not in (Objective.MAX_MIN, Objective.MIN_MAX):
            raise ValidationError("the geometric solver handles max-min and min-max only",
                                  "UNSUPPORTED_OBJECTIVE")
        target = instance if obj is Objective.MAX_MIN else negate_instance(instance)
        solver = solve_maxmin_binary if isinstance(target, BinaryInstance) \
            else solve_maxmin_subset
        res = solver(target)
        sel = res.selection
        value = res.value if obj is Objective.MAX_MIN else -res.value
        extra["optima_count"] = res.optima_count
    doc = io.solution_to_obj(instance.kind, args.alg, obj.value, sel, value, **extra)
    _emit(io.dumps(doc), args.out)


def _generate(args):
    if args.reduction == "subset-sum":
        decision = gen_subset_sum(_int_list(args.z), args.target, args.precision)
        name = "subset-sum"
    else:
        formula = parse_dimacs(_read(args.dimacs))
        ratio = io.parse_rational(args.ratio, "--ratio")
        gen = gen_cnf_binary if args.variant == "binary" else gen_cnf_subset
        decision = gen(formula, ratio)
        name = f"cnf-{args.variant}"
    _emit(io.serialize_instance(decision.instance), args.out)
    if args.decision:
        Path(args.decision).write_text(io.serialize_decision(decision, name))


def _verify(args):
    instance = io.parse_instance(_read(args.input))
    sel = io.parse_selection(_read(args.selection))
    try:
        report = monte_carlo_estimate(instance, sel, args.trials, args.seed)
    except ValueError as exc:
        if isinstance(exc, MespError):
            raise
        raise ValidationError(str(exc), "BAD_TRIALS") from None
    _emit(io.dumps(report.to_obj()), args.out)


def _oracle(args):
    instance = io.parse_instance(_read(args.input))
    sel = io.parse_selection(_read(args.selection))
    value = joint_outcome_oracle(instance.grid, instance.selected(sel), args.aggregate)
    doc = {"format": "mesp-oracle-v1", "aggregate": args.aggregate,
           "selection": io.selection_to_obj(sel), "value": io.format_rational(value)}
    _emit(io.dumps(doc), args.out)


def _bench(args):
    report = bench_suite(args.suite)
    if args.out_dir:
        json_path, csv_path = write_report(report, args.out_dir)
        print(f"wrote {json_path} and {csv_path}", file=sys.stderr)
    sys.stdout.write(json.dumps(report) + "\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mesp", description="Expected-minimum selection solvers and generators.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="optimize a selection")
    s.add_argument("input")
    s.add_argument("--alg", choices=["exact", "fptas", "zonotope"], default="exact")
    s.add_argument("--objective", choices=[o.value for o in Objective], default="min-min")
    s.add_argument("--epsilon", default="1/10")
    s.add_argument("--out")
    s.set_defaults(run=_solve)

    g = sub.add_parser("generate", help="emit a reduction instance")
    gsub = g.add_subparsers(dest="reduction", required=True, parser_class=_Parser)
    ss = gsub.add_parser("subset-sum")
    ss.add_argument("--z", required=True, help="comma-separated nonnegative integers")
    ss.add_argument("--target", type=int, required=True)
    ss.add_argument("--precision", type=int, default=32, help="initial bits for the tails")
    cnf = gsub.add_parser("cnf")
    cnf.add_argument("--dimacs", required=True)
    cnf.add_argument("--ratio", default="2")
    cnf.add_argument("--variant", choices=["binary", "subset"], default="binary")
    for gp in (ss, cnf):
        gp.add_argument("--out")
        gp.add_argument("--decision", help="also write the decision document here")
        gp.set_defaults(run=_generate)

    v = sub.add_parser("verify", help="Monte Carlo check of a selection's expectation")
    v.add_argument("input")
    v.add_argument("--selection", required=True)
    v.add_argument("--trials", type=int, default=100_000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    v.set_defaults(run=_verify)

    o = sub.add_parser("oracle", help="expectation by enumerating joint outcomes")
    o.add_argument("input")
    o.add_argument("--selection", required=True)
    o.add_argument("--aggregate", choices=["min", "max"], default="min")
    o.add_argument("--out")
    o.set_defaults(run=_oracle)

    b = sub.add_parser("bench", help="run a scaling suite")
    b.add_argument("--suite", required=True)
    b.add_argument("--out-dir")
    b.set_defaults(run=_bench)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.run(args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MespError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
