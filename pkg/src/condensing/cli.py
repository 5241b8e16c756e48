"""Command-line front end.

Exit status is 0 on success or a passing verdict, 1 when a verdict fails
(a law is violated, a domain is not condensing, an example equality does
not hold) and 2 for usage, input and parse errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from .domains import format_domain, parse_domain
from .errors import CondensingError
from .lattice import iter_directives, parse_lattice
from .lp import (RENAME_POLICIES, EvalConfig, SemanticFunction, abstract_eval,
                 check_condensing, concrete_eval, parse_program)
from .quantale import (SampleConfig, SubstQuantale, parse_quantale,
                       verify_linear_laws, verify_quantale)
from .report import RunReport
from .scenarios import EXAMPLES
from .shells import complete_shell_run, weak_complete_shell_run
from .subst import (DEFAULT_ALPHABET, DEFAULT_MAX_CARRIER, describe_set,
                    enumerate_carrier, parse_carrier_config, tensor_sets)
from .syntax import parse_set

EXIT_OK, EXIT_VERDICT, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str, report: RunReport) -> str:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    report.add_input(os.path.basename(path), text)
    return text


def _carrier(args, report: RunReport):
    if getattr(args, "carrier", None):
        return parse_carrier_config(_read(args.carrier, report), max_size=args.max_carrier)
    a = DEFAULT_ALPHABET
    return enumerate_carrier(a.vars_of_interest, a.aux_vars, a.constants, max_size=args.max_carrier)


def _domain(spec: str, ambient, report: RunReport):
    if os.path.isfile(spec):
        return parse_domain(_read(spec, report), ambient)
    report.add_input("domain", spec)
    return parse_domain("fixpoints: " + spec, ambient)


def _is_quantale_text(text: str) -> bool:
    return any(key in ("tensor", "tensor-builtin", "unit") for _, key, _, _ in iter_directives(text))


def _verify_q(report: RunReport, label: str, Q, cfg: SampleConfig):
    qv = verify_quantale(Q, cfg)
    for v in qv:
        report.add_law(f"{label} quantale", v, Q.ambient)
    if qv:
        report.add(f"{label}.linear_laws", "skipped (quantale laws fail)")
        return
    for v in verify_linear_laws(Q, cfg):
        report.add_law(f"{label} linear", v, Q.ambient)


def cmd_verify(args, report: RunReport) -> RunReport:
    cfg = SampleConfig(k=args.samples, seed=args.seed)
    if not args.paths and not args.subst:
        raise UsageError("verify needs at least one file or --subst")
    for path in args.paths:
        text = _read(path, report)
        label = os.path.basename(path)
        if _is_quantale_text(text):
            Q = parse_quantale(text)
            report.add(f"{label}.kind", "quantale")
            report.add(f"{label}.size", len(Q.lattice))
            _verify_q(report, label, Q, cfg)
        else:
            L = parse_lattice(text)
            report.add(f"{label}.kind", "lattice")
            report.add(f"{label}.size", len(L))
    if args.subst:
        Q = SubstQuantale(_carrier(args, report))
        report.add("subst.carrier", Q.carrier.n)
        report.add("subst.samples", len(Q.sample(k=cfg.k, seed=cfg.seed)))
        _verify_q(report, "subst", Q, cfg)
    report.add("violations", len(report.laws))
    return report


def _ambient_and_quantale(args, report: RunReport):
    if getattr(args, "quantale", None):
        Q = parse_quantale(_read(args.quantale, report))
    else:
        Q = SubstQuantale(_carrier(args, report))
    return Q


def cmd_shell(args, report: RunReport) -> RunReport:
    Q = _ambient_and_quantale(args, report)
    A = _domain(args.domain, Q.ambient, report)
    report.add_domain("input", A)
    if args.mode == "complete":
        run = complete_shell_run(Q, A, cap=args.iteration_cap)
    else:
        run = weak_complete_shell_run(Q, A, cap=args.iteration_cap)
    report.add("mode", args.mode)
    report.add_domain("shell", run.domain)
    report.add("iterations", run.iterations)
    report.add("stabilized_at", run.stabilized_at)
    report.add("text", format_domain(run.domain).strip())
    return report


def _program(args, report: RunReport, carrier):
    prog = parse_program(_read(args.program, report), carrier)
    if not prog.clauses:
        raise UsageError("the program has no clauses")
    goal = args.goal or next(iter(prog.clauses))
    if goal not in prog:
        raise UsageError(f"goal {goal!r} is not declared in the program")
    return prog, goal


def _report_condensing(report: RunReport, prefix: str, v, ambient):
    report.add(f"{prefix}.verdict", "condensing" if v else "NOT condensing")
    if not v:
        report.add(f"{prefix}.witness", f"({ambient.name(v.theta)}, {ambient.name(v.phi)})")
        report.add(f"{prefix}.sides", f"{ambient.name(v.lhs)} vs {ambient.name(v.rhs)}")


def cmd_condense(args, report: RunReport) -> RunReport:
    carrier = _carrier(args, report)
    config = EvalConfig(carrier, args.rename, args.iteration_cap)
    prog, goal = _program(args, report, carrier)
    rho = _domain(args.domain, carrier.powerset, report)
    amb = carrier.powerset
    report.add("goal", goal)
    report.add_domain("domain", rho)
    v = check_condensing(prog, rho, goal, config)
    _report_condensing(report, "before", v, amb)
    final = v
    if args.refine:
        Q = SubstQuantale(carrier)
        shell = weak_complete_shell_run(Q, rho, cap=args.iteration_cap).domain
        report.add_domain("refined", shell)
        final = check_condensing(prog, shell, goal, config)
        _report_condensing(report, "after", final, amb)
        if not v:
            # the refined domain keeps every old fixpoint, so the old witness is still a pair of fixpoints
            F = SemanticFunction(prog, shell, goal, config)
            lhs = F(shell(tensor_sets(v.theta, v.phi)))
            rhs = shell(tensor_sets(v.theta, F(v.phi)))
            report.add("after.at_former_witness", f"{amb.name(lhs)} vs {amb.name(rhs)}")
    if not final:
        report.status = "fail"
    return report


def cmd_eval(args, report: RunReport) -> RunReport:
    carrier = _carrier(args, report)
    config = EvalConfig(carrier, args.rename, args.iteration_cap)
    prog, goal = _program(args, report, carrier)
    report.add_input("phi", args.phi)
    phi = parse_set(args.phi, carrier)
    report.add("goal", goal)
    report.add("phi", describe_set(phi))
    if args.domain:
        rho = _domain(args.domain, carrier.powerset, report)
        start = rho(phi)
        report.add("start", describe_set(start))
        out = abstract_eval(prog, rho, goal, start, config)
        report.add("abstract", describe_set(out))
    else:
        out = concrete_eval(prog, goal, phi, config)
        report.add("concrete", describe_set(out))
    return report


def cmd_residual(args, report: RunReport) -> RunReport:
    Q = _ambient_and_quantale(args, report)
    report.add_input("args", f"{args.a}\0{args.c}")
    if getattr(args, "quantale", None):
        L = Q.ambient
        for x in (args.a, args.c):
            if x not in L:
                raise UsageError(f"{x!r} is not an element of the quantale")
        a, c = args.a, args.c
    else:
        a, c = parse_set(args.a, Q.carrier), parse_set(args.c, Q.carrier)
    r = Q.residual(a, c)
    report.add("a", Q.ambient.name(a))
    report.add("c", Q.ambient.name(c))
    report.add("residual", Q.ambient.name(r))
    return report


def cmd_example(args, report: RunReport) -> RunReport:
    if args.name not in EXAMPLES:
        raise UsageError(f"unknown example {args.name!r}; choose from {', '.join(EXAMPLES)}")
    carrier = _carrier(args, report)
    config = EvalConfig(carrier, "literal", args.iteration_cap)
    return EXAMPLES[args.name](report, carrier, config)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="sampler seed (default 0)")
    common.add_argument("--max-carrier", type=int, default=argparse.SUPPRESS,
                        help=f"carrier size cap (default {DEFAULT_MAX_CARRIER})")
    common.add_argument("--iteration-cap", type=int, default=argparse.SUPPRESS,
                        help="fixpoint iteration cap (default 10000)")
    common.add_argument("--format", choices=("human", "kv"), default=argparse.SUPPRESS,
                        help="output format (default human)")

    p = argparse.ArgumentParser(prog="condensing", parents=[common],
                                description="Quantales, closure domains, shells and condensing checks.")
    sub = p.add_subparsers(dest="cmd", required=True, metavar="COMMAND")

    def carrier_opt(sp):
        sp.add_argument("--carrier", help="carrier configuration file (default: X Y / Z W / a)")

    sp = sub.add_parser("verify", parents=[common], help="check lattice, quantale and linear-implication laws")
    sp.add_argument("paths", nargs="*", help="lattice or quantale files")
    sp.add_argument("--subst", action="store_true", help="also check the substitution quantale")
    sp.add_argument("--samples", type=int, default=64, help="random sets for the substitution sampler")
    carrier_opt(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("shell", parents=[common], help="complete or weak-complete shell of a domain")
    sp.add_argument("--quantale", help="explicit quantale file (default: substitution quantale)")
    carrier_opt(sp)
    sp.add_argument("--domain", required=True, help="domain file or fixpoint listing")
    sp.add_argument("--mode", choices=("complete", "weak"), default="weak")
    sp.set_defaults(func=cmd_shell)

    sp = sub.add_parser("condense", parents=[common], help="check whether a domain is condensing for a program")
    sp.add_argument("program")
    carrier_opt(sp)
    sp.add_argument("--domain", required=True, help="domain file or fixpoint listing")
    sp.add_argument("--goal", help="goal predicate (default: first clause)")
    sp.add_argument("--refine", action="store_true", help="refine with the weak-complete shell and re-check")
    sp.add_argument("--rename", choices=RENAME_POLICIES, default="literal")
    sp.set_defaults(func=cmd_condense)

    sp = sub.add_parser("eval", parents=[common], help="concrete or abstract evaluation of a goal")
    sp.add_argument("program")
    carrier_opt(sp)
    sp.add_argument("--phi", required=True, help="initial set expression")
    sp.add_argument("--domain", help="evaluate abstractly over this domain")
    sp.add_argument("--goal")
    sp.add_argument("--rename", choices=RENAME_POLICIES, default="literal")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("residual", parents=[common], help="print a -o c")
    sp.add_argument("a")
    sp.add_argument("c")
    sp.add_argument("--quantale", help="explicit quantale file (default: substitution quantale)")
    carrier_opt(sp)
    sp.set_defaults(func=cmd_residual)

    sp = sub.add_parser("example", parents=[common], help="run a built-in worked example")
    sp.add_argument("name", help="4.2 or 4.9")
    carrier_opt(sp)
    sp.set_defaults(func=cmd_example)
    return p


DEFAULTS = {"seed": 0, "max_carrier": DEFAULT_MAX_CARRIER, "iteration_cap": 10000, "format": "human"}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    for k, v in DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    report = RunReport(argv)
    try:
        if args.iteration_cap < 1 or args.max_carrier < 1:
            raise UsageError("caps must be positive")
        args.func(args, report)
    except (UsageError, CondensingError, OSError) as exc:
        print(f"condensing: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(report.render(args.format))
    return EXIT_OK if report.status == "pass" else EXIT_VERDICT


if __name__ == "__main__":
    sys.exit(main())
