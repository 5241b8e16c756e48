"""The two worked pair-sharing examples as runnable scenarios."""

from __future__ import annotations

from .domains import moore_closure
from .lp import (EvalConfig, SemanticFunction, abstract_eval, check_condensing,
                 concrete_eval, format_program, parse_program)
from .quantale import SubstQuantale
from .report import RunReport
from .shells import (is_weak_complete, lin_arrow_domain,
                     weak_complete_shell_run)
from .subst import (SubCarrier, default_carrier, describe_set,
                    named_sets, residual_sets, tensor_sets, unify)

EXAMPLE_PROGRAM = "p(X,Y) <- {X/a; Y/a}."


def _names(s):
    return describe_set(s)


def _dom(rho):
    return "{" + ", ".join(rho.ambient.name(x) for x in rho.elements) + "}"


def sharing_scenario(report: RunReport, carrier: SubCarrier | None = None,
               config: EvalConfig | None = None) -> RunReport:
    """Pair-sharing is not condensing for ``p(X,Y) <- {{X/a},{Y/a}}``."""
    c = carrier or default_carrier()
    config = config or EvalConfig(c)
    N = named_sets(c)
    top, ixy = N["TOP"], N["I(X,Y)"]
    prog = parse_program(EXAMPLE_PROGRAM, c)
    report.add("program", format_program(prog).strip())

    xz, yz = c.subst([("X", "Z")]), c.subst([("Y", "Z")])
    shared = unify(xz, yz)
    report.check("{X/Z} (x) {Y/Z} = {X/Z, Y/Z}", shared == c.subst([("X", "Z"), ("Y", "Z")]),
                 "{X/Z, Y/Z}", shared)
    report.check("{X/Z, Y/Z} not in I(X,Y)", shared not in ixy, "false", shared in ixy)

    rho = moore_closure(c.powerset, [ixy])
    report.add_domain("domain", rho)
    report.check("M({I(X,Y)}) = {TOP, I(X,Y)}", rho.fixpoints == {top, ixy}, "{TOP, I(X,Y)}", _dom(rho))

    unit = c.set([c.eps])
    got = concrete_eval(prog, "p", unit, config)
    want = c.set([c.subst([("X", "a")]), c.subst([("Y", "a")])])
    report.check("S_p({eps}) = {X/a; Y/a}", got == want, want, got)
    ya = c.set([c.subst([("Y", "a")])])
    got = concrete_eval(prog, "p", ya, config)
    want = c.set([c.subst([("X", "a"), ("Y", "a")]), c.subst([("Y", "a")])])
    report.check("S_p({Y/a}) = {X/a,Y/a; Y/a}", got == want, want, got)

    got = abstract_eval(prog, rho, "p", top, config)
    report.add("abstract.p(TOP)", _names(got))
    report.check("F(TOP) = I(X,Y)", got == ixy, "I(X,Y)", _names(got))

    v = check_condensing(prog, rho, "p", config)
    report.add("verdict", "condensing" if v else "NOT condensing")
    if not v:
        report.add("witness.theta", _names(v.theta))
        report.add("witness.phi", _names(v.phi))
        report.add("witness.lhs", _names(v.lhs))
        report.add("witness.rhs", _names(v.rhs))
    report.check("check_condensing is false", not v, "false", bool(v))
    if not v:
        report.check("witness is (I(X,Y), TOP)", (v.theta, v.phi) == (ixy, top),
                     "(I(X,Y), TOP)", f"({_names(v.theta)}, {_names(v.phi)})")
        report.check("sides are I(X,Y) vs TOP", (v.lhs, v.rhs) == (ixy, top),
                     "I(X,Y) vs TOP", f"{_names(v.lhs)} vs {_names(v.rhs)}")
    return report


def refined_sharing_scenario(report: RunReport, carrier: SubCarrier | None = None,
               config: EvalConfig | None = None) -> RunReport:
    """Refining pair-sharing with the weak-complete shell."""
    c = carrier or default_carrier()
    config = config or EvalConfig(c)
    Q = SubstQuantale(c)
    N = named_sets(c)
    top, ixy, gxy, ge = N["TOP"], N["I(X,Y)"], N["G(X,Y)"], N["G(X,Y)+EG"]
    prog = parse_program(EXAMPLE_PROGRAM, c)

    r = residual_sets(top, ixy)
    report.check("TOP -o I(X,Y) = G(X,Y)", r == gxy, "G(X,Y)", _names(r))
    r = residual_sets(ixy, ixy)
    report.check("I(X,Y) -o I(X,Y) = G(X,Y)+EG", r == ge, "G(X,Y)+EG", _names(r))
    report.check("G(X,Y) <= G(X,Y)+EG <= I(X,Y) <= TOP", gxy <= ge <= ixy <= top, "true", "false")

    rho = moore_closure(c.powerset, [ixy])
    arrow = lin_arrow_domain(Q, rho, rho)
    report.check("{TOP, I(X,Y)} -o^ {TOP, I(X,Y)} = {TOP, G(X,Y), G(X,Y)+EG}",
                 arrow.fixpoints == {top, gxy, ge}, "{TOP, G(X,Y)+EG, G(X,Y)}", _dom(arrow))
    wc = is_weak_complete(Q, rho)
    report.check("{TOP, I(X,Y)} is not weak-complete", not wc, "false", bool(wc))

    refined = moore_closure(c.powerset, [top, ixy, gxy, ge])
    run = weak_complete_shell_run(Q, rho, cap=config.iteration_cap)
    report.add_domain("shell", run.domain)
    report.add("shell.iterations", run.iterations)
    report.add("shell.stabilized_at", run.stabilized_at)
    report.check("weak-complete shell = {TOP, I(X,Y), G(X,Y), G(X,Y)+EG}",
                 run.domain == refined, _dom(refined), _dom(run.domain))
    arrow = lin_arrow_domain(Q, refined, refined)
    report.check("rho' -o^ rho' = rho'", arrow == refined, _dom(refined), _dom(arrow))

    for label, dom in (("rho'", refined), ("shell", run.domain)):
        got = abstract_eval(prog, dom, "p", top, config)
        report.check(f"F(TOP) = G(X,Y) over {label}", got == gxy, "G(X,Y)", _names(got))
        v = check_condensing(prog, dom, "p", config)
        report.add(f"verdict.{label}", "condensing" if v else "NOT condensing")
        report.check(f"check_condensing over {label} is true", bool(v), "true", bool(v))
        F = SemanticFunction(prog, dom, "p", config)
        lhs = F(dom(tensor_sets(ixy, top)))
        rhs = dom(tensor_sets(ixy, F(top)))
        report.check(f"both sides are G(X,Y) at (I(X,Y), TOP) over {label}",
                     lhs == gxy and rhs == gxy, "G(X,Y) vs G(X,Y)", f"{_names(lhs)} vs {_names(rhs)}")
    return report


EXAMPLES = {"4.2": sharing_scenario, "4.9": refined_sharing_scenario}
