import pytest
from hypothesis import given, settings, strategies as st

from condensing.corpus import domain_corpus, program_corpus, random_fact_set
from condensing.domains import moore_closure, top_domain
from condensing.errors import ParseError, PoolExhaustedError, PreconditionError
from condensing.lp import (Clause, Conj, Disj, EvalConfig, Fact,
                           SemanticFunction, abstract_eval, check_condensing,
                           concrete_eval, counterexample_program,
                           format_program, parse_program, rename_apart)
from condensing.quantale import SubstQuantale
from condensing.shells import is_weak_complete
from condensing.subst import (default_carrier, enumerate_carrier, named_sets,
                              residual_sets, tensor_sets)
from condensing.syntax import parse_set

C = default_carrier()
N = named_sets(C)
TOP, IXY, GXY, GE = N["TOP"], N["I(X,Y)"], N["G(X,Y)"], N["G(X,Y)+EG"]
EX = "p(X,Y) <- {X/a; Y/a}."
UNIT = C.set([C.eps])
RHO = moore_closure(C.powerset, [IXY])
REFINED = moore_closure(C.powerset, [IXY, GXY, GE])


def sset(text):
    return parse_set(text, C)


def test_parse_example_program():
    prog = parse_program(EX, C)
    cl = prog.clause("p")
    assert cl.head == ("X", "Y")
    assert cl.body == Fact(sset("{X/a; Y/a}"))


def test_parse_eps_fact_and_errors():
    prog = parse_program("p(X) <- {eps}.", enumerate_carrier(["X"], [], ["a"]))
    assert prog.clause("p").body.theta == prog.carrier.set([prog.carrier.eps])
    with pytest.raises((ParseError, PreconditionError)):
        parse_program("p(X,Y) <- p(X,Y) * q(X,Y).", C)
    with pytest.raises(ParseError):
        parse_program("p(X,Y) <- {X/a}", C)
    with pytest.raises(ParseError):
        parse_program("p(X,Y) <- {X/b}.", C)


def test_operator_precedence():
    prog = parse_program("p(X,Y) <- {X/a} * {Y/a} + {eps}.", C)
    body = prog.clause("p").body
    assert isinstance(body, Disj)
    assert isinstance(body.children[0], Conj)


def test_program_roundtrip():
    for prog in program_corpus(30, seed=4):
        again = parse_program(format_program(prog), C)
        assert again.clauses == prog.clauses


def test_concrete_examples():
    prog = parse_program(EX, C)
    assert concrete_eval(prog, "p", UNIT) == sset("{X/a; Y/a}")
    assert concrete_eval(prog, "p", sset("{Y/a}")) == sset("{X/a,Y/a; Y/a}")
    two = parse_program("p(X,Y) <- {X/a} + {Y/Z}.", C)
    assert concrete_eval(two, "p", UNIT) == sset("{X/a; Y/Z}")


def test_recursive_program_terminates():
    prog = parse_program("p(X,Y) <- {X/a} * p(Y,X) + {Y/Z}.", C)
    out = concrete_eval(prog, "p", UNIT)
    assert sset("{Y/Z}") <= out
    assert abstract_eval(prog, RHO, "p", TOP) in RHO.fixpoints


def test_abstract_examples():
    prog = parse_program(EX, C)
    assert abstract_eval(prog, RHO, "p", TOP) == IXY
    assert abstract_eval(prog, REFINED, "p", TOP) == GXY
    one = top_domain(C.powerset)
    assert abstract_eval(prog, one, "p", TOP) == TOP


def test_abstract_eval_needs_fixpoint():
    prog = parse_program(EX, C)
    with pytest.raises(PreconditionError):
        abstract_eval(prog, RHO, "p", GXY)


def test_condensing_examples():
    prog = parse_program(EX, C)
    v = check_condensing(prog, RHO, "p")
    assert not v
    assert (v.theta, v.phi) == (IXY, TOP)
    assert (v.lhs, v.rhs) == (IXY, TOP)
    assert check_condensing(prog, REFINED, "p")
    assert check_condensing(prog, top_domain(C.powerset), "p")
    F = SemanticFunction(prog, REFINED, "p")
    assert F(REFINED(tensor_sets(IXY, TOP))) == GXY
    assert REFINED(tensor_sets(IXY, F(TOP))) == GXY


def test_rename_apart():
    cl = Clause("p", ("X", "Y"), Fact(sset("{X/Z}")))
    cfg = EvalConfig(C, "apart")
    assert rename_apart(cl, ("X", "Y"), set(), cfg) == cl.body
    assert rename_apart(cl, ("X", "Y"), {"Z"}, cfg) == Fact(sset("{X/W}"))
    small = enumerate_carrier(["X", "Y"], ["Z"], ["a"])
    two = Clause("p", ("X",), Conj(Fact(parse_set("{Y/Z}", small)), Fact(parse_set("{X/a}", small))))
    with pytest.raises(PoolExhaustedError) as exc:
        rename_apart(two, ("X",), {"Y", "Z"}, EvalConfig(small, "apart"))
    assert exc.value.needed == 2


def test_counterexample_examples():
    ce = counterexample_program(RHO, TOP, IXY)
    assert ce and ce.found and ce.identity_fails
    assert ce.residual == GXY
    assert ce.program.clause("p").body == Fact(GXY)
    assert not ce.fixpoint_check
    assert not counterexample_program(top_domain(C.powerset), TOP, TOP).found
    summed = counterexample_program(RHO, TOP, IXY, singleton_sum=True)
    assert summed and isinstance(summed.program.clause("p").body, Disj)


def test_counterexample_absent_when_residual_is_fixpoint():
    assert residual_sets(TOP, TOP) == TOP
    assert not counterexample_program(REFINED, TOP, TOP).found
    assert not counterexample_program(REFINED, TOP, IXY).found


PROGRAMS = program_corpus(40, seed=11)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PROGRAMS), st.integers(0, 2 ** 32))
def test_concrete_semantics_factors_through_unit(prog, seed):
    import random
    phi = random_fact_set(C, random.Random(seed), 4)
    assert concrete_eval(prog, "p0", phi) == tensor_sets(phi, concrete_eval(prog, "p0", UNIT))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PROGRAMS), st.integers(0, 2 ** 32))
def test_concrete_semantics_is_monotone(prog, seed):
    import random
    rng = random.Random(seed)
    a = random_fact_set(C, rng, 4)
    b = a | random_fact_set(C, rng, 4)
    assert concrete_eval(prog, "p0", a) <= concrete_eval(prog, "p0", b)


def test_goal_independence_on_weak_complete_domains():
    Q = SubstQuantale(C)
    doms = [d for d in domain_corpus(12, seed=2) if is_weak_complete(Q, d)]
    assert doms
    for rho in doms:
        start = rho(UNIT)
        if start not in rho.fixpoints:
            continue
        for prog in PROGRAMS[:15]:
            F = SemanticFunction(prog, rho, "p0")
            base = F(start)
            for theta in rho.elements:
                assert rho(tensor_sets(theta, base)) == F(theta)


def test_apart_policy_runs():
    prog = parse_program("p(X,Y) <- {X/Z} * {Y/a}.", C)
    cfg = EvalConfig(C, "apart")
    out = concrete_eval(prog, "p", sset("{Z/a}"), cfg)
    lit = concrete_eval(prog, "p", sset("{Z/a}"))
    assert out != lit
    assert all(m.apply("Y") == "a" for m in out)
