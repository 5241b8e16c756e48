"""Seeded random programs and domains, and the sweeps run over them."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import SizeLimitError
from .domains import AbstractDomain, moore_closure
from .lp import (Call, Clause, Conj, Disj, EvalConfig, Fact, Program,
                 abstract_eval, check_condensing, concrete_eval,
                 counterexample_program)
from .quantale import SubstQuantale
from .shells import is_weak_complete, weak_complete_shell
from .subst import (SubCarrier, SubstSet, default_carrier, down_closure,
                    scope_sets)


def random_fact_set(carrier: SubCarrier, rng: random.Random, max_members: int = 3) -> SubstSet:
    mask = 0
    for _ in range(rng.randint(1, max_members)):
        mask |= 1 << rng.randrange(carrier.n)
    return SubstSet(carrier, mask)


def random_body(carrier: SubCarrier, rng: random.Random, preds: list, depth: int):
    """A random body; ``preds`` holds ``(name, arity)`` pairs that may be called."""
    roll = rng.random()
    if depth <= 0 or roll < 0.35:
        if preds and rng.random() < 0.3:
            name, arity = rng.choice(preds)
            args = tuple(rng.sample(carrier.alphabet.vars_of_interest, arity))
            return Call(name, args)
        return Fact(random_fact_set(carrier, rng))
    if roll < 0.7:
        return Conj(random_body(carrier, rng, preds, depth - 1),
                    random_body(carrier, rng, preds, depth - 1))
    n = rng.randint(2, 3)
    return Disj(tuple(random_body(carrier, rng, preds, depth - 1) for _ in range(n)))


def random_program(carrier: SubCarrier, rng: random.Random, *, max_preds: int = 3,
                   depth: int = 3) -> Program:
    """Mutually recursive clauses ``p0 .. pk`` over the variables of interest; the goal is ``p0``."""
    vi = carrier.alphabet.vars_of_interest
    names = [f"p{i}" for i in range(rng.randint(1, max_preds))]
    preds = [(n, len(vi)) for n in names]
    clauses = {}
    for n in names:
        clauses[n] = Clause(n, vi, random_body(carrier, rng, preds, depth))
    return Program(carrier, clauses)


def program_corpus(n: int = 100, seed: int = 0, carrier: SubCarrier | None = None) -> list[Program]:
    carrier = carrier or default_carrier()
    rng = random.Random(seed)
    progs = []
    # the two hand-written programs lead the corpus
    from .lp import parse_program
    progs.append(parse_program("p0(X,Y) <- {X/a; Y/a}.", carrier))
    progs.append(parse_program("p0(X,Y) <- {X/a} * p0(Y,X) + {Y/Z}.", carrier))
    while len(progs) < n:
        progs.append(random_program(carrier, rng))
    return progs


def _generator_pool(carrier: SubCarrier, rng: random.Random) -> SubstSet:
    kind = rng.randrange(4)
    if kind == 0:
        return rng.choice(list(scope_sets(carrier).values()))
    if kind == 1:
        return down_closure(random_fact_set(carrier, rng, 2))
    if kind == 2:
        return SubstSet(carrier, rng.getrandbits(carrier.n))
    a, b = rng.sample(list(scope_sets(carrier).values()), 2)
    return a | b


def random_domain(carrier: SubCarrier, rng: random.Random, max_generators: int = 2) -> AbstractDomain:
    gens = [_generator_pool(carrier, rng) for _ in range(rng.randint(1, max_generators))]
    return moore_closure(carrier.powerset, gens)


def domain_corpus(n: int = 20, seed: int = 0, carrier: SubCarrier | None = None,
                  *, shells: int | None = None, max_shell: int = 32) -> list[AbstractDomain]:
    """Random Moore families, plus the weak-complete shells of the first ``shells`` of them.

    Shells with more than ``max_shell`` fixpoints are left out.
    """
    carrier = carrier or default_carrier()
    rng = random.Random(seed)
    Q = SubstQuantale(carrier)
    out = [moore_closure(carrier.powerset, [scope_sets(carrier)["I(X,Y)"]])] \
        if "I(X,Y)" in scope_sets(carrier) else []
    while len(out) < n:
        d = random_domain(carrier, rng)
        if d not in out:
            out.append(d)
    k = len(out) if shells is None else shells
    for d in list(out[:k]):
        try:
            w = weak_complete_shell(Q, d, max_fixpoints=max_shell)
        except SizeLimitError:
            continue
        if w not in out:
            out.append(w)
    return out


@dataclass
class SweepResult:
    programs: int = 0
    domains: int = 0
    weak_complete: int = 0
    condensing_checks: int = 0
    counterexamples: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def condensing_sweep(programs, domains, config: EvalConfig | None = None) -> SweepResult:
    """Weak-complete domains must be condensing on every program; the others need a counterexample."""
    res = SweepResult(len(programs), len(domains))
    if not domains:
        return res
    carrier = domains[0].ambient.carrier
    config = config or EvalConfig(carrier)
    Q = SubstQuantale(carrier)
    for di, rho in enumerate(domains):
        verdict = is_weak_complete(Q, rho)
        if verdict:
            res.weak_complete += 1
            for pi, prog in enumerate(programs):
                res.condensing_checks += 1
                if not check_condensing(prog, rho, "p0", config):
                    res.failures.append(("not condensing", di, pi))
        else:
            a, b = verdict.witness
            ce = counterexample_program(rho, a, b, config=config)
            if ce:
                res.counterexamples += 1
            else:
                res.failures.append(("no counterexample", di, None))
    return res


@dataclass
class SoundnessResult:
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def soundness_sweep(programs, domains, *, samples: int = 4, seed: int = 0,
                    config: EvalConfig | None = None) -> SoundnessResult:
    """``rho(concrete(Phi)) <= abstract(rho(Phi))`` for fixpoints and sampled concrete ``Phi``."""
    res = SoundnessResult()
    if not domains:
        return res
    carrier = domains[0].ambient.carrier
    config = config or EvalConfig(carrier)
    rng = random.Random(seed)
    extra = [random_fact_set(carrier, rng, 4) for _ in range(samples)]
    for pi, prog in enumerate(programs):
        concrete = {}
        for di, rho in enumerate(domains):
            abstract = {}
            for phi in list(rho.elements) + extra:
                if phi not in concrete:
                    concrete[phi] = concrete_eval(prog, "p0", phi, config)
                start = rho(phi)
                if start not in abstract:
                    abstract[start] = abstract_eval(prog, rho, "p0", start, config)
                res.checks += 1
                if not rho(concrete[phi]) <= abstract[start]:
                    res.failures.append((pi, di, phi))
    return res
