"""The core logic language: programs over substitution sets and their semantics.

A body is built from fact sets, binary conjunction (``*``), n-ary
disjunction (``+``) and predicate calls.  Calls are read as the least
solution of the clause system, computed by Kleene iteration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .domains import AbstractDomain
from .errors import (CarrierError, IterationCapError, ParseError,
                     PoolExhaustedError, PreconditionError)
from .subst import (FlatSubst, SubCarrier, SubstSet, default_carrier,
                    residual_sets, tensor_sets)
from .syntax import (SetExprParser, TokenStream, format_set, starts_set_atom,
                     tokenize)

DEFAULT_ITERATION_CAP = 10000
RENAME_POLICIES = ("literal", "apart")


# -- syntax trees -------------------------------------------------------------


@dataclass(frozen=True)
class Fact:
    theta: SubstSet


@dataclass(frozen=True)
class Conj:
    left: "Body"
    right: "Body"


@dataclass(frozen=True)
class Disj:
    children: tuple

    def __post_init__(self):
        if not self.children:
            raise PreconditionError("a disjunction needs at least one branch")


@dataclass(frozen=True)
class Call:
    pred: str
    args: tuple


Body = Union[Fact, Conj, Disj, Call]


@dataclass(frozen=True)
class Clause:
    pred: str
    head: tuple
    body: Body


@dataclass
class Program:
    carrier: SubCarrier
    clauses: dict = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self):
        alpha = self.carrier.alphabet
        for name, cl in self.clauses.items():
            if len(set(cl.head)) != len(cl.head):
                raise PreconditionError(f"head of {name} repeats a variable")
            for v in cl.head:
                if v not in alpha.vars_of_interest:
                    raise PreconditionError(f"head variable {v} of {name} is not a variable of interest")
            for node in walk(cl.body):
                if isinstance(node, Call):
                    _check_call(self, node)
                elif isinstance(node, Fact) and node.theta.carrier is not self.carrier:
                    raise CarrierError(f"a fact in {name} is over a different carrier")

    def __contains__(self, pred):
        return pred in self.clauses

    def clause(self, pred: str) -> Clause:
        try:
            return self.clauses[pred]
        except KeyError:
            raise PreconditionError(f"predicate {pred!r} is not declared") from None


def _check_call(prog: Program, call: Call):
    if call.pred not in prog.clauses:
        raise PreconditionError(f"call to undeclared predicate {call.pred!r}")
    arity = len(prog.clauses[call.pred].head)
    if len(call.args) != arity:
        raise PreconditionError(
            f"{call.pred} takes {arity} argument(s), called with {len(call.args)}")
    if len(set(call.args)) != len(call.args):
        raise PreconditionError(f"call to {call.pred} repeats an argument variable")
    for a in call.args:
        if not prog.carrier.alphabet.is_variable(a):
            raise PreconditionError(f"argument {a!r} of {call.pred} is not a carrier variable")


def walk(body: Body):
    yield body
    if isinstance(body, Conj):
        yield from walk(body.left)
        yield from walk(body.right)
    elif isinstance(body, Disj):
        for ch in body.children:
            yield from walk(ch)


def program_from_clauses(carrier: SubCarrier, clauses) -> Program:
    table = {}
    for cl in clauses:
        if cl.pred in table:
            raise PreconditionError(f"more than one clause for {cl.pred!r}")
        table[cl.pred] = cl
    return Program(carrier, table)


# -- parsing and printing -----------------------------------------------------------


_RESERVED = {"TOP", "EMPTY", "EG", "I", "G", "eps"}


class _ProgramParser:
    def __init__(self, text: str, carrier: SubCarrier):
        self.carrier = carrier
        self.ts = TokenStream(tokenize(text, comment="%"))
        self.sets = SetExprParser(carrier, self.ts)

    def program(self) -> Program:
        clauses = []
        seen = {}
        ts = self.ts
        while ts.peek.kind != "eof":
            start = ts.peek
            cl = self.clause()
            if cl.pred in seen:
                raise ParseError(f"duplicate clause for {cl.pred!r}", start.line, start.col)
            seen[cl.pred] = start
            clauses.append((cl, start))
        table = {cl.pred: cl for cl, _ in clauses}
        for cl, start in clauses:
            for node in walk(cl.body):
                if isinstance(node, Call):
                    try:
                        _check_call(_Shim(self.carrier, table), node)
                    except PreconditionError as exc:
                        raise ParseError(str(exc), start.line, start.col) from None
        try:
            return Program(self.carrier, table)
        except PreconditionError as exc:
            raise ParseError(str(exc)) from None

    def pred_name(self):
        tok = self.ts.ident("predicate name")
        if tok.text in _RESERVED:
            raise self.ts.error(f"{tok.text!r} is reserved for set expressions", tok)
        return tok

    def var_tuple(self) -> tuple:
        ts = self.ts
        if not ts.accept("("):
            return ()
        out = []
        while True:
            tok = ts.ident("variable")
            if not self.carrier.alphabet.is_variable(tok.text):
                raise ts.error(f"{tok.text!r} is not a variable of the carrier", tok)
            out.append(tok.text)
            if not ts.accept(","):
                break
        ts.expect(")")
        return tuple(out)

    def clause(self) -> Clause:
        ts = self.ts
        name = self.pred_name()
        head_tok = ts.peek
        head = self.var_tuple()
        vi = self.carrier.alphabet.vars_of_interest
        for v in head:
            if v not in vi:
                raise ts.error(f"head variable {v!r} is not a variable of interest", head_tok)
        if len(set(head)) != len(head):
            raise ts.error("head variables must be distinct", head_tok)
        ts.expect("<-")
        body = self.body()
        ts.expect(".")
        return Clause(name.text, head, body)

    def body(self) -> Body:
        parts = [self.product()]
        while self.ts.accept("+"):
            parts.append(self.product())
        return parts[0] if len(parts) == 1 else Disj(tuple(parts))

    def product(self) -> Body:
        b = self.factor()
        while self.ts.accept("*"):
            b = Conj(b, self.factor())
        return b

    def factor(self) -> Body:
        ts = self.ts
        if ts.at("("):
            # a parenthesised body is tried first so that sums of facts keep their shape;
            # a set expression such as "(A + B) & C" is the fallback
            save = ts.pos
            try:
                ts.expect("(")
                b = self.body()
                ts.expect(")")
                if not ts.at("&"):
                    return b
                body_error = None
            except ParseError as exc:
                body_error = exc
            ts.pos = save
            try:
                return Fact(self.sets.parse_term())
            except ParseError:
                if body_error is not None:
                    raise body_error from None
                raise
        if starts_set_atom(ts):
            return Fact(self.sets.parse_term())
        tok = ts.peek
        if tok.kind == "ident":
            name = self.pred_name()
            return Call(name.text, self.var_tuple())
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ts.error(f"expected a body, found {found}")


@dataclass
class _Shim:
    carrier: SubCarrier
    clauses: dict


def parse_program(text: str, carrier: SubCarrier | None = None) -> Program:
    """Parse the program language; errors carry line and column."""
    return _ProgramParser(text, carrier or default_carrier()).program()


def format_body(body: Body, prec: int = 0) -> str:
    if isinstance(body, Fact):
        return format_set(body.theta)
    if isinstance(body, Call):
        return body.pred + (f"({','.join(body.args)})" if body.args else "")
    if isinstance(body, Conj):
        # '*' groups to the left, so a conjunction on the right needs parentheses
        s = f"{format_body(body.left, 1)} * {format_body(body.right, 2)}"
        return f"({s})" if prec > 1 else s
    s = " + ".join(format_body(c, 1) for c in body.children)
    return f"({s})" if prec > 0 else s


def format_program(prog: Program) -> str:
    lines = []
    for cl in prog.clauses.values():
        head = f"({','.join(cl.head)})" if cl.head else ""
        lines.append(f"{cl.pred}{head} <- {format_body(cl.body)}.")
    return "\n".join(lines) + "\n"


# -- variable renaming ----------------------------------------------------------


def rename_set(theta: SubstSet, mapping: dict) -> SubstSet:
    """Apply a variable renaming to every member; ``mapping`` is completed to a permutation."""
    carrier = theta.carrier
    perm = _complete_permutation(carrier, mapping)
    if all(perm[v] == v for v in perm):
        return theta
    alpha = carrier.alphabet
    out = []
    for s in theta:
        pairs = [(perm[v], perm.get(t, t)) for v, t in s.bindings()]
        out.append(FlatSubst.from_bindings(alpha, pairs))
    return carrier.set(out)


def _complete_permutation(carrier: SubCarrier, mapping: dict) -> dict:
    vs = carrier.alphabet.variables
    perm = {v: v for v in vs}
    perm.update(mapping)
    images = set(mapping.values())
    if len(images) != len(mapping):
        raise PreconditionError("renaming is not injective")
    # send the displaced targets to the variables left without a preimage
    free_sources = [v for v in vs if v not in mapping and v in images]
    free_targets = [v for v in vs if v not in images and v in mapping]
    free_targets += [v for v in vs if v not in images and v not in mapping and v not in free_targets]
    for src in free_sources:
        tgt = next(t for t in free_targets if t not in images)
        perm[src] = tgt
        images.add(tgt)
    return perm


def rename_body(body: Body, mapping: dict) -> Body:
    if not mapping or all(k == v for k, v in mapping.items()):
        return body
    if isinstance(body, Fact):
        return Fact(rename_set(body.theta, mapping))
    if isinstance(body, Conj):
        return Conj(rename_body(body.left, mapping), rename_body(body.right, mapping))
    if isinstance(body, Disj):
        return Disj(tuple(rename_body(c, mapping) for c in body.children))
    return Call(body.pred, tuple(mapping.get(a, a) for a in body.args))


def body_variables(body: Body) -> set:
    out = set()
    for node in walk(body):
        if isinstance(node, Fact):
            for s in node.theta:
                for v, t in s.bindings():
                    out.add(v)
                    if s.alphabet.is_variable(t):
                        out.add(t)
        elif isinstance(node, Call):
            out.update(node.args)
    return out


def set_support(theta: SubstSet) -> set:
    out = set()
    for s in theta:
        for v, t in s.bindings():
            out.add(v)
            if s.alphabet.is_variable(t):
                out.add(t)
    return out


def rename_apart(clause: Clause, goal_vars, phi_vars, config: "EvalConfig") -> Body:
    """Move the clause's non-head variables onto pool variables clear of the goal and of Phi.

    A non-head variable already clear of both is kept; the rest take the
    next free pool variables in order.
    """
    alpha = config.carrier.alphabet
    head = set(clause.head)
    forbidden = set(goal_vars) | set(phi_vars) | head
    local = sorted(body_variables(clause.body) - head, key=alpha.var_index)
    taken = set()
    mapping = {}
    needy = []
    for v in local:
        if v not in forbidden:
            taken.add(v)
        else:
            needy.append(v)
    pool = [z for z in alpha.aux_vars if z not in forbidden and z not in taken and z not in local]
    if len(needy) > len(pool):
        raise PoolExhaustedError(len(needy), len(pool))
    for v, z in zip(needy, pool):
        mapping[v] = z
    return rename_body(clause.body, mapping)


# -- evaluation -----------------------------------------------------------------


@dataclass
class EvalConfig:
    """Evaluation settings.

    ``rename_policy`` is ``"literal"`` (fact sets are used as written) or
    ``"apart"`` (clause-local variables are renamed away from the goal and Phi).
    """
    carrier: SubCarrier = field(default_factory=default_carrier)
    rename_policy: str = "literal"
    iteration_cap: int = DEFAULT_ITERATION_CAP

    def __post_init__(self):
        if self.iteration_cap < 1:
            raise PreconditionError("iteration cap must be at least 1")
        if self.rename_policy not in RENAME_POLICIES:
            raise PreconditionError(f"unknown rename policy {self.rename_policy!r}")


def _instantiate(prog: Program, pred: str, args: tuple, phi: SubstSet, config: EvalConfig) -> Body:
    cl = prog.clause(pred)
    body = cl.body
    if config.rename_policy == "apart":
        body = rename_apart(cl, args, set_support(phi), config)
    if args != cl.head:
        body = rename_body_perm(body, dict(zip(cl.head, args)), prog.carrier)
    return body


def rename_body_perm(body: Body, mapping: dict, carrier: SubCarrier) -> Body:
    """Rename through the permutation that completes ``mapping``."""
    perm = _complete_permutation(carrier, mapping)
    perm = {k: v for k, v in perm.items() if k != v}
    if not perm:
        return body

    def go(b):
        if isinstance(b, Fact):
            return Fact(rename_set(b.theta, perm))
        if isinstance(b, Conj):
            return Conj(go(b.left), go(b.right))
        if isinstance(b, Disj):
            return Disj(tuple(go(c) for c in b.children))
        return Call(b.pred, tuple(perm.get(a, a) for a in b.args))

    return go(body)


class _System:
    """The clause system reachable from one goal, with Call results as unknowns."""

    def __init__(self, prog: Program, goal: str, phi: SubstSet, config: EvalConfig):
        self.bodies = {}
        cl = prog.clause(goal)
        self.root = (goal, cl.head)
        work = [self.root]
        while work:
            key = work.pop()
            if key in self.bodies:
                continue
            body = _instantiate(prog, key[0], key[1], phi, config)
            self.bodies[key] = body
            for node in walk(body):
                if isinstance(node, Call):
                    work.append((node.pred, node.args))
        self.order = sorted(self.bodies, key=repr)

    def solve(self, ev, bottom, cap: int):
        vals = {k: bottom for k in self.order}
        for _ in range(cap):
            changed = False
            for k in self.order:
                new = ev(self.bodies[k], vals)
                if new != vals[k]:
                    vals[k] = new
                    changed = True
            if not changed:
                return vals[self.root]
        raise IterationCapError(f"call fixpoint did not stabilize within {cap} rounds")


def concrete_eval(prog: Program, goal: str, phi: SubstSet, config: EvalConfig | None = None) -> SubstSet:
    config = config or EvalConfig(prog.carrier)
    prog.carrier.powerset.check(phi)

    def ev(b, vals):
        if isinstance(b, Fact):
            return tensor_sets(b.theta, phi)
        if isinstance(b, Conj):
            return tensor_sets(ev(b.left, vals), ev(b.right, vals))
        if isinstance(b, Disj):
            out = ev(b.children[0], vals)
            for c in b.children[1:]:
                out = out | ev(c, vals)
            return out
        return vals[(b.pred, b.args)]

    system = _System(prog, goal, phi, config)
    return system.solve(ev, prog.carrier.empty, config.iteration_cap)


def abstract_eval(prog: Program, rho: AbstractDomain, goal: str, theta, config: EvalConfig | None = None,
                  *, require_fixpoint: bool = True):
    """Best correct approximation of the semantics, closing with ``rho`` after every step."""
    config = config or EvalConfig(prog.carrier)
    if rho.ambient is not prog.carrier.powerset:
        raise CarrierError("domain and program are over different carriers")
    if require_fixpoint and theta not in rho.fixpoints:
        raise PreconditionError(f"{rho.ambient.name(theta)} is not a fixpoint of the domain")

    def ev(b, vals):
        if isinstance(b, Fact):
            return rho(tensor_sets(b.theta, theta))
        if isinstance(b, Conj):
            return rho(tensor_sets(ev(b.left, vals), ev(b.right, vals)))
        if isinstance(b, Disj):
            out = ev(b.children[0], vals)
            for c in b.children[1:]:
                out = out | ev(c, vals)
            return rho(out)
        return vals[(b.pred, b.args)]

    system = _System(prog, goal, theta, config)
    return system.solve(ev, rho(prog.carrier.empty), config.iteration_cap)


@dataclass
class CondensingVerdict:
    holds: bool
    theta: SubstSet | None = None
    phi: SubstSet | None = None
    lhs: SubstSet | None = None
    rhs: SubstSet | None = None

    def __bool__(self):
        return self.holds


class SemanticFunction:
    """``Theta -> [[goal, Theta]]^rho``, memoised."""

    def __init__(self, prog: Program, rho: AbstractDomain, goal: str, config: EvalConfig | None = None):
        self.prog, self.rho, self.goal = prog, rho, goal
        self.config = config or EvalConfig(prog.carrier)
        self._memo = {}

    def __call__(self, theta, *, require_fixpoint: bool = True):
        got = self._memo.get(theta)
        if got is None:
            got = abstract_eval(self.prog, self.rho, self.goal, theta, self.config,
                                require_fixpoint=require_fixpoint)
            self._memo[theta] = got
        return got


def check_condensing(prog: Program, rho: AbstractDomain, goal: str,
                     config: EvalConfig | None = None) -> CondensingVerdict:
    """``F(rho(Theta (x) Phi)) = rho(Theta (x) F(Phi))`` over all fixpoint pairs.

    Theta runs from the most precise fixpoint upward and Phi from top down;
    the first failing pair in that order is the witness.
    """
    F = SemanticFunction(prog, rho, goal, config)
    fps = rho.elements
    for theta in reversed(fps):
        for phi in fps:
            lhs = F(rho(tensor_sets(theta, phi)))
            rhs = rho(tensor_sets(theta, F(phi)))
            if lhs != rhs:
                return CondensingVerdict(False, theta, phi, lhs, rhs)
    return CondensingVerdict(True)


@dataclass
class Counterexample:
    """Outcome of the counterexample construction for a pair ``(Phi, Psi)``."""
    found: bool
    program: Program | None = None
    residual: SubstSet | None = None
    lhs: SubstSet | None = None
    rhs: SubstSet | None = None
    identity_fails: bool = False
    fixpoint_check: CondensingVerdict | None = None
    reason: str = ""

    def __bool__(self):
        return self.found and self.identity_fails


def counterexample_program(rho: AbstractDomain, phi, psi, *, singleton_sum: bool = False,
                           config: EvalConfig | None = None, goal: str = "p") -> Counterexample:
    """Build ``p <- (Phi -o Psi)`` and evaluate both sides of the condensing identity at ``(Phi, {eps})``.

    With ``singleton_sum`` the fact set is written as a sum of singletons.
    Returns a "no counterexample" outcome when ``Phi -o Psi`` is already a fixpoint.
    """
    carrier = rho.ambient.carrier
    config = config or EvalConfig(carrier)
    for x in (phi, psi):
        if x not in rho.fixpoints:
            return Counterexample(False, reason=f"{rho.ambient.name(x)} is not a fixpoint")
    theta = residual_sets(phi, psi)
    if theta in rho.fixpoints:
        return Counterexample(False, residual=theta, reason="Phi -o Psi is a fixpoint; no counterexample")
    head = carrier.alphabet.vars_of_interest
    if singleton_sum and len(theta) > 1:
        body = Disj(tuple(Fact(carrier.set([s])) for s in theta))
    else:
        body = Fact(theta)
    prog = Program(carrier, {goal: Clause(goal, head, body)})
    F = SemanticFunction(prog, rho, goal, config)
    unit = carrier.set([carrier.eps])
    lhs = F(rho(tensor_sets(phi, unit)))
    rhs = rho(tensor_sets(phi, F(unit, require_fixpoint=False)))
    return Counterexample(True, prog, theta, lhs, rhs, lhs != rhs,
                          check_condensing(prog, rho, goal, config))
