"""Commutative quantales, linear implication and law verification.

Two concrete kinds share one surface (``ambient``, ``unit``, ``tensor``,
``residual``): :class:`ExplicitQuantale` over a finite lattice, and
:class:`SubstQuantale`, the powerset of a substitution carrier under lifted
unification.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import Callable, Iterable

from .errors import CarrierError, ParseError
from .lattice import (FiniteLattice, chain_lattice, iter_directives,
                      parse_lattice_directives, powerset_lattice,
                      tokens_with_columns)
from .subst import (SubCarrier, SubstSet, default_carrier, residual_sets,
                    sample_sets, tensor_sets)


class ExplicitQuantale:
    """A tensor on a finite lattice, stored as an index table.

    ``tensor`` is a function of two elements or a mapping from pairs; a
    mapping may list each unordered pair once.  When ``unit`` is omitted
    the table is searched for one.
    """

    def __init__(self, lattice: FiniteLattice, tensor, unit=None, *, name: str = ""):
        self.ambient = self.lattice = lattice
        self.name = name
        n = len(lattice)
        els = lattice.elements
        if callable(tensor):
            fn = tensor
        else:
            table = dict(tensor)
            for (a, b), c in list(table.items()):
                table.setdefault((b, a), c)

            def fn(a, b):
                try:
                    return table[(a, b)]
                except KeyError:
                    raise CarrierError(
                        f"tensor table has no entry for ({lattice.name(a)}, {lattice.name(b)})") from None
        self._t = [[lattice.index(fn(els[i], els[j])) for j in range(n)] for i in range(n)]
        if unit is None:
            for e in range(n):
                if all(self._t[e][j] == j and self._t[j][e] == j for j in range(n)):
                    unit = els[e]
                    break
        else:
            lattice.check(unit)
        self.unit = unit
        self._r = None

    def __repr__(self):
        return f"ExplicitQuantale({self.name or len(self.lattice)})"

    @classmethod
    def meet(cls, lattice: FiniteLattice, name: str = "") -> "ExplicitQuantale":
        return cls(lattice, lattice.meet, lattice.top, name=name)

    def tensor(self, a, b):
        L = self.lattice
        return L.elements[self._t[L.index(a)][L.index(b)]]

    def _residual_table(self):
        if self._r is None:
            L = self.lattice
            n = len(L)
            self._r = [[0] * n for _ in range(n)]
            for i in range(n):
                row = self._t[i]
                for k in range(n):
                    ok = 0
                    for j in range(n):
                        if L._ileq(row[j], k):
                            ok |= 1 << j
                    self._r[i][k] = L._lub_mask(ok) if ok else L._bottom_i
        return self._r

    def residual(self, a, c):
        """``a -o c``: lub of every ``b`` with ``a (x) b <= c``."""
        L = self.lattice
        return L.elements[self._residual_table()[L.index(a)][L.index(c)]]

    def sample(self, **_):
        return list(self.lattice.elements)


class SubstQuantale:
    """Subsets of a carrier under lifted unification; the unit is ``{eps}``."""

    def __init__(self, carrier: SubCarrier | None = None):
        self.carrier = carrier or default_carrier()
        self.ambient = self.carrier.powerset
        self.unit = self.carrier.set([self.carrier.eps])
        self.name = "subst"

    def __repr__(self):
        return f"SubstQuantale({self.carrier!r})"

    def tensor(self, a: SubstSet, b: SubstSet) -> SubstSet:
        return tensor_sets(a, b)

    def residual(self, a: SubstSet, c: SubstSet) -> SubstSet:
        return residual_sets(a, c)

    def sample(self, k: int = 64, seed: int = 0) -> list[SubstSet]:
        return sample_sets(self.carrier, k, seed)


def residual(Q, a, c):
    Q.ambient.check(a), Q.ambient.check(c)
    return Q.residual(a, c)


# -- law verification ------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple
    detail: str

    def render(self, ambient) -> str:
        w = ", ".join(ambient.name(x) for x in self.witness)
        return f"{self.law}: ({w}) {self.detail}"


@dataclass
class SampleConfig:
    """Controls sampling on ambients that cannot be enumerated."""
    k: int = 64
    seed: int = 0
    max_triples: int = 2000


def _pairs(items):
    return product(items, repeat=2)


def _triples(items, budget: int | None, rng: random.Random):
    n = len(items)
    if budget is None or n ** 3 <= budget:
        yield from product(items, repeat=3)
        return
    for _ in range(budget):
        yield (items[rng.randrange(n)], items[rng.randrange(n)], items[rng.randrange(n)])


class _Checker:
    def __init__(self, Q):
        self.Q = Q
        self.out: list[Violation] = []
        self.failed: set[str] = set()

    def check(self, law, ok, witness, detail=""):
        if not ok and law not in self.failed:
            self.failed.add(law)
            self.out.append(Violation(law, tuple(witness), detail))

    def done(self, law) -> bool:
        return law in self.failed


def _items_and_budget(Q, cfg: SampleConfig):
    if Q.ambient.enumerable:
        return list(Q.ambient.elements), None
    return Q.sample(k=cfg.k, seed=cfg.seed), cfg.max_triples


def verify_quantale(Q, cfg: SampleConfig | None = None) -> list[Violation]:
    """Every violated quantale law with its first witness; empty iff all hold.

    Explicit ambients are checked exhaustively.  On a substitution carrier
    the unification table is checked on all member pairs and triples and the
    set-level laws run over the sampled sets.
    """
    cfg = cfg or SampleConfig()
    amb = Q.ambient
    t = Q.tensor
    ck = _Checker(Q)
    items, budget = _items_and_budget(Q, cfg)
    rng = random.Random(cfg.seed)

    if isinstance(Q, SubstQuantale):
        _verify_unify_table(Q.carrier, ck)

    bot = amb.bottom
    for a, b in _pairs(items):
        if ck.done("commutativity"):
            break
        ck.check("commutativity", t(a, b) == t(b, a), (a, b), "a(x)b != b(x)a")
    for a in items:
        ck.check("bottom preservation", t(a, bot) == bot, (a, bot), "a(x)bottom != bottom")
    for a, b, c in _triples(items, budget, rng):
        if not ck.done("associativity"):
            ck.check("associativity", t(t(a, b), c) == t(a, t(b, c)), (a, b, c),
                     "(a(x)b)(x)c != a(x)(b(x)c)")
        if not ck.done("binary additivity"):
            ck.check("binary additivity", t(a, amb.join(b, c)) == amb.join(t(a, b), t(a, c)),
                     (a, b, c), "a(x)(b v c) != (a(x)b) v (a(x)c)")
    if Q.unit is None:
        ck.check("unit", False, (), "no unit element exists")
    else:
        for a in items:
            if ck.done("unit"):
                break
            ck.check("unit", t(Q.unit, a) == a, (Q.unit, a), "1(x)a != a")
    return ck.out


def _verify_unify_table(carrier: SubCarrier, ck: _Checker):
    n = carrier.n
    u = carrier._u
    one = lambda i: SubstSet(carrier, 1 << i)

    def mul(i, j):
        return -1 if i < 0 or j < 0 else u[i][j]

    for i in range(n):
        for j in range(n):
            if u[i][j] != u[j][i]:
                ck.check("commutativity", False, (one(i), one(j)), "unify table is not symmetric")
                break
        if u[carrier.eps_index][i] != i:
            ck.check("unit", False, (one(carrier.eps_index), one(i)), "unify(eps, s) != s")
    for i in range(n):
        for j in range(n):
            ij = u[i][j]
            for k in range(n):
                if mul(ij, k) != mul(i, u[j][k]):
                    ck.check("associativity", False, (one(i), one(j), one(k)),
                             "unification is not associative")
                    return


def verify_linear_laws(Q, cfg: SampleConfig | None = None) -> list[Violation]:
    """Check the basic laws of linear implication, plus the adjunction itself.

    Also checks that ``x -> (x -o a) -o a`` is a closure operator for each ``a``.
    """
    cfg = cfg or SampleConfig()
    amb = Q.ambient
    t, r = Q.tensor, Q.residual
    leq = amb.leq
    ck = _Checker(Q)
    items, budget = _items_and_budget(Q, cfg)
    rng = random.Random(cfg.seed)
    top, bot = amb.top, amb.bottom

    for a in items:
        ck.check("(iii) empty meet", r(a, top) == top, (a, top), "a -o top != top")
        ck.check("(iv) empty join", r(bot, a) == top, (bot, a), "bottom -o c != top")
        if Q.unit is not None:
            ck.check("(vi)", r(Q.unit, a) == a, (Q.unit, a), "1 -o a != a")
    if Q.unit is None:
        ck.check("(vi)", False, (), "no unit element exists")

    for a, c in _pairs(items):
        ac = r(a, c)
        ck.check("(i)", leq(t(a, ac), c), (a, c), "a(x)(a -o c) not <= c")
        ca = r(c, a)
        cca = r(ca, a)
        ck.check("(vii)", leq(c, cca), (c, a), "c not <= (c -o a) -o a")
        ck.check("(viii)", r(cca, a) == ca, (c, a), "((c -o a) -o a) -o a != c -o a")
        # x -> (x -o a) -o a as a closure: extensive is (vii); idempotence here
        ck.check("closure idempotent", r(r(cca, a), a) == cca, (c, a),
                 "rho_a(rho_a(c)) != rho_a(c)")

    for a, b, c in _triples(items, budget, rng):
        bc = r(b, c)
        ck.check("adjunction", leq(t(a, b), c) == leq(b, r(a, c)), (a, b, c),
                 "a(x)b <= c differs from b <= a -o c")
        ck.check("(ii)", r(a, bc) == r(t(b, a), c), (a, b, c),
                 "a -o (b -o c) != (b(x)a) -o c")
        ck.check("(iii)", r(a, amb.meet(b, c)) == amb.meet(r(a, b), r(a, c)), (a, b, c),
                 "a -o (b ^ c) != (a -o b) ^ (a -o c)")
        ck.check("(iv)", r(amb.join(a, b), c) == amb.meet(r(a, c), r(b, c)), (a, b, c),
                 "(a v b) -o c != (a -o c) ^ (b -o c)")
        ck.check("(v)", r(a, bc) == r(b, r(a, c)), (a, b, c),
                 "a -o (b -o c) != b -o (a -o c)")
        if leq(b, c):
            ck.check("(ix)", leq(t(a, b), t(a, c)), (a, b, c), "b <= c but a(x)b not <= a(x)c")
            ck.check("closure monotone", leq(r(r(b, a), a), r(r(c, a), a)), (b, c, a),
                     "b <= c but rho_a(b) not <= rho_a(c)")
    return ck.out


# -- a zoo of small unital commutative quantales ---------------------------------------


def meet_quantale(lattice: FiniteLattice, name: str = "") -> ExplicitQuantale:
    return ExplicitQuantale.meet(lattice, name=name)


def boolean_meet_quantale(atoms: Iterable = ("p", "q")) -> ExplicitQuantale:
    atoms = list(atoms)
    return meet_quantale(powerset_lattice(atoms), name=f"B{2 ** len(atoms)}-meet")


def chain_meet_quantale(n: int) -> ExplicitQuantale:
    return meet_quantale(chain_lattice(n), name=f"chain{n}-meet")


def lukasiewicz_quantale(n: int) -> ExplicitQuantale:
    """The chain ``0..n-1`` with truncated addition ``max(0, a + b - (n - 1))``."""
    top = n - 1
    return ExplicitQuantale(chain_lattice(n), lambda a, b: max(0, a + b - top), top,
                            name=f"lukasiewicz{n}")


def powerset_monoid_quantale(elements: Iterable, op: Callable, unit, name: str = "") -> ExplicitQuantale:
    """Subsets of a commutative monoid under the pointwise-lifted operation."""
    L = powerset_lattice(list(elements))
    return ExplicitQuantale(L, lambda X, Y: frozenset(op(x, y) for x in X for y in Y),
                            frozenset([unit]), name=name)


def standard_quantales(max_size: int = 8) -> list[ExplicitQuantale]:
    """Unital commutative quantales used by the test and acceptance suites."""
    zoo = [
        chain_meet_quantale(2),
        chain_meet_quantale(3),
        chain_meet_quantale(4),
        chain_meet_quantale(5),
        boolean_meet_quantale(("p", "q")),
        lukasiewicz_quantale(3),
        lukasiewicz_quantale(4),
        lukasiewicz_quantale(5),
        powerset_monoid_quantale((0, 1), lambda x, y: (x + y) % 2, 0, name="P(Z2,+)"),
        powerset_monoid_quantale((0, 1), max, 0, name="P({0,1},max)"),
        boolean_meet_quantale(("p", "q", "r")),
        powerset_monoid_quantale((0, 1, 2), lambda x, y: (x + y) % 3, 0, name="P(Z3,+)"),
        powerset_monoid_quantale((0, 1, 2), max, 0, name="P({0,1,2},max)"),
        lukasiewicz_quantale(8),
    ]
    return [q for q in zoo if len(q.lattice) <= max_size]


# -- text format ------------------------------------------------------------------


def parse_quantale(text: str) -> ExplicitQuantale:
    """Lattice directives plus ``tensor: a b -> c``, ``tensor-builtin: meet``, ``unit: e``."""
    lattice, rest = parse_lattice_directives(
        iter_directives(text), extra_keys=("tensor", "tensor-builtin", "unit"))
    table = {}
    builtin = None
    unit = None
    for no, key, value, col in rest:
        toks = list(tokens_with_columns(value, col))
        if key == "tensor":
            if len(toks) != 4 or toks[2][0] != "->":
                raise ParseError("expected 'tensor: a b -> c'", no, col)
            (a, ca), (b, cb), _, (c, cc) = toks
            for name, cn in ((a, ca), (b, cb), (c, cc)):
                if name not in lattice:
                    raise ParseError(f"undeclared element {name!r}", no, cn)
            for key2 in ((a, b), (b, a)):
                if key2 in table and table[key2] != c:
                    raise ParseError(f"conflicting tensor entries for ({a}, {b})", no, col)
            table[(a, b)] = table[(b, a)] = c
        elif key == "tensor-builtin":
            if value != "meet":
                raise ParseError(f"unknown tensor builtin {value!r}", no, col)
            builtin = value
        elif key == "unit":
            if len(toks) != 1 or toks[0][0] not in lattice:
                raise ParseError(f"unit must be one declared element, got {value!r}", no, col)
            unit = toks[0][0]
    if builtin and table:
        raise ParseError("give either a tensor table or tensor-builtin, not both")
    if builtin == "meet":
        return ExplicitQuantale(lattice, lattice.meet, unit if unit is not None else lattice.top)
    if not table:
        raise ParseError("missing tensor table or tensor-builtin")
    for a, b in combinations(lattice.elements, 2):
        if (a, b) not in table:
            raise ParseError(f"tensor table has no entry for ({a}, {b})")
    for a in lattice.elements:
        if (a, a) not in table:
            raise ParseError(f"tensor table has no entry for ({a}, {a})")
    return ExplicitQuantale(lattice, table, unit)


def format_quantale(Q: ExplicitQuantale) -> str:
    from .lattice import format_lattice
    L = Q.lattice
    lines = [format_lattice(L).rstrip("\n")]
    els = L.elements
    for i, a in enumerate(els):
        for b in els[i:]:
            lines.append(f"tensor: {L.name(a)} {L.name(b)} -> {L.name(Q.tensor(a, b))}")
    if Q.unit is not None:
        lines.append(f"unit: {L.name(Q.unit)}")
    return "\n".join(lines) + "\n"
