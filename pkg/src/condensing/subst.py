"""Flat idempotent substitutions over a finite alphabet and their powerset quantale.

A flat substitution binds variables to variables or constants only.  It is
the solved form of a set of equations, so it is determined by a partition of
the variables in which each block carries at most one constant.  The
canonical representative of a block is its constant when it has one, and
otherwise its earliest variable (variables of interest first, then the
auxiliary pool); every other member of the block is bound to it.  Two binding
maps are mutual instances exactly when they induce the same labelled
partition, so the canonical form identifies each equivalence class.

Sets of substitutions are int bitmasks over the enumerated carrier.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import AmbientMismatch, CarrierError, PreconditionError, SizeLimitError
from .lattice import iter_bits

DEFAULT_MAX_CARRIER = 100_000
DESCRIBE_EXTRA = 4


@dataclass(frozen=True)
class Alphabet:
    vars_of_interest: tuple[str, ...]
    aux_vars: tuple[str, ...] = ()
    constants: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vars_of_interest", tuple(self.vars_of_interest))
        object.__setattr__(self, "aux_vars", tuple(self.aux_vars))
        object.__setattr__(self, "constants", tuple(self.constants))
        if not self.vars_of_interest:
            raise PreconditionError("at least one variable of interest is required")
        syms = self.variables + self.constants
        if len(set(syms)) != len(syms):
            raise PreconditionError("variables of interest, auxiliary variables "
                                    "and constants must be pairwise disjoint")

    @cached_property
    def variables(self) -> tuple[str, ...]:
        return self.vars_of_interest + self.aux_vars

    @cached_property
    def symbols(self) -> tuple[str, ...]:
        return self.variables + self.constants

    @cached_property
    def symbol_index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.symbols)}

    def var_index(self, v: str) -> int:
        i = self.symbol_index.get(v)
        if i is None or i >= len(self.variables):
            raise CarrierError(f"{v!r} is not a variable of the alphabet")
        return i

    def is_variable(self, s: str) -> bool:
        i = self.symbol_index.get(s)
        return i is not None and i < len(self.variables)

    def is_constant(self, s: str) -> bool:
        i = self.symbol_index.get(s)
        return i is not None and i >= len(self.variables)


DEFAULT_ALPHABET = Alphabet(("X", "Y"), ("Z", "W"), ("a",))


class _Tau:
    """Unification failure; the bottom of the instantiation order."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "τ"

    def __bool__(self):
        return False


TAU = _Tau()


def _find(parent: list[int], i: int) -> int:
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def _canonical_targets(alphabet: Alphabet, parent: list[int]):
    """Turn a union-find forest over symbols into the canonical target tuple.

    Returns ``None`` when some block holds two distinct constants.
    """
    nv = len(alphabet.variables)
    rep: dict[int, int] = {}
    for s in range(len(alphabet.symbols)):
        root = _find(parent, s)
        cur = rep.get(root)
        if cur is None:
            rep[root] = s
        elif s >= nv:
            if cur >= nv:
                return None
            rep[root] = s
    return tuple(rep[_find(parent, v)] for v in range(nv))


class FlatSubst:
    """A canonical flat idempotent substitution.

    ``targets[v]`` is the symbol index that variable ``v`` is bound to, or
    ``v`` itself when ``v`` is unbound.
    """

    __slots__ = ("alphabet", "targets", "_hash")

    def __init__(self, alphabet: Alphabet, targets: tuple[int, ...]):
        self.alphabet = alphabet
        self.targets = targets
        self._hash = hash((alphabet, targets))

    @classmethod
    def from_bindings(cls, alphabet: Alphabet,
                      bindings: Mapping[str, str] | Iterable[tuple[str, str]] = ()) -> "FlatSubst":
        """Canonicalize an arbitrary flat binding map over ``alphabet``."""
        pairs = bindings.items() if isinstance(bindings, Mapping) else bindings
        parent = list(range(len(alphabet.symbols)))
        seen = set()
        for v, t in pairs:
            vi = alphabet.var_index(v)
            if vi in seen:
                raise PreconditionError(f"variable {v} is bound twice")
            seen.add(vi)
            ti = alphabet.symbol_index.get(t)
            if ti is None:
                raise CarrierError(f"{t!r} is not a symbol of the alphabet")
            a, b = _find(parent, vi), _find(parent, ti)
            if a != b:
                parent[a] = b
        targets = _canonical_targets(alphabet, parent)
        if targets is None:
            raise PreconditionError("binding map equates two distinct constants")
        return cls(alphabet, targets)

    @classmethod
    def empty(cls, alphabet: Alphabet) -> "FlatSubst":
        return cls(alphabet, tuple(range(len(alphabet.variables))))

    def __eq__(self, other):
        return (isinstance(other, FlatSubst) and self.targets == other.targets
                and self.alphabet == other.alphabet)

    def __hash__(self):
        return self._hash

    def bindings(self) -> list[tuple[str, str]]:
        syms = self.alphabet.symbols
        return [(syms[v], syms[t]) for v, t in enumerate(self.targets) if t != v]

    def is_empty(self) -> bool:
        return all(t == v for v, t in enumerate(self.targets))

    def apply(self, symbol: str) -> str:
        """Image of a variable or constant under the substitution."""
        i = self.alphabet.symbol_index.get(symbol)
        if i is None:
            raise CarrierError(f"{symbol!r} is not a symbol of the alphabet")
        if i >= len(self.targets):
            return symbol
        return self.alphabet.symbols[self.targets[i]]

    def is_ground(self, var: str) -> bool:
        return self.targets[self.alphabet.var_index(var)] >= len(self.targets)

    def __repr__(self):
        if self.is_empty():
            return "eps"
        return "{" + ", ".join(f"{v}/{t}" for v, t in self.bindings()) + "}"

    def text(self) -> str:
        """Rendering in the set-expression grammar."""
        if self.is_empty():
            return "eps"
        return ",".join(f"{v}/{t}" for v, t in self.bindings())


def _same_alphabet(s: FlatSubst, t: FlatSubst):
    if s.alphabet != t.alphabet:
        raise AmbientMismatch("substitutions are over different alphabets")


def unify(sigma: FlatSubst, theta: FlatSubst):
    """Most general common instance of two flat substitutions, or ``TAU``."""
    _same_alphabet(sigma, theta)
    alphabet = sigma.alphabet
    parent = list(range(len(alphabet.symbols)))
    for v, t in enumerate(sigma.targets):
        parent[v] = t
    for v, t in enumerate(theta.targets):
        if t != v:
            a, b = _find(parent, v), _find(parent, t)
            if a != b:
                parent[a] = b
    targets = _canonical_targets(alphabet, parent)
    if targets is None:
        return TAU
    return FlatSubst(alphabet, targets)


def instance_leq(sigma: FlatSubst, theta: FlatSubst) -> bool:
    """True iff ``sigma`` is an instance of ``theta``.

    For idempotent ``theta`` this is ``sigma(theta(v)) == sigma(v)`` for
    every variable ``v``: each equation solved by ``theta`` holds in ``sigma``.
    """
    _same_alphabet(sigma, theta)
    nv = len(sigma.targets)
    st = sigma.targets
    for v, t in enumerate(theta.targets):
        image = t if t >= nv else st[t]
        if image != st[v]:
            return False
    return True


def anti_instance(sigma: FlatSubst, theta: FlatSubst) -> FlatSubst:
    """Least general substitution of which both arguments are instances."""
    _same_alphabet(sigma, theta)
    carrier = _cached_carrier(sigma.alphabet, DEFAULT_MAX_CARRIER)
    i, j = carrier.index(sigma), carrier.index(theta)
    above = carrier._up[i] & carrier._up[j]
    least = [k for k in iter_bits(above) if above & ~carrier._up[k] == 0]
    assert len(least) == 1, "anti-instance is not unique in the fragment"
    return carrier.members[least[0]]


# -- carrier enumeration -----------------------------------------------------------

def _set_partitions(n: int) -> Iterator[list[int]]:
    """Restricted growth strings of length ``n``."""
    if n == 0:
        yield []
        return
    a = [0] * n

    def rec(i, m):
        if i == n:
            yield list(a)
            return
        for b in range(m + 2):
            a[i] = b
            yield from rec(i + 1, max(m, b))

    yield from rec(1, 0)


def _labellings(nblocks: int, nconst: int) -> Iterator[tuple]:
    """Injective partial maps from blocks to constants (``None`` = unlabelled)."""
    def rec(b, used):
        if b == nblocks:
            yield ()
            return
        for rest in rec(b + 1, used):
            yield (None,) + rest
        for c in range(nconst):
            if not used >> c & 1:
                for rest in rec(b + 1, used | 1 << c):
                    yield (c,) + rest
    yield from rec(0, 0)


def _iter_flat_substs(alphabet: Alphabet) -> Iterator[FlatSubst]:
    nv = len(alphabet.variables)
    for rgs in _set_partitions(nv):
        nblocks = max(rgs) + 1 if rgs else 0
        first = {}
        for v, b in enumerate(rgs):
            first.setdefault(b, v)
        for lab in _labellings(nblocks, len(alphabet.constants)):
            targets = tuple(first[b] if lab[b] is None else nv + lab[b] for b in rgs)
            yield FlatSubst(alphabet, targets)


def _member_key(s: FlatSubst):
    return (sum(1 for v, t in enumerate(s.targets) if t != v), s.targets)


CHUNK = 8


class SubCarrier:
    """All canonical flat substitutions over an alphabet, in a fixed order."""

    def __init__(self, alphabet: Alphabet, *, max_size: int = DEFAULT_MAX_CARRIER):
        self.alphabet = alphabet
        members = []
        for s in _iter_flat_substs(alphabet):
            members.append(s)
            if len(members) > max_size:
                raise SizeLimitError(
                    f"carrier exceeds the size cap of {max_size} substitutions")
        members.sort(key=_member_key)
        self.members: tuple[FlatSubst, ...] = tuple(members)
        self._index = {s: i for i, s in enumerate(members)}
        n = self.n = len(members)
        self.full = (1 << n) - 1
        self.eps_index = self._index[FlatSubst.empty(alphabet)]

        self._u = [[-1] * n for _ in range(n)]
        for i in range(n):
            row = self._u[i]
            for j in range(i, n):
                r = unify(members[i], members[j])
                if r is TAU:
                    k = -1
                else:
                    k = self._index.get(r)
                    if k is None:
                        raise CarrierError(
                            f"carrier not closed under unification: {members[i]} and {members[j]}")
                row[j] = k
                self._u[j][i] = k
        self._up = [0] * n
        self._down = [0] * n
        for i in range(n):
            for j in range(n):
                if instance_leq(members[i], members[j]):
                    self._up[i] |= 1 << j
                    self._down[j] |= 1 << i
        self._rows: dict[int, list[list[int]]] = {}
        self._tensor_cache: dict[tuple[int, int], int] = {}
        self._residual_cache: dict[tuple[int, int], int] = {}
        self.powerset = SubstPowerset(self)

    def __repr__(self):
        a = self.alphabet
        return (f"SubCarrier(VI={list(a.vars_of_interest)}, aux={list(a.aux_vars)}, "
                f"constants={list(a.constants)}, size={self.n})")

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self.members)

    def index(self, s: FlatSubst) -> int:
        try:
            return self._index[s]
        except KeyError:
            raise CarrierError(f"{s!r} is not a member of this carrier") from None

    def subst(self, bindings=()) -> FlatSubst:
        return self.members[self.index(FlatSubst.from_bindings(self.alphabet, bindings))]

    @property
    def eps(self) -> FlatSubst:
        return self.members[self.eps_index]

    def unify_index(self, i: int, j: int) -> int:
        return self._u[i][j]

    # -- set-level operations on masks --

    def _row(self, i: int) -> list[list[int]]:
        tabs = self._rows.get(i)
        if tabs is None:
            row = self._u[i]
            n = self.n
            tabs = []
            for base in range(0, n, CHUNK):
                bits = [1 << row[base + k] if base + k < n and row[base + k] >= 0 else 0
                        for k in range(CHUNK)]
                tab = [0] * 256
                for v in range(1, 256):
                    low = v & -v
                    tab[v] = tab[v ^ low] | bits[low.bit_length() - 1]
                tabs.append(tab)
            self._rows[i] = tabs
        return tabs

    def image_mask(self, i: int, mask: int) -> int:
        """Mask of ``{unify(member_i, y) | y in mask} - {tau}``."""
        tabs = self._row(i)
        out = 0
        c = 0
        while mask:
            out |= tabs[c][mask & 255]
            mask >>= 8
            c += 1
        return out

    def tensor_mask(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        key = (x, y) if x <= y else (y, x)
        out = self._tensor_cache.get(key)
        if out is None:
            a, b = key
            if a.bit_count() > b.bit_count():
                a, b = b, a
            out = 0
            for i in iter_bits(a):
                out |= self.image_mask(i, b)
            if len(self._tensor_cache) > 2_000_000:
                self._tensor_cache.clear()
            self._tensor_cache[key] = out
        return out

    def residual_mask(self, a: int, c: int) -> int:
        """Members ``t`` with ``unify(s, t)`` failing or landing in ``c`` for all ``s`` in ``a``."""
        key = (a, c)
        out = self._residual_cache.get(key)
        if out is None:
            out = 0
            notc = ~c
            for t in range(self.n):
                if not self.image_mask(t, a) & notc:
                    out |= 1 << t
            if len(self._residual_cache) > 2_000_000:
                self._residual_cache.clear()
            self._residual_cache[key] = out
        return out

    def down_mask(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= self._down[i]
        return out

    # -- SubstSet construction --

    def set(self, members: Iterable[FlatSubst] = ()) -> "SubstSet":
        m = 0
        for s in members:
            m |= 1 << self.index(s)
        return SubstSet(self, m)

    def from_mask(self, mask: int) -> "SubstSet":
        return SubstSet(self, mask)

    @property
    def top(self) -> "SubstSet":
        return SubstSet(self, self.full)

    @property
    def empty(self) -> "SubstSet":
        return SubstSet(self, 0)

    def where(self, pred) -> "SubstSet":
        m = 0
        for i, s in enumerate(self.members):
            if pred(s):
                m |= 1 << i
        return SubstSet(self, m)


@lru_cache(maxsize=32)
def _cached_carrier(alphabet: Alphabet, max_size: int = DEFAULT_MAX_CARRIER) -> SubCarrier:
    return SubCarrier(alphabet, max_size=max_size)


def enumerate_carrier(vars_of_interest: Sequence[str], aux_vars: Sequence[str] = (),
                      constants: Sequence[str] = (), *,
                      max_size: int = DEFAULT_MAX_CARRIER) -> SubCarrier:
    """Enumerate every canonical flat substitution over the given alphabets."""
    alphabet = Alphabet(tuple(vars_of_interest), tuple(aux_vars), tuple(constants))
    return _cached_carrier(alphabet, max_size)


def default_carrier() -> SubCarrier:
    return _cached_carrier(DEFAULT_ALPHABET, DEFAULT_MAX_CARRIER)


class SubstSet:
    """A subset of a carrier, stored as a bitmask over its members."""

    __slots__ = ("carrier", "mask")

    def __init__(self, carrier: SubCarrier, mask: int):
        if mask < 0 or mask > carrier.full:
            raise CarrierError("membership mask is wider than the carrier")
        self.carrier = carrier
        self.mask = mask

    def _same(self, other: "SubstSet"):
        if not isinstance(other, SubstSet):
            raise TypeError(f"expected a SubstSet, got {type(other).__name__}")
        if other.carrier is not self.carrier:
            raise AmbientMismatch("substitution sets are over different carriers")

    def __eq__(self, other):
        return (isinstance(other, SubstSet) and other.carrier is self.carrier
                and other.mask == self.mask)

    def __hash__(self):
        return hash(self.mask)

    def __len__(self):
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[FlatSubst]:
        members = self.carrier.members
        return (members[i] for i in iter_bits(self.mask))

    def __contains__(self, s) -> bool:
        i = self.carrier._index.get(s)
        return i is not None and bool(self.mask >> i & 1)

    def __or__(self, other):
        self._same(other)
        return SubstSet(self.carrier, self.mask | other.mask)

    def __and__(self, other):
        self._same(other)
        return SubstSet(self.carrier, self.mask & other.mask)

    def __sub__(self, other):
        self._same(other)
        return SubstSet(self.carrier, self.mask & ~other.mask)

    def __le__(self, other):
        self._same(other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other):
        return self <= other and self.mask != other.mask

    def __ge__(self, other):
        return other <= self

    def __gt__(self, other):
        return other < self

    def __repr__(self):
        return "{" + "; ".join(s.text() for s in self) + "}"

    def text(self) -> str:
        return repr(self)


# -- the powerset ambient -------------------------------------------------------


class SubstPowerset:
    """The lattice of subsets of a carrier, ordered by inclusion.

    Exposes the same surface as :class:`~condensing.lattice.FiniteLattice`
    except that its elements are never enumerated.
    """

    enumerable = False

    def __init__(self, carrier: SubCarrier):
        self.carrier = carrier

    def __repr__(self):
        return f"SubstPowerset({self.carrier!r})"

    def __len__(self):
        raise SizeLimitError(
            f"the powerset of a {self.carrier.n}-member carrier is not enumerated")

    def __contains__(self, x) -> bool:
        return isinstance(x, SubstSet) and x.carrier is self.carrier

    def check(self, x):
        if x not in self:
            raise CarrierError(f"{x!r} is not a set over this carrier")
        return x

    @property
    def top(self) -> SubstSet:
        return self.carrier.top

    @property
    def bottom(self) -> SubstSet:
        return self.carrier.empty

    def leq(self, a, b) -> bool:
        self.check(a), self.check(b)
        return a.mask & ~b.mask == 0

    def join(self, a, b):
        return self.check(a) | self.check(b)

    def meet(self, a, b):
        return self.check(a) & self.check(b)

    def lub(self, items):
        m = 0
        for x in items:
            m |= self.check(x).mask
        return SubstSet(self.carrier, m)

    def glb(self, items):
        m = self.carrier.full
        for x in items:
            m &= self.check(x).mask
        return SubstSet(self.carrier, m)

    def sort_key(self, x):
        # most abstract (largest) sets first
        return (-len(x), x.mask)

    def name(self, x) -> str:
        return describe_set(x)


# -- lifted unification and named sets -----------------------------------------------


def _pair_carrier(x: SubstSet, y: SubstSet) -> SubCarrier:
    if not isinstance(x, SubstSet) or not isinstance(y, SubstSet):
        raise TypeError("expected SubstSet arguments")
    if x.carrier is not y.carrier:
        raise AmbientMismatch("substitution sets are over different carriers")
    return x.carrier


def tensor_sets(x: SubstSet, y: SubstSet) -> SubstSet:
    """Lifted unification ``{unify(s, t) | s in x, t in y} - {tau}``."""
    carrier = _pair_carrier(x, y)
    return SubstSet(carrier, carrier.tensor_mask(x.mask, y.mask))


def residual_sets(a: SubstSet, c: SubstSet) -> SubstSet:
    """Linear implication ``a -o c``, scanned element-wise over the carrier."""
    carrier = _pair_carrier(a, c)
    return SubstSet(carrier, carrier.residual_mask(a.mask, c.mask))


def down_closure(s: SubstSet) -> SubstSet:
    return SubstSet(s.carrier, s.carrier.down_mask(s.mask))


def _pair_indices(carrier: SubCarrier, x: str, y: str) -> tuple[int, int]:
    if x == y:
        raise PreconditionError("independence needs two distinct variables")
    return carrier.alphabet.var_index(x), carrier.alphabet.var_index(y)


def independent_set(carrier: SubCarrier, x: str, y: str) -> SubstSet:
    """Substitutions under which ``x`` and ``y`` share no variable."""
    i, j = _pair_indices(carrier, x, y)
    nv = len(carrier.alphabet.variables)
    return carrier.where(lambda s: not (s.targets[i] == s.targets[j] and s.targets[i] < nv))


def ground_pair_set(carrier: SubCarrier, x: str, y: str) -> SubstSet:
    """Substitutions binding ``x`` or ``y`` to a ground term."""
    i, j = _pair_indices(carrier, x, y)
    nv = len(carrier.alphabet.variables)
    return carrier.where(lambda s: s.targets[i] >= nv or s.targets[j] >= nv)


def ground_bindings_set(carrier: SubCarrier) -> SubstSet:
    """Substitutions all of whose bindings are ground."""
    nv = len(carrier.alphabet.variables)
    return carrier.where(
        lambda s: all(t == v or t >= nv for v, t in enumerate(s.targets)))


def named_sets(carrier: SubCarrier) -> dict[str, SubstSet]:
    """The sets used by the pair-sharing examples, keyed by their expression text."""
    vi = carrier.alphabet.vars_of_interest
    if len(vi) != 2:
        raise PreconditionError(
            f"named sets need exactly two variables of interest, got {len(vi)}")
    x, y = vi
    g = ground_pair_set(carrier, x, y)
    eg = ground_bindings_set(carrier)
    return {
        "TOP": carrier.top,
        f"I({x},{y})": independent_set(carrier, x, y),
        f"G({x},{y})": g,
        "EG": eg,
        f"G({x},{y})+EG": g | eg,
    }


def scope_sets(carrier: SubCarrier) -> dict[str, SubstSet]:
    """Every named set expressible over the carrier: TOP, EMPTY, EG and I/G pairs."""
    out = {"TOP": carrier.top, "EMPTY": carrier.empty}
    vs = carrier.alphabet.vars_of_interest
    for x, y in combinations(vs, 2):
        out[f"I({x},{y})"] = independent_set(carrier, x, y)
        out[f"G({x},{y})"] = ground_pair_set(carrier, x, y)
    out["EG"] = ground_bindings_set(carrier)
    return out


def describe_set(s: SubstSet) -> str:
    """Best-effort name: a scope set, a union of two of them, else a listing."""
    names = scope_sets(s.carrier)
    for name, v in names.items():
        if v == s:
            return name
    items = [(k, v) for k, v in names.items() if k not in ("TOP", "EMPTY")]
    unions = list(items)
    for (k1, v1), (k2, v2) in combinations(items, 2):
        if (v1 | v2) == s:
            return f"{k1}+{k2}"
        unions.append((f"{k1}+{k2}", v1 | v2))
    # a named set plus a handful of stragglers still reads better than a listing
    best = None
    for k, v in unions:
        extra = len(s) - len(v)
        if v and v <= s and 0 < extra <= DESCRIBE_EXTRA and (best is None or extra < best[0]):
            best = (extra, k, v)
    if best is not None:
        return f"{best[1]}+{s - best[2]!r}"
    return repr(s)


def psh_domain(carrier: SubCarrier, vars_of_interest: Sequence[str] | None = None):
    """Pair-sharing domain: the Moore closure of all independence sets."""
    from .domains import moore_closure
    vi = tuple(vars_of_interest or carrier.alphabet.vars_of_interest)
    if len(vi) < 2:
        raise PreconditionError("pair-sharing needs at least two variables of interest")
    gens = [independent_set(carrier, x, y) for x, y in combinations(vi, 2)]
    return moore_closure(carrier.powerset, gens)


def psh_alpha(carrier: SubCarrier, vars_of_interest: Sequence[str] | None,
              theta: SubstSet) -> SubstSet:
    """Abstraction into the pair-sharing domain: meet of the I_xy containing ``theta``."""
    vi = tuple(vars_of_interest or carrier.alphabet.vars_of_interest)
    out = carrier.top
    for x, y in combinations(vi, 2):
        ixy = independent_set(carrier, x, y)
        if theta <= ixy:
            out = out & ixy
    return out


def sample_sets(carrier: SubCarrier, k: int = 64, seed: int = 0) -> list[SubstSet]:
    """Singletons, every scope set, and ``k`` seeded random subsets, without repeats."""
    seen = set()
    out = []

    def add(s):
        if s.mask not in seen:
            seen.add(s.mask)
            out.append(s)

    for i in range(carrier.n):
        add(SubstSet(carrier, 1 << i))
    for s in scope_sets(carrier).values():
        add(s)
    rng = random.Random(seed)
    for _ in range(k):
        add(SubstSet(carrier, rng.getrandbits(carrier.n)))
    return out


def parse_carrier_config(text: str, *, max_size: int = DEFAULT_MAX_CARRIER) -> SubCarrier:
    """Read ``vars_of_interest:``, ``aux_vars:`` and ``constants:`` lines."""
    from .errors import ParseError
    from .lattice import iter_directives
    fields = {"vars_of_interest": None, "aux_vars": (), "constants": ()}
    for no, key, value, col in iter_directives(text):
        if key not in fields:
            raise ParseError(f"unknown directive {key!r}", no, 1)
        fields[key] = tuple(value.replace(",", " ").split())
    if not fields["vars_of_interest"]:
        raise ParseError("missing 'vars_of_interest:' directive")
    try:
        return enumerate_carrier(fields["vars_of_interest"], fields["aux_vars"],
                                 fields["constants"], max_size=max_size)
    except PreconditionError as exc:
        raise ParseError(str(exc)) from None


def format_carrier_config(carrier: SubCarrier) -> str:
    a = carrier.alphabet
    return (f"vars_of_interest: {' '.join(a.vars_of_interest)}\n"
            f"aux_vars: {' '.join(a.aux_vars)}\n"
            f"constants: {' '.join(a.constants)}\n")
