"""Explicit finite complete lattices.

Elements are arbitrary hashable objects; each one gets a stable integer
index (its position in the input sequence) and every set-valued result is
reported in index order.  Internally subsets are int bitmasks over indices.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import CarrierError, LatticeError, ParseError

DEFAULT_TABLE_LIMIT = 4096


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FiniteLattice:
    """A finite complete lattice given by its carrier and order relation.

    ``leq`` is either a predicate ``leq(a, b)`` or an iterable of pairs
    that must already be reflexive and transitive; use
    :meth:`from_pairs` to have the closure computed.
    """

    enumerable = True

    def __init__(self, elements: Sequence[Hashable], leq, *,
                 names: Mapping | None = None,
                 table_limit: int = DEFAULT_TABLE_LIMIT):
        self.elements = tuple(elements)
        self._index = {}
        for i, x in enumerate(self.elements):
            if x in self._index:
                raise LatticeError(f"duplicate element {x!r}")
            self._index[x] = i
        n = len(self.elements)
        if n == 0:
            raise LatticeError("a complete lattice needs at least one element")
        self._names = dict(names) if names else {}

        if callable(leq):
            rel = lambda i, j: bool(leq(self.elements[i], self.elements[j]))
            up = [0] * n
            for i in range(n):
                for j in range(n):
                    if rel(i, j):
                        up[i] |= 1 << j
        else:
            up = [0] * n
            for a, b in leq:
                up[self._lookup(a)] |= 1 << self._lookup(b)
        self._up = up
        self._down = [0] * n
        for i in range(n):
            for j in iter_bits(up[i]):
                self._down[j] |= 1 << i
        self._full = (1 << n) - 1
        self._validate_order()

        bottom = self._glb_mask(self._full)
        top = self._lub_mask(self._full)
        if bottom is None:
            raise LatticeError("no bottom element")
        if top is None:
            raise LatticeError("no top element")
        self._bottom_i, self._top_i = bottom, top

        self._join = self._meet = None
        tabulate = n <= table_limit
        if tabulate:
            self._join = [[0] * n for _ in range(n)]
            self._meet = [[0] * n for _ in range(n)]
        for i, j in combinations(range(n), 2):
            jn = self._lub_mask((1 << i) | (1 << j))
            if jn is None:
                raise LatticeError(
                    f"no least upper bound for pair ({self.name(self.elements[i])}, "
                    f"{self.name(self.elements[j])})")
            mt = self._glb_mask((1 << i) | (1 << j))
            if mt is None:
                raise LatticeError(
                    f"no greatest lower bound for pair ({self.name(self.elements[i])}, "
                    f"{self.name(self.elements[j])})")
            if tabulate:
                self._join[i][j] = self._join[j][i] = jn
                self._meet[i][j] = self._meet[j][i] = mt
        if tabulate:
            for i in range(n):
                self._join[i][i] = self._meet[i][i] = i

    @classmethod
    def from_pairs(cls, elements, pairs, **kwargs) -> "FiniteLattice":
        """Build a lattice from generating pairs, closing them reflexively and transitively."""
        elements = tuple(elements)
        index = {x: i for i, x in enumerate(elements)}
        n = len(elements)
        up = [1 << i for i in range(n)]
        for a, b in pairs:
            if a not in index or b not in index:
                missing = a if a not in index else b
                raise CarrierError(f"{missing!r} is not an element")
            up[index[a]] |= 1 << index[b]
        changed = True
        while changed:
            changed = False
            for i in range(n):
                acc = up[i]
                for j in iter_bits(up[i]):
                    acc |= up[j]
                if acc != up[i]:
                    up[i] = acc
                    changed = True
        rel = [(elements[i], elements[j]) for i in range(n) for j in iter_bits(up[i])]
        return cls(elements, rel, **kwargs)

    def _validate_order(self):
        n = len(self.elements)
        nm = lambda i: self.name(self.elements[i])
        for i in range(n):
            if not self._up[i] >> i & 1:
                raise LatticeError(f"order is not reflexive at {nm(i)}")
        for i in range(n):
            for j in iter_bits(self._up[i]):
                if j != i and self._up[j] >> i & 1:
                    raise LatticeError(
                        f"order is not antisymmetric: {nm(i)}<={nm(j)} and {nm(j)}<={nm(i)}")
                missing = self._up[j] & ~self._up[i]
                if missing:
                    k = next(iter_bits(missing))
                    raise LatticeError(
                        f"order is not transitive: {nm(i)}<={nm(j)} and "
                        f"{nm(j)}<={nm(k)} but not {nm(i)}<={nm(k)}")

    # -- index-level primitives -------------------------------------------

    def _lookup(self, x) -> int:
        try:
            return self._index[x]
        except (KeyError, TypeError):
            raise CarrierError(f"{x!r} is not an element of this lattice") from None

    def _lub_mask(self, mask: int):
        ub = self._full
        for i in iter_bits(mask):
            ub &= self._up[i]
        for u in iter_bits(ub):
            if ub & ~self._up[u] == 0:
                return u
        return None

    def _glb_mask(self, mask: int):
        lb = self._full
        for i in iter_bits(mask):
            lb &= self._down[i]
        for u in iter_bits(lb):
            if lb & ~self._down[u] == 0:
                return u
        return None

    def _mask(self, items: Iterable) -> int:
        m = 0
        for x in items:
            m |= 1 << self._lookup(x)
        return m

    def _ijoin(self, i: int, j: int) -> int:
        if self._join is not None:
            return self._join[i][j]
        return self._lub_mask((1 << i) | (1 << j))

    def _imeet(self, i: int, j: int) -> int:
        if self._meet is not None:
            return self._meet[i][j]
        return self._glb_mask((1 << i) | (1 << j))

    def _ileq(self, i: int, j: int) -> bool:
        return bool(self._up[i] >> j & 1)

    # -- public API ---------------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        try:
            return x in self._index
        except TypeError:
            return False

    def __repr__(self):
        return f"FiniteLattice({len(self)} elements)"

    def index(self, x) -> int:
        return self._lookup(x)

    def sort_key(self, x) -> int:
        return self._lookup(x)

    def name(self, x) -> str:
        return self._names.get(x, str(x))

    def check(self, x):
        self._lookup(x)
        return x

    @property
    def top(self):
        return self.elements[self._top_i]

    @property
    def bottom(self):
        return self.elements[self._bottom_i]

    def leq(self, a, b) -> bool:
        return self._ileq(self._lookup(a), self._lookup(b))

    def join(self, a, b):
        return self.elements[self._ijoin(self._lookup(a), self._lookup(b))]

    def meet(self, a, b):
        return self.elements[self._imeet(self._lookup(a), self._lookup(b))]

    def lub(self, items: Iterable):
        """Least upper bound of a (possibly empty) collection of elements."""
        acc = self._bottom_i
        for x in items:
            acc = self._ijoin(acc, self._lookup(x))
        return self.elements[acc]

    def glb(self, items: Iterable):
        acc = self._top_i
        for x in items:
            acc = self._imeet(acc, self._lookup(x))
        return self.elements[acc]

    def maximal_elements(self, items: Iterable) -> list:
        mask = self._mask(items)
        out = []
        for i in iter_bits(mask):
            # i is maximal when nothing else in the set lies above it
            if mask & self._up[i] == 1 << i:
                out.append(self.elements[i])
        return out

    def up_set(self, x) -> list:
        return [self.elements[j] for j in iter_bits(self._up[self._lookup(x)])]

    def down_set(self, x) -> list:
        return [self.elements[j] for j in iter_bits(self._down[self._lookup(x)])]

    def sorted(self, items: Iterable) -> list:
        return [self.elements[i] for i in iter_bits(self._mask(items))]


class MonotoneMap:
    """A total monotone self-map of a finite lattice, stored as a table."""

    def __init__(self, lattice: FiniteLattice, table: Mapping):
        self.lattice = lattice
        self._t = []
        for x in lattice.elements:
            if x not in table:
                raise CarrierError(f"map is undefined on {lattice.name(x)}")
            self._t.append(lattice.index(table[x]))
        for i in range(len(lattice)):
            for j in iter_bits(lattice._up[i]):
                if not lattice._ileq(self._t[i], self._t[j]):
                    a, b = lattice.elements[i], lattice.elements[j]
                    raise LatticeError(
                        f"map is not monotone: {lattice.name(a)}<={lattice.name(b)} "
                        f"but f({lattice.name(a)}) is not below f({lattice.name(b)})")

    @classmethod
    def from_function(cls, lattice: FiniteLattice, fn: Callable) -> "MonotoneMap":
        return cls(lattice, {x: fn(x) for x in lattice.elements})

    def __call__(self, x):
        return self.lattice.elements[self._t[self.lattice.index(x)]]

    @property
    def table(self) -> dict:
        els = self.lattice.elements
        return {els[i]: els[j] for i, j in enumerate(self._t)}


def kleene_lfp(f: MonotoneMap):
    """Least fixpoint of ``f`` as the limit of the upper Kleene sequence from bottom."""
    x = f.lattice.bottom
    while True:
        y = f(x)
        if y == x:
            return x
        x = y


def kleene_gfp(f: MonotoneMap):
    x = f.lattice.top
    while True:
        y = f(x)
        if y == x:
            return x
        x = y


# -- constructors -------------------------------------------------------------

def powerset_lattice(atoms: Iterable) -> FiniteLattice:
    """Subsets of ``atoms`` ordered by inclusion, listed by size then atom order."""
    atoms = list(atoms)
    subsets = []
    for k in range(len(atoms) + 1):
        subsets.extend(frozenset(c) for c in combinations(atoms, k))
    names = {s: "{" + ",".join(str(a) for a in atoms if a in s) + "}" for s in subsets}
    return FiniteLattice(subsets, lambda a, b: a <= b, names=names)


def chain_lattice(n: int) -> FiniteLattice:
    """The chain 0 < 1 < ... < n-1."""
    return FiniteLattice(range(n), lambda a, b: a <= b)


# -- text format ----------------------------------------------------------------

def iter_directives(text: str, comment: str = "#"):
    """Yield ``(line_no, key, value, value_col)`` for each ``key: value`` line."""
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(comment, 1)[0]
        if not line.strip():
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", no, len(raw) - len(raw.lstrip()) + 1)
        key, value = line.split(":", 1)
        col = len(key) + 2 + (len(value) - len(value.lstrip()))
        yield no, key.strip(), value.strip(), col


def tokens_with_columns(value: str, start_col: int):
    col = start_col
    rest = value
    while rest:
        stripped = rest.lstrip()
        col += len(rest) - len(stripped)
        rest = stripped
        if not rest:
            break
        tok = rest.split(None, 1)[0]
        yield tok, col
        col += len(tok)
        rest = rest[len(tok):]


def parse_lattice_directives(directives, *, extra_keys=()):
    """Consume ``elements:``/``order:`` directives; return (lattice, leftovers)."""
    elements: list[str] = []
    pairs = []
    leftovers = []
    for no, key, value, col in directives:
        if key == "elements":
            for tok, c in tokens_with_columns(value, col):
                if tok in elements:
                    raise ParseError(f"element {tok!r} declared twice", no, c)
                elements.append(tok)
        elif key == "order":
            for tok, c in tokens_with_columns(value, col):
                if "<=" not in tok:
                    raise ParseError(f"malformed order pair {tok!r}, expected a<=b", no, c)
                a, b = tok.split("<=", 1)
                for name, off in ((a, 0), (b, len(a) + 2)):
                    if not name:
                        raise ParseError(f"malformed order pair {tok!r}", no, c)
                    if name not in elements:
                        raise ParseError(f"undeclared element {name!r}", no, c + off)
                pairs.append((a, b, no))
        elif key in extra_keys:
            leftovers.append((no, key, value, col))
        else:
            raise ParseError(f"unknown directive {key!r}", no, 1)
    if not elements:
        raise ParseError("missing 'elements:' directive")
    try:
        lattice = FiniteLattice.from_pairs(elements, [(a, b) for a, b, _ in pairs])
    except LatticeError as exc:
        raise ParseError(f"not a complete lattice: {exc}") from exc
    return lattice, leftovers


def parse_lattice(text: str) -> FiniteLattice:
    lattice, _ = parse_lattice_directives(iter_directives(text))
    return lattice


def format_lattice(lattice: FiniteLattice) -> str:
    """Render in the text format, emitting only covering pairs."""
    lines = ["elements: " + " ".join(lattice.name(x) for x in lattice.elements)]
    covers = []
    n = len(lattice)
    for i in range(n):
        above = lattice._up[i] & ~(1 << i)
        for j in iter_bits(above):
            between = above & lattice._down[j] & ~(1 << j)
            if not between:
                covers.append(f"{lattice.name(lattice.elements[i])}<={lattice.name(lattice.elements[j])}")
    if covers:
        lines.append("order: " + " ".join(covers))
    return "\n".join(lines) + "\n"
