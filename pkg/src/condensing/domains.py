"""Abstract domains as upper closure operators, kept as meet-closed fixpoint sets.

The ambient is either a :class:`~condensing.lattice.FiniteLattice` or the
powerset of a substitution carrier; both expose ``top``, ``leq``, ``meet``,
``glb``, ``check`` and ``sort_key``.
"""

from __future__ import annotations

import logging
from itertools import combinations
from typing import Iterable

from .errors import AmbientMismatch, LatticeError, ParseError, SizeLimitError
from .lattice import FiniteLattice, iter_bits, iter_directives, tokens_with_columns
from .subst import SubstPowerset, SubstSet

log = logging.getLogger(__name__)


class AbstractDomain:
    """An upper closure operator identified with its set of fixpoints."""

    def __init__(self, ambient, fixpoints: Iterable, *, validate: bool = True):
        self.ambient = ambient
        fps = frozenset(ambient.check(x) for x in fixpoints)
        if validate:
            if ambient.top not in fps:
                raise LatticeError("the fixpoints of a closure must contain top")
            items = list(fps)
            for a, b in combinations(items, 2):
                if ambient.meet(a, b) not in fps:
                    raise LatticeError(
                        f"fixpoints are not meet-closed: {ambient.name(a)} and "
                        f"{ambient.name(b)}")
        self.fixpoints = fps
        self.elements = tuple(sorted(fps, key=ambient.sort_key))
        self._cache: dict = {}
        self._masks = None
        if isinstance(ambient, SubstPowerset):
            self._masks = [x.mask for x in self.elements]

    def __eq__(self, other):
        return (isinstance(other, AbstractDomain) and other.ambient is self.ambient
                and other.fixpoints == self.fixpoints)

    def __hash__(self):
        return hash(self.fixpoints)

    def __len__(self):
        return len(self.fixpoints)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.fixpoints

    def __repr__(self):
        return "{" + ", ".join(self.ambient.name(x) for x in self.elements) + "}"

    def apply(self, c):
        """The closure of ``c``: meet of the fixpoints above it."""
        got = self._cache.get(c)
        if got is not None:
            return got
        amb = self.ambient
        if self._masks is not None:
            amb.check(c)
            cm = c.mask
            m = amb.carrier.full
            for fm in self._masks:
                if cm & ~fm == 0:
                    m &= fm
            out = SubstSet(c.carrier, m)
        else:
            amb.check(c)
            out = amb.glb(y for y in self.elements if amb.leq(c, y))
        if len(self._cache) < 1_000_000:
            self._cache[c] = out
        return out

    __call__ = apply


def _same_ambient(domains):
    amb = domains[0].ambient
    for d in domains[1:]:
        if d.ambient is not amb:
            raise AmbientMismatch("domains are over different ambient lattices")
    return amb


def moore_closure(ambient, xs: Iterable) -> AbstractDomain:
    """Most abstract domain containing ``xs``: close ``xs + {top}`` under binary meets."""
    if isinstance(ambient, SubstPowerset):
        return _moore_masks(ambient, xs)
    out = {ambient.top}
    work = []
    for x in xs:
        ambient.check(x)
        if x not in out:
            out.add(x)
            work.append(x)
    while work:
        x = work.pop()
        for y in list(out):
            m = ambient.meet(x, y)
            if m not in out:
                out.add(m)
                work.append(m)
    return AbstractDomain(ambient, out, validate=False)


def _moore_masks(ambient: SubstPowerset, xs) -> AbstractDomain:
    carrier = ambient.carrier
    out = {carrier.full}
    work = []
    for x in xs:
        ambient.check(x)
        if x.mask not in out:
            out.add(x.mask)
            work.append(x.mask)
    while work:
        x = work.pop()
        for y in list(out):
            m = x & y
            if m not in out:
                out.add(m)
                work.append(m)
    return AbstractDomain(ambient, (SubstSet(carrier, m) for m in out), validate=False)


def apply_closure(rho: AbstractDomain, c):
    return rho.apply(c)


def domain_leq(rho1: AbstractDomain, rho2: AbstractDomain) -> bool:
    """``rho1`` is at least as precise as ``rho2``."""
    _same_ambient([rho1, rho2])
    return rho2.fixpoints <= rho1.fixpoints


def top_domain(ambient) -> AbstractDomain:
    return AbstractDomain(ambient, [ambient.top], validate=False)


def identity_domain(ambient) -> AbstractDomain:
    if not ambient.enumerable:
        raise SizeLimitError("the identity closure on a substitution powerset is not enumerated")
    return AbstractDomain(ambient, ambient.elements, validate=False)


def reduced_product(domains: list[AbstractDomain], ambient=None) -> AbstractDomain:
    """Glb in the lattice of closures: Moore closure of the union of fixpoints."""
    domains = list(domains)
    if not domains:
        if ambient is None:
            raise ValueError("an ambient is required for an empty reduced product")
        return top_domain(ambient)
    amb = _same_ambient(domains if ambient is None else domains + [top_domain(ambient)])
    union = set()
    for d in domains:
        union |= d.fixpoints
    return moore_closure(amb, union)


def domain_join(domains: list[AbstractDomain], ambient=None) -> AbstractDomain:
    """Lub in the lattice of closures: common fixpoints."""
    domains = list(domains)
    if not domains:
        if ambient is None:
            raise ValueError("an ambient is required for an empty join")
        return identity_domain(ambient)
    amb = _same_ambient(domains)
    common = frozenset.intersection(*(d.fixpoints for d in domains))
    return AbstractDomain(amb, common, validate=False)


def enumerate_domains(lattice: FiniteLattice, max_size: int = 12) -> list[AbstractDomain]:
    """Every closure on a small explicit lattice, via its meet-closed fixpoint set."""
    n = len(lattice)
    if n > max_size:
        raise SizeLimitError(f"refusing to enumerate closures on {n} > {max_size} elements")
    top = lattice._top_i
    others = [i for i in range(n) if i != top]
    meet = lattice._imeet
    out = []
    for bits in range(1 << len(others)):
        mask = 1 << top
        for k, i in enumerate(others):
            if bits >> k & 1:
                mask |= 1 << i
        ok = True
        members = list(iter_bits(mask))
        for a, b in combinations(members, 2):
            if not mask >> meet(a, b) & 1:
                ok = False
                break
        if ok:
            out.append(AbstractDomain(lattice, [lattice.elements[i] for i in members],
                                      validate=False))
    return out


def parse_domain(text: str, ambient) -> AbstractDomain:
    """Parse ``fixpoints: ...`` lines; the listed elements are Moore-closed.

    A missing top is added with a warning, as is any meet the listing omits.
    """
    listed = []
    found = False
    for no, key, value, col in iter_directives(text):
        if key != "fixpoints":
            raise ParseError(f"unknown directive {key!r}", no, 1)
        found = True
        if isinstance(ambient, SubstPowerset):
            from .syntax import parse_set_list
            listed.extend(parse_set_list(value, ambient.carrier, line=no, col=col))
        else:
            by_name = {ambient.name(x): x for x in ambient.elements}
            for tok, c in tokens_with_columns(value, col):
                if tok not in by_name:
                    raise ParseError(f"undeclared element {tok!r}", no, c)
                listed.append(by_name[tok])
    if not found:
        raise ParseError("missing 'fixpoints:' directive")
    return domain_from_listing(ambient, listed)


def domain_from_listing(ambient, listed) -> AbstractDomain:
    if ambient.top not in listed:
        log.warning("top element missing from domain listing; added")
    dom = moore_closure(ambient, listed)
    extra = len(dom.fixpoints - set(listed) - {ambient.top})
    if extra:
        log.warning("domain listing was not meet-closed; %d meet(s) added", extra)
    return dom


def format_domain(rho: AbstractDomain) -> str:
    amb = rho.ambient
    return "fixpoints: " + " ".join(amb.name(x) for x in rho.elements) + "\n"
