"""Domain refinement: the R_F operator, lifted implication, complete and weak-complete shells."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from .domains import (AbstractDomain, _same_ambient, identity_domain,
                      moore_closure, top_domain)
from .errors import (AmbientMismatch, IterationCapError, LatticeError,
                     SizeLimitError)

DEFAULT_ITERATION_CAP = 10000


@dataclass(frozen=True)
class TensorSection:
    """The map ``x -> x (x) y``."""
    Q: Any
    y: Any

    def __call__(self, x):
        return self.Q.tensor(x, self.y)


@dataclass
class FunctionFamily:
    ambient: Any
    functions: list = field(default_factory=list)

    def __len__(self):
        return len(self.functions)

    def __iter__(self):
        return iter(self.functions)

    @classmethod
    def tensor_sections(cls, Q, ys=None) -> "FunctionFamily":
        """``{x -> x (x) y | y in ys}``; all ambient elements when ``ys`` is None."""
        if ys is None:
            if not Q.ambient.enumerable:
                raise SizeLimitError("tensor sections over every set of the powerset are not enumerated")
            ys = Q.ambient.elements
        return cls(Q.ambient, [TensorSection(Q, y) for y in ys])

    @classmethod
    def from_domain(cls, Q, rho: AbstractDomain) -> "FunctionFamily":
        if rho.ambient is not Q.ambient:
            raise AmbientMismatch("domain and quantale have different ambients")
        return cls.tensor_sections(Q, rho.elements)


@dataclass
class Verdict:
    """A yes/no answer with the least witnessing pair and both sides on failure."""
    holds: bool
    witness: tuple | None = None
    lhs: Any = None
    rhs: Any = None
    detail: str = ""

    def __bool__(self):
        return self.holds


@dataclass
class ShellRun:
    domain: AbstractDomain
    iterates: list
    iterations: int
    stabilized_at: int


def _require_explicit(ambient, what: str):
    if not ambient.enumerable:
        raise SizeLimitError(f"{what} needs an explicit ambient; the substitution powerset is refused")


def rf_operator(F: FunctionFamily, rho: AbstractDomain) -> AbstractDomain:
    """Moore closure of the maximal ``x`` with ``f(x) <= a``, over ``f`` in F and ``a`` in rho."""
    L = rho.ambient
    if F.ambient is not L:
        raise AmbientMismatch("function family and domain have different ambients")
    _require_explicit(L, "rf_operator")
    gens = []
    images = [[f(x) for x in L.elements] for f in F.functions]
    for img in images:
        for a in rho.elements:
            below = [x for x, fx in zip(L.elements, img) if L.leq(fx, a)]
            gens.extend(L.maximal_elements(below))
    return moore_closure(L, gens)


def lin_arrow_domain(Q, A: AbstractDomain, B: AbstractDomain) -> AbstractDomain:
    """``A -o^ B``: Moore closure of every residual ``a -o b``."""
    amb = _same_ambient([A, B])
    if amb is not Q.ambient:
        raise AmbientMismatch("domains and quantale have different ambients")
    return moore_closure(amb, [Q.residual(a, b) for a in A.elements for b in B.elements])


def _kleene_domains(step: Callable, start: AbstractDomain, cap: int) -> ShellRun:
    iterates = [start]
    x = start
    for k in range(cap):
        nxt = step(x)
        if nxt == x:
            return ShellRun(x, iterates, k + 1, k)
        iterates.append(nxt)
        x = nxt
    raise IterationCapError(f"shell iteration did not stabilize within {cap} steps")


def complete_shell_run(Q, A: AbstractDomain, *, cap: int = DEFAULT_ITERATION_CAP) -> ShellRun:
    """Kleene iteration of ``X -> A meet (C -o^ X)`` from the top domain.

    The result is checked against the closed form ``C -o^ A`` and the
    sequence must settle by its second iterate.
    """
    amb = Q.ambient
    _require_explicit(amb, "complete_shell")
    if A.ambient is not amb:
        raise AmbientMismatch("domain and quantale have different ambients")
    C = identity_domain(amb)
    run = _kleene_domains(
        lambda X: moore_closure(amb, A.fixpoints | lin_arrow_domain(Q, C, X).fixpoints),
        top_domain(amb), cap)
    closed = lin_arrow_domain(Q, C, A)
    if run.domain != closed:
        raise LatticeError("complete shell iteration disagrees with C -o^ A; is Q a quantale?")
    if run.stabilized_at > 2:
        raise LatticeError(
            f"complete shell iteration took {run.stabilized_at} steps; expected at most 2")
    return run


def complete_shell(Q, A: AbstractDomain, **kw) -> AbstractDomain:
    return complete_shell_run(Q, A, **kw).domain


def shell_closure_map(Q, A: AbstractDomain, c):
    """Glb over ``a`` in A of ``(c -o a) -o a``."""
    amb = Q.ambient
    _require_explicit(amb, "shell_closure_map")
    amb.check(c)
    return amb.glb(Q.residual(Q.residual(c, a), a) for a in A.elements)


def weak_complete_shell_run(Q, A: AbstractDomain, *, cap: int = DEFAULT_ITERATION_CAP,
                            max_fixpoints: int | None = None) -> ShellRun:
    """Kleene iteration of ``X -> A meet X meet (X -o^ X)`` from the top domain.

    ``max_fixpoints`` bounds the size of the iterates; going past it raises
    :class:`SizeLimitError`.
    """
    amb = Q.ambient
    if A.ambient is not amb:
        raise AmbientMismatch("domain and quantale have different ambients")

    def step(X):
        res = [Q.residual(a, b) for a in X.elements for b in X.elements]
        out = moore_closure(amb, A.fixpoints | X.fixpoints | frozenset(res))
        if max_fixpoints is not None and len(out) > max_fixpoints:
            raise SizeLimitError(f"weak-complete shell iterate has {len(out)} > {max_fixpoints} fixpoints")
        return out

    return _kleene_domains(step, top_domain(amb), cap)


def weak_complete_shell(Q, A: AbstractDomain, **kw) -> AbstractDomain:
    return weak_complete_shell_run(Q, A, **kw).domain


def is_complete(Q, rho: AbstractDomain) -> Verdict:
    """``rho(rho x (x) rho y) = rho(x (x) y)`` for every ambient pair.

    The one-sided form ``rho(rho x (x) y) = rho(x (x) y)`` is decided too and
    must agree.
    """
    amb = Q.ambient
    _require_explicit(amb, "is_complete")
    if rho.ambient is not amb:
        raise AmbientMismatch("domain and quantale have different ambients")
    t = Q.tensor
    els = amb.elements
    first = None
    one_sided = True
    for x in els:
        rx = rho(x)
        for y in els:
            exact = rho(t(x, y))
            if one_sided and rho(t(rx, y)) != exact:
                one_sided = False
            if first is None:
                both = rho(t(rx, rho(y)))
                if both != exact:
                    first = Verdict(False, (x, y), both, exact,
                                    "rho(rho x (x) rho y) != rho(x (x) y)")
    holds = first is None
    if holds != one_sided:
        raise LatticeError("two-sided and one-sided completeness disagree; is Q a quantale?")
    return first if first is not None else Verdict(True)


def is_weak_complete(Q, rho: AbstractDomain) -> Verdict:
    """``rho = rho meet (rho -o^ rho)``: every residual of fixpoints is a fixpoint."""
    if rho.ambient is not Q.ambient:
        raise AmbientMismatch("domain and quantale have different ambients")
    for a in rho.elements:
        for b in rho.elements:
            r = Q.residual(a, b)
            if r not in rho.fixpoints:
                return Verdict(False, (a, b), r, rho(r),
                               "a -o b is not a fixpoint")
    return Verdict(True)


def is_weak_complete_direct(Q, rho: AbstractDomain) -> Verdict:
    """``rho(rho x (x) rho y) = rho(rho x (x) y)`` by enumerating ambient pairs."""
    amb = Q.ambient
    _require_explicit(amb, "is_weak_complete_direct")
    t = Q.tensor
    for x in amb.elements:
        rx = rho(x)
        for y in amb.elements:
            lhs = rho(t(rx, rho(y)))
            rhs = rho(t(rx, y))
            if lhs != rhs:
                return Verdict(False, (x, y), lhs, rhs, "rho(rho x (x) rho y) != rho(rho x (x) y)")
    return Verdict(True)
