import pytest
from hypothesis import given, settings, strategies as st

from condensing.domains import (AbstractDomain, apply_closure, domain_join,
                                domain_leq, enumerate_domains, format_domain,
                                identity_domain, moore_closure, parse_domain,
                                reduced_product, top_domain)
from condensing.errors import LatticeError
from condensing.lattice import chain_lattice, powerset_lattice
from condensing.subst import default_carrier, named_sets, tensor_sets

B4 = powerset_lattice(["p", "q"])
P, Q = frozenset("p"), frozenset("q")
EMPTY, PQ = frozenset(), frozenset("pq")

C = default_carrier()
N = named_sets(C)
TOP, IXY, GXY, GE = N["TOP"], N["I(X,Y)"], N["G(X,Y)"], N["G(X,Y)+EG"]
AMB = C.powerset


def test_moore_closure_examples():
    assert moore_closure(B4, []).fixpoints == {PQ}
    assert moore_closure(B4, [P, Q]).fixpoints == {EMPTY, P, Q, PQ}
    assert moore_closure(AMB, [IXY]).fixpoints == {TOP, IXY}


def test_apply_closure_pair_sharing():
    rho = moore_closure(AMB, [IXY])
    assert apply_closure(rho, tensor_sets(IXY, IXY)) == TOP
    assert apply_closure(rho, TOP) == TOP
    assert apply_closure(rho, IXY) == IXY


def test_domain_order():
    rho = moore_closure(AMB, [IXY])
    refined = moore_closure(AMB, [IXY, GXY, GE])
    assert domain_leq(refined, rho)
    assert domain_leq(rho, rho)
    assert not domain_leq(top_domain(AMB), rho)


def test_reduced_product_and_join():
    rho = moore_closure(AMB, [IXY])
    other = moore_closure(AMB, [GXY, GE])
    assert reduced_product([rho, other]).fixpoints == {TOP, IXY, GXY, GE}
    assert reduced_product([rho, top_domain(AMB)]) == rho
    assert reduced_product([rho, rho]) == rho
    assert reduced_product([], AMB) == top_domain(AMB)
    assert domain_join([rho, moore_closure(AMB, [GXY])]) == top_domain(AMB)
    assert domain_join([rho, rho]) == rho
    d = moore_closure(B4, [P])
    assert domain_join([d, identity_domain(B4)]) == d


def test_not_meet_closed_rejected():
    with pytest.raises(LatticeError):
        AbstractDomain(B4, [P, Q, PQ])


def test_parse_domain_adds_missing_meets():
    L = chain_lattice(3)
    d = parse_domain("fixpoints: 0\n", L)
    assert d.fixpoints == {0, 2}
    assert parse_domain(format_domain(d), L) == d


def test_subst_domain_roundtrip():
    rho = moore_closure(AMB, [IXY, GXY, GE])
    assert parse_domain(format_domain(rho), AMB) == rho


def test_enumerate_domains_b4():
    doms = enumerate_domains(B4)
    # of the 8 subsets of {bot, p, q} only {p, q} fails to be meet-closed
    assert len(doms) == 7
    assert top_domain(B4) in doms and identity_domain(B4) in doms


DOMS = [(L, d) for L in (B4, chain_lattice(4), powerset_lattice("abc")) for d in enumerate_domains(L)]


@settings(max_examples=200)
@given(st.sampled_from(DOMS), st.data())
def test_closure_laws(pair, data):
    L, rho = pair
    x = data.draw(st.sampled_from(L.elements))
    y = data.draw(st.sampled_from(L.elements))
    rx = apply_closure(rho, x)
    assert L.leq(x, rx)
    assert apply_closure(rho, rx) == rx
    if L.leq(x, y):
        assert L.leq(rx, apply_closure(rho, y))
    assert rx in rho.fixpoints
