import pytest
from hypothesis import given, strategies as st

from condensing.errors import ParseError
from condensing.lattice import powerset_lattice
from condensing.quantale import (ExplicitQuantale, SampleConfig, SubstQuantale,
                                 boolean_meet_quantale, format_quantale,
                                 lukasiewicz_quantale, parse_quantale,
                                 residual, standard_quantales,
                                 verify_linear_laws, verify_quantale)
from condensing.subst import default_carrier, named_sets

ZOO = standard_quantales(8)
B4Q = boolean_meet_quantale()
P, Q_, PQ, E = frozenset("p"), frozenset("q"), frozenset("pq"), frozenset()


def test_zoo_passes_every_law():
    assert len(ZOO) >= 5
    for Q in ZOO:
        assert verify_quantale(Q) == [], Q.name
        assert verify_linear_laws(Q) == [], Q.name


def test_union_tensor_fails_bottom_preservation():
    L = powerset_lattice(["p", "q"])
    bad = ExplicitQuantale(L, lambda a, b: a | b, E, name="B4-union")
    laws = {v.law for v in verify_quantale(bad)}
    assert any("bottom" in law for law in laws)
    v = next(v for v in verify_quantale(bad) if "bottom" in v.law)
    assert "{p}" in v.render(L) or "{q}" in v.render(L) or "{p,q}" in v.render(L)


def test_non_commutative_tensor_caught():
    L = powerset_lattice(["p"])
    lopsided = ExplicitQuantale(L, lambda a, b: a, L.top, name="left")
    assert any("commut" in v.law for v in verify_quantale(lopsided))


def test_unit_detected():
    assert B4Q.unit == PQ
    luk = lukasiewicz_quantale(4)
    assert ExplicitQuantale(luk.lattice, luk.tensor).unit == 3


def test_residual_examples():
    for Q in ZOO:
        for a in Q.lattice.elements:
            assert residual(Q, Q.unit, a) == a
            assert residual(Q, a, Q.lattice.top) == Q.lattice.top
    assert B4Q.residual(Q_, P) == P
    assert B4Q.residual(P, P) == PQ


def test_subst_residuals():
    SQ = SubstQuantale(default_carrier())
    N = named_sets(SQ.carrier)
    assert residual(SQ, N["TOP"], N["I(X,Y)"]) == N["G(X,Y)"]
    assert residual(SQ, N["I(X,Y)"], N["I(X,Y)"]) == N["G(X,Y)+EG"]
    assert residual(SQ, SQ.unit, N["I(X,Y)"]) == N["I(X,Y)"]
    assert residual(SQ, N["I(X,Y)"], N["TOP"]) == N["TOP"]


def test_subst_quantale_laws_sampled():
    SQ = SubstQuantale(default_carrier())
    cfg = SampleConfig(k=16, seed=3, max_triples=300)
    assert verify_quantale(SQ, cfg) == []
    assert verify_linear_laws(SQ, cfg) == []


ELEMENTS = [(Q, a, b, c) for Q in ZOO[:10]
            for a in Q.lattice.elements for b in Q.lattice.elements for c in Q.lattice.elements]


@given(st.sampled_from(ELEMENTS))
def test_residual_adjunction(case):
    Q, a, b, c = case
    L = Q.lattice
    assert L.leq(Q.tensor(a, b), c) == L.leq(b, Q.residual(a, c))


@given(st.sampled_from(ELEMENTS))
def test_residual_is_lub_oracle(case):
    Q, a, _, c = case
    L = Q.lattice
    want = L.lub(b for b in L.elements if L.leq(Q.tensor(a, b), c))
    assert Q.residual(a, c) == want


B4_TEXT = """\
elements: bot p q top
order: bot<=p bot<=q p<=top q<=top
tensor-builtin: meet
unit: top
"""


def test_parse_builtin_and_roundtrip():
    Q = parse_quantale(B4_TEXT)
    assert Q.tensor("p", "q") == "bot" and Q.unit == "top"
    again = parse_quantale(format_quantale(Q))
    L = Q.lattice
    assert all(again.tensor(a, b) == Q.tensor(a, b) for a in L for b in L)
    assert again.unit == Q.unit


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_quantale("elements: a b\norder: a<=b\ntensor: a a -> a\n")
    with pytest.raises(ParseError):
        parse_quantale("elements: a b\norder: a<=b\ntensor: a b => a\n")
    with pytest.raises(ParseError):
        parse_quantale("elements: a b\norder: a<=b\ntensor-builtin: join\n")
    with pytest.raises(ParseError):
        parse_quantale(B4_TEXT.replace("unit: top", "unit: nope"))
