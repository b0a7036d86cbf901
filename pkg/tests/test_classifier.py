"""Classifier facts on the worked fixtures and the comparable-element suite."""
import random

import pytest

from conftest import STACK_FIXTURES, random_ideal, random_path
from starforge import classifier as C
from starforge.query import run_query

NON_VALUATION_T_LOCAL = ["fx-rc", "fx-pvd-r", "fx-pvd-qbar", "fx-tower4", "fx-zpxr", "fx-semigroup"]


def q(m, query):
    return run_query(m, query).verdict


def rules_of(v):
    return {p.rule for p in v.provenance if p.kind == "rule"}


# -- the four-dimensional tower --------------------------------------------------------

@pytest.mark.criterion(3)
def test_tower_facts(models):
    m = models("fx-tower4")
    assert q(m, "dim").result == 4
    tl = q(m, "t-local")
    assert tl.is_yes and "C4" in rules_of(tl)  # the maximal ideal is principal, generated by p
    assert m.named_ideals["pD"] == m.maximal()
    w = C.find_comparable(m).witness
    assert w["element"] == "p" and w["Q"] == "Q"
    assert q(m, "t-ideal:Q").is_yes
    inner = q(m, "T::t-ideal:M")
    assert inner.value.value == "No"
    T = m.scope("T")
    assert inner.witness["F^v"] == T.stack.ring()  # (X, Y)^v is all of T
    assert q(m, "well-behaved:Q").value.value == "No"
    for rep in ("PX", "PY"):
        assert m.prime(rep).height == 2 and q(m, f"well-behaved:{rep}").is_yes
    assert q(m, "archimedean").value.value == "No"
    assert q(m, "T::t-local").value.value == "No"
    assert q(m, "T::flag:finite_t_character").value.value == "No"


@pytest.mark.criterion(4)
def test_rc_facts(models):
    m = models("fx-rc")
    assert q(m, "t-local").is_yes
    d = q(m, "divisorial:M2")
    assert d.value.value == "No"
    assert d.result["inverse"] == "T" and d.result["closure"] == "M"
    S = m.stack
    assert S.inverse(m.named_ideals["M2"]) == m.named_ideals["T"]
    assert S.inverse(m.named_ideals["T"]) == m.maximal()
    for e in m.spectrum.entries:
        if e.role != "zero":
            assert q(m, f"t-ideal:{e.name}").is_yes, e.name


@pytest.mark.criterion(5)
def test_badpoly_facts(models):
    m = models("fx-badpoly")
    d = q(m, "divisorial:frakP")
    assert d.is_yes and "DINT" in rules_of(d)
    wb = q(m, "well-behaved:frakP")
    assert wb.value.value == "No"
    assert any("D_P" in t for p in wb.provenance for t in p.trace)


# -- comparable elements ----------------------------------------------------------------

@pytest.mark.criterion(6)
def test_tower_witness_is_comparable(models):
    m = models("fx-tower4")
    S = m.stack
    x = m.elements["p"]
    X = S.principal(x)
    rng = random.Random("cmp")
    for _ in range(100):
        I, _ = random_ideal(S, rng, max_gens=3)
        assert S.leq(I, X) or S.leq(X, I)
        y = random_path(S, rng)
        Y = S.principal(y)
        assert S.leq(Y, X) or S.leq(X, Y)


@pytest.mark.criterion(6)
@pytest.mark.parametrize("name", STACK_FIXTURES)
def test_comparable_is_sound(models, name):
    """An element the classifier calls comparable is comparable to every sampled ideal.

    The converse cannot be checked here: the witnesses of incomparability are
    in general not monomial."""
    m = models(name)
    S = m.stack
    rng = random.Random(f"sound-{name}")
    for _ in range(60):
        x = random_path(S, rng)
        if S.is_unit(x) or not C.is_comparable(m, x):
            continue
        X = S.principal(x)
        for _ in range(10):
            I, _ = random_ideal(S, rng)
            assert S.leq(I, X) or S.leq(X, I)


@pytest.mark.criterion(6)
@pytest.mark.parametrize("name", STACK_FIXTURES)
def test_factor_closure(models, name):
    m = models(name)
    S = m.stack
    rng = random.Random(f"factor-{name}")
    for _ in range(100):
        a, b = random_path(S, rng), random_path(S, rng)
        if S.is_unit(a) or S.is_unit(b):
            continue
        if C.is_comparable(m, S.mul_path(a, b)):
            assert C.is_comparable(m, a) and C.is_comparable(m, b)


@pytest.mark.criterion(6)
def test_dimension_additivity(models):
    rep = C.comparable_prime(models("fx-tower4"), models("fx-tower4").elements["p"])
    assert rep.comparable and rep.Q == "Q"
    assert (rep.dim, rep.dim_quotient, rep.dim_localization) == (4, 1, 3) and rep.additive


@pytest.mark.criterion(6)
@pytest.mark.parametrize("name", ["fx-zpxr", "fx-semigroup"])
def test_local_obstruction(models, name):
    m = models(name)
    rep = C.comparable_prime(m, m.elements["p"])
    assert rep.comparable and rep.DQ_valuation.value.value == "No"
    v = q(m, "flag:valuation")
    assert v.value.value == "No" and "G2/c1" in rules_of(v)


@pytest.mark.criterion(6)
def test_da_quotient_obstruction(models):
    m = models("fx-da")
    assert q(m, "comparable").value.value == "No"
    for x in ("X", "Y"):
        rep = C.comparable_prime(m, m.elements[x])
        assert not rep.quotient_valuation and not rep.comparable


# -- valuation triangulation ---------------------------------------------------------------

@pytest.mark.criterion(8)
@pytest.mark.parametrize("name", ["fx-dvr", "fx-lex2"])
def test_valuation_atoms_have_three_routes(models, name):
    r = C.classify(models(name))
    assert r.get("valuation").is_yes
    assert len(r.routes["valuation"]) >= 3


@pytest.mark.criterion(8)
@pytest.mark.parametrize("name", NON_VALUATION_T_LOCAL)
def test_non_valuation_obstruction_cited(models, name):
    m = models(name)
    assert q(m, "t-local").is_yes
    v = q(m, "flag:valuation")
    assert v.value.value == "No"
    cited = [p for p in v.provenance if p.kind == "rule"]
    assert cited and all(p.citation for p in cited)
