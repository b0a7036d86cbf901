"""Staircase arithmetic against the brute-force box oracle."""
from __future__ import annotations

import pytest
from conftest import GROUPS, staircases
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from starforge.staircase import (Box, BoxTooLarge, Staircase, ZeroIdealError, add_ideals, colon, contains,
                                 intersect, inverse, membership, oracle, product, restrict, v_closure)
from starforge.values import ValueGroup

RADIUS = {"N1": 8, "N2": 6, "S23": 8, "Lex1": 8, "Lex2": 5}
OPS = ("intersect", "sum", "colon", "inverse", "v_closure")
# 5 groups x 5 operations x 20 examples = 500 instances
EXAMPLES = 20


def _box(key, G):
    return Box.radius(G.arity, RADIUS[key])


def _library(op, A, B):
    if op == "intersect":
        return intersect(A, B)
    if op == "sum":
        return add_ideals(A, B)
    if op == "colon":
        return colon(A, B)
    if op == "inverse":
        return inverse(A)
    return v_closure(A)


@pytest.mark.criterion(2)
@pytest.mark.parametrize("op", OPS)
@pytest.mark.parametrize("key", sorted(GROUPS))
def test_oracle_equivalence(key, op):
    G = GROUPS[key]
    box = _box(key, G)
    seen = []

    @settings(max_examples=EXAMPLES, deadline=None, suppress_health_check=[HealthCheck.too_slow],
              derandomize=True)
    @given(staircases(G), staircases(G))
    def check(A, B):
        if op == "v_closure":
            assume(all(box.contains(g) for g in inverse(A).generators))
        got = restrict(_library(op, A, B), box)
        want = oracle(op, [A, B] if op in ("intersect", "sum", "colon") else [A], box)
        assert got == want, (A, B)
        seen.append(1)

    check()
    assert len(seen) == EXAMPLES  # 25 cells x 20 = 500 compared instances


@given(staircases(GROUPS["N2"]))
def test_normal_form_is_antichain_sorted(A):
    gens = list(A.generators)
    assert gens == sorted(gens)
    for g in gens:
        for h in gens:
            if g != h:
                assert not all(x >= y for x, y in zip(g, h))


@given(staircases(GROUPS["Lex2"]))
def test_total_orders_are_principal(A):
    assert A.is_principal()


def test_semigroup_membership_is_monoid_closed():
    G = ValueGroup.semigroup([2, 3])
    S = Staircase(G, [2])
    assert membership(S, 5) and membership(S, 2) and not membership(S, 3)
    assert inverse(S) == Staircase(G, [-2])


@given(staircases(GROUPS["N2"]), staircases(GROUPS["N2"]))
def test_product_and_colon_adjunction(A, B):
    # (A B : B) contains A, and B (A : B) lies in A
    assert contains(colon(product(A, B), B), A)
    assert contains(A, product(B, colon(A, B)))


@given(staircases(GROUPS["S23"]))
def test_v_closure_idempotent_and_extensive(A):
    V = v_closure(A)
    assert contains(V, A) and v_closure(V) == V


def test_zero_ideal_rejected():
    with pytest.raises(ZeroIdealError):
        Staircase(GROUPS["N1"], [])


def test_box_cap(monkeypatch):
    monkeypatch.setenv("STARFORGE_BOX_CAP", "10")
    with pytest.raises(BoxTooLarge):
        list(Box.radius(2, 3).points())


@given(st.integers(0, 6))
def test_oracle_membership_matches(k):
    G = GROUPS["S23"]
    S = Staircase(G, [k])
    box = Box.radius(1, 10)
    assert restrict(S, box) == oracle("membership", [S], box)
