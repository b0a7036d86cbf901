"""Star-operation axioms, the d <= w <= t <= v chain, and unit detection by
divisorial closure on t-local models."""
from __future__ import annotations

import random

import pytest
from conftest import STACK_FIXTURES, random_ideal, random_path

from starforge import classifier as C
from starforge import starops
from starforge.starops import FragmentUnsupported, UnknownClosure

N_IDEALS = 200


def _closer(m):
    dw = C._light(m).get("DW")

    def close(I, op):
        try:
            return starops.closure(m, I, op, dw=dw).ideal
        except (UnknownClosure, FragmentUnsupported):
            return None
    return close


@pytest.mark.criterion(1)
@pytest.mark.parametrize("name", STACK_FIXTURES)
def test_star_axioms_and_chain(models, name):
    m = models(name)
    S = m.stack
    close = _closer(m)
    rng = random.Random(f"axioms-{name}")
    decided = {op: 0 for op in starops.OPS}
    for _ in range(N_IDEALS):
        E, _ = random_ideal(S, rng, integral=rng.random() < 0.7)
        F = S.add(E, S.generated([random_path(S, rng)]))  # E <= F
        x = random_path(S, rng, integral=False)
        xD = S.principal(x)
        chain = [E]
        for op in ("w", "t", "v"):
            Es = close(E, op)
            if Es is None:
                continue
            decided[op] += 1
            assert S.leq(E, Es), (op, E)                                  # extensive
            assert close(Es, op) in (None, Es), (op, E)                    # idempotent
            assert close(xD, op) == xD                                     # (xD)* = xD
            xE = close(S.mul(xD, E), op)
            assert xE is None or xE == S.mul(xD, Es), (op, x, E)           # (xE)* = x E*
            Fs = close(F, op)
            assert Fs is None or S.leq(Es, Fs), (op, E, F)                 # monotone
            chain.append(Es)
        for lo, hi in zip(chain, chain[1:]):
            assert S.leq(lo, hi)
        decided["d"] += 1
    assert decided == {op: N_IDEALS for op in starops.OPS}


T_LOCAL = [n for n in STACK_FIXTURES if n not in ("fx-nreg2", "fx-nreg3")]


@pytest.mark.criterion(9)
@pytest.mark.parametrize("name", T_LOCAL)
def test_units_detected_by_v_closure(models, name):
    """On a t-local model: I^v = D iff I contains a unit iff I = D."""
    m = models(name)
    assert C.is_t_local(m).is_yes
    S = m.stack
    D = S.ring()
    rng = random.Random(f"units-{name}")
    hits = 0
    for _ in range(100):
        I, gens = random_ideal(S, rng, unit_rate=0.3)
        has_unit = any(S.is_unit(g) for g in gens)
        hits += has_unit
        assert (S.v_closure(I) == D) == has_unit == (I == D), gens
    assert 0 < hits < 100


def test_non_t_local_has_proper_gv_ideal(models):
    m = models("fx-nreg2")
    M = m.maximal()
    assert m.stack.v_closure(M) == m.ring()
    assert starops.is_GV(m, M).is_yes


def test_w_closure_identity_on_dw(models):
    m = models("fx-tower4")
    assert C._light(m).get("DW").is_yes
    M2 = m.stack.mul(m.maximal(), m.maximal())
    assert starops.closure(m, M2, "w", dw=C._light(m).get("DW")).ideal == M2


@pytest.mark.criterion(5)
def test_directed_intersection_is_divisorial(models):
    m = models("fx-badpoly")
    v = starops.is_divisorial(m, m.prime_ideal("frakP"))
    assert v.is_yes and any(p.rule == "DINT" for p in v.provenance)
