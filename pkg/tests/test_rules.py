"""Rule engine: closure, contrapositives, independent routes, order independence."""
from __future__ import annotations

import json
import re

import pytest
from conftest import fixture_paths
from hypothesis import given, settings
from hypothesis import strategies as st

from starforge import classifier as C
from starforge import fileformat as ff
from starforge.rules import (FLAGS, IFF, R, RULES, Contradiction, infer, permuted, rule_table, saturate,
                             violations)
from starforge.verdict import Provenance, Value, Verdict

PERMUTATIONS = 50


def _seed(v=True):
    return Verdict.of(v, Provenance("computation", trace=("seed",)))


def test_contrapositives_generated():
    rs = R("X1", "a & !b", "c", "a and not b give c")
    assert [r.id for r in rs] == ["X1", "X1/c1", "X1/c2"]
    assert rs[1].premises == (("b", False), ("c", False)) and rs[1].conclusion == ("a", False)
    assert rs[2].conclusion == ("b", True) and rs[2].derived


def test_iff_gives_both_directions():
    ids = {r.id for r in IFF("E", "g", "a", "b", "a iff b under g")}
    assert {"E.a", "E.b", "E.a/c1", "E.b/c2"} <= ids


def test_saturate_and_conflict():
    rs = R("A", "p", "q", "p gives q") + R("B", "q", "!r", "q excludes r")
    facts = saturate({"p": Value.YES}, rs)
    assert facts == {"p": Value.YES, "q": Value.YES, "r": Value.NO}
    with pytest.raises(Contradiction):
        saturate({"p": Value.YES, "r": Value.YES}, rs)


def test_independent_routes_exclude_circular_support():
    rs = R("A", "p", "q", "p gives q") + R("B", "q", "s", "q gives s") + R("C", "s", "q", "s gives q")
    inf = infer({"p": _seed()}, rs)
    assert inf.routes["q"] == ["A"]  # C needs s, which is only reachable through q
    assert inf.routes["s"] == ["B"]


def test_two_independent_routes():
    rs = R("A", "p", "q", "p gives q") + R("B", "r", "q", "r gives q")
    inf = infer({"p": _seed(), "r": _seed()}, rs)
    assert inf.routes["q"] == ["A", "B"]


def test_conditional_on_declared():
    rs = R("A", "p", "q", "p gives q")
    decl = Verdict.yes(Provenance("declared", citation="assumed"), conditional_on=("p",))
    inf = infer({"p": decl}, rs, declared={"p"})
    assert inf.get("q").conditional_on == ("p",)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_order_free_on_random_seeds(seed):
    base = {"local": _seed(), "M_principal": _seed(), "field": _seed(False)}
    a = infer(base, RULES)
    b = infer(base, permuted(seed))
    assert {f: v.to_json() for f, v in a.verdicts.items()} == {f: v.to_json() for f, v in b.verdicts.items()}


def test_rule_table_covers_rules():
    t = rule_table()
    assert len(t) == len([r for r in RULES if "/" not in r.id]) and all(r["statement"] for r in t)
    assert len({r.id for r in RULES}) == len(RULES)
    assert "t_local" in FLAGS


def test_rule_statements_are_neutral():
    # rule ids are the only locators; statements are mathematics
    for r in RULES:
        assert not re.search(r"\b(section|paper|lemma|theorem|proposition)\b|§", r.statement.lower()), r.id


def _reports():
    for p in fixture_paths():
        yield p.stem, ff.model(ff.load(p))


@pytest.mark.criterion(7)
@pytest.mark.parametrize("name,m", list(_reports()), ids=lambda x: x if isinstance(x, str) else "")
def test_permutations_leave_reports_unchanged(name, m):
    ref = json.dumps(C.classify(m).to_json(), sort_keys=True)
    for k in range(PERMUTATIONS):
        got = json.dumps(C.classify(m, permuted(k)).to_json(), sort_keys=True)
        assert got == ref, f"{name}: permutation {k} changed the report"


@pytest.mark.criterion(7)
@pytest.mark.parametrize("name,m", list(_reports()), ids=lambda x: x if isinstance(x, str) else "")
def test_post_pass_clean(name, m):
    r = C.classify(m)
    assert r.violations == []
    assert violations({**r.flags, **r.auxiliary}) == []
