"""Domain files: schema validation, canonical round trips, build errors."""
import copy
import json

import pytest
from hypothesis import given, settings, strategies as st

from conftest import fixture_paths
from starforge import fileformat as ff
from starforge.desc import Pullback

PATHS = fixture_paths()


def _raw(name):
    return json.loads(next(p for p in PATHS if p.stem == name).read_text())


@pytest.mark.criterion(10)
@pytest.mark.parametrize("path", PATHS, ids=lambda p: p.stem)
def test_fixtures_are_canonical(path):
    text = path.read_text()
    ff.validate(json.loads(text), "domain")
    assert ff.canonical(text) == text
    assert ff.dumps(ff.loads(text)) == text


@pytest.mark.parametrize("path", PATHS, ids=lambda p: p.stem)
def test_round_trip_is_structural(path):
    df = ff.load(path)
    again = ff.loads(ff.dumps(df))
    assert again == df
    assert ff.node_from_json(ff.node_to_json(df.desc)) == df.desc


def test_dumps_format():
    out = ff.dumps(ff.load(PATHS[0]))
    assert out.endswith("}\n") and "\r" not in out
    assert out.splitlines()[1].startswith("  ")


@pytest.mark.parametrize("mutate,pointer", [
    (lambda o: o.pop("desc"), "/"),
    (lambda o: o["desc"].update(kind="Nope"), "/desc/kind"),
    (lambda o: o["desc"]["group"].update(n=0), "/desc/group"),
    (lambda o: o["desc"].update(residue=3), "/desc/residue"),
    (lambda o: o["expect"].update({"dim": []}), "/expect/dim"),
    (lambda o: o["elements"].update({"t": "nope"}), "/elements/t"),
])
def test_schema_errors_carry_pointers(mutate, pointer):
    obj = _raw("fx-dvr")
    mutate(obj)
    with pytest.raises(ff.SchemaError) as e:
        ff.parse(obj)
    assert e.value.pointer == pointer, str(e.value)


def test_not_json():
    with pytest.raises(ff.SchemaError):
        ff.loads("{ nope")


def test_tower_is_nested_pullbacks():
    tower = {"kind": "Tower", "layers": [_raw("fx-dvr")["desc"]] * 2 + [{"kind": "FieldAtom", "field": "k"}]}
    n = ff.node_from_json(tower)
    assert isinstance(n, Pullback) and isinstance(n.T, Pullback)  # left nested


def test_pullback_over_field_is_a_build_error():
    obj = _raw("fx-rc")
    obj["desc"]["T"] = {"kind": "FieldAtom", "field": "C"}
    obj["elements"] = {}
    obj["named_ideals"] = {}
    with pytest.raises(ff.BuildError):
        ff.model(ff.parse(obj))


@pytest.mark.parametrize("bad", ["(M : ", "M ^ 0x", "nope", "M + + M"])
def test_ideal_expression_errors(bad):
    obj = _raw("fx-rc")
    obj["named_ideals"] = {"B": bad}
    with pytest.raises(ff.BuildError):
        ff.model(ff.parse(obj))


def test_ideal_expressions(models):
    obj = _raw("fx-rc")
    obj["named_ideals"] = {"A": "M*M", "B": "M^2", "C": "(X, Y)", "E": "M & D", "G": "(A : M)"}
    m = ff.model(ff.parse(obj))
    S = m.stack
    assert m.named_ideals["A"] == m.named_ideals["B"]
    assert m.named_ideals["E"] == m.maximal()
    # over R + M the ideal (X, Y) misses iX: it is strictly inside M
    assert S.leq(m.named_ideals["C"], m.maximal()) and m.named_ideals["C"] != m.maximal()
    assert m.named_ideals["G"] == S.colon(m.named_ideals["A"], m.maximal())


def test_element_outside_ring():
    obj = _raw("fx-dvr")
    obj["elements"] = {"bad": [[-1]]}
    with pytest.raises(ff.BuildError):
        ff.model(ff.parse(obj))


def test_split_scope():
    assert ff.split_scope("T::X") == ("T", "X")
    assert ff.split_scope("X") == (None, "X")


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(st.sampled_from(["dim", "t-local", "flag:DVR", "archimedean"]),
                       st.one_of(st.sampled_from(["Yes", "No", "Unknown"]), st.integers(0, 5)), max_size=4))
def test_expectations_survive_round_trip(expect):
    obj = _raw("fx-dvr")
    obj["expect"] = expect
    text = ff.dumps(ff.parse(copy.deepcopy(obj)))
    assert ff.loads(text).expect == expect
