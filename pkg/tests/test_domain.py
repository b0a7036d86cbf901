"""Building models from descriptions: layers, spectra, localizations, errors."""
import pytest

from starforge.desc import DescError, FieldAtom, Fields, MonomialAtom, Pullback, ValuationAtom
from starforge.domain import UnknownLocalization, UnknownPrime, build, localize
from starforge.values import ValueGroup

LEX1 = ValueGroup.lex(1)


def test_tower_spectrum_shape(models):
    m = models("fx-tower4")
    sp = m.spectrum
    assert m.dim == 4 == sp.dim
    assert [e.name for e in sp.maximal()] == ["M"]
    assert sp.strictly_below("M") == set(sp.names()) - {"M"}
    assert ("PX", "Q") in sp.covers() and ("PY", "Q") in sp.covers()
    assert not sp.treed()  # Q sits over the incomparable PX and PY


@pytest.mark.parametrize("name,dim", [("fx-dvr", 1), ("fx-lex2", 2), ("fx-da", 2)])
def test_valuation_like_chains(models, name, dim):
    m = models(name)
    assert m.dim == dim and m.spectrum.linearly_ordered()


def test_localization_drops_the_top(models):
    m = models("fx-tower4")
    loc = m.scope("@Q")
    assert loc.dim == 3
    assert set(loc.spectrum.names()) == set(m.spectrum.names()) - {"M"}
    assert m.scope("@Q") is loc  # memoized
    assert localize(m, "M") is m.desc
    assert isinstance(localize(m, "(0)"), FieldAtom)


def test_localization_errors(models):
    m = models("fx-tower4")
    with pytest.raises(UnknownPrime):
        m.prime("nope")
    with pytest.raises(UnknownLocalization):
        localize(m, "Q.F1")  # a symbolic family needs a representative
    assert localize(m, "Q.F1", generic=True) is not None
    with pytest.raises(UnknownLocalization):
        localize(models("fx-badpoly"), "N")
    with pytest.raises(UnknownLocalization):
        localize(models("fx-nagata"), "M")


def test_scope_by_label(models):
    T = models("fx-tower4").scope("T")
    assert T.dim == 3
    with pytest.raises(UnknownPrime):
        models("fx-tower4").scope("no-such-label")


def test_pullback_over_a_field_is_rejected():
    with pytest.raises(DescError) as e:
        build(Pullback(FieldAtom("K"), FieldAtom("k")))
    assert e.value.path.endswith(".T")


def test_pullback_needs_a_declared_subfield():
    V = ValuationAtom(LEX1, "k", "K")
    with pytest.raises(DescError):
        build(Pullback(V, FieldAtom("F")))  # F is not declared inside k
    with pytest.raises(DescError):
        build(Pullback(V, FieldAtom("k")))  # trivial pullback


def test_atom_validation():
    with pytest.raises(DescError):
        build(ValuationAtom(ValueGroup.nn(2), "k", "K"))
    with pytest.raises(DescError):
        build(MonomialAtom("NumericalSemigroup", "k", semigroup=(1, 2)))
    with pytest.raises(DescError):
        build(MonomialAtom("PowerSeries", "k", n=0))
    with pytest.raises(DescError):
        build(MonomialAtom("Laurent", "k", n=1))


def test_field_model():
    m = build(FieldAtom("K"), Fields())
    assert m.is_field and m.dim == 0


def test_conductors_named(models):
    m = models("fx-rc")
    assert [c.name for c in m.conductors] == ["M"]
    assert m.maximal_name == "M"
