"""Value groups: orders, arithmetic, convex chains, semigroup gaps."""
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from starforge.values import (ArityError, Ordering, ValueGroup, ValueGroupError, add, compare,
                              group_arith, leq, min_total, minimal_semigroup_generators, negate,
                              quotient_by_convex)

LEX3 = ValueGroup.lex(3)
N2 = ValueGroup.nn(2)
S35 = ValueGroup.semigroup([3, 5])
QHALF = ValueGroup.rational([2, 3])

ints = st.integers(-5, 5)
lex3 = st.tuples(ints, ints, ints)


def test_constructor_validation():
    for bad in (lambda: ValueGroup.lex(0), lambda: ValueGroup.nn(-1), lambda: ValueGroup.rational([0]),
                lambda: ValueGroup.semigroup([2, 4]), lambda: ValueGroup.semigroup([0, 1])):
        with pytest.raises(ValueGroupError):
            bad()
    assert ValueGroup.nn(0).arity == 0  # a field


def test_arity_and_entries_checked():
    with pytest.raises(ArityError):
        LEX3.conform((1, 2))
    with pytest.raises(ValueGroupError):
        N2.conform((Fraction(1, 2), 0))
    with pytest.raises(ValueGroupError):
        QHALF.conform((Fraction(1, 5),))
    assert QHALF.conform((Fraction(1, 6),)) == (Fraction(1, 6),)
    assert S35.conform(7) == (7,)


@given(lex3, lex3)
def test_lex_order_total_and_translation_invariant(a, b):
    o = compare(a, b, LEX3)
    assert o is not Ordering.INCOMPARABLE
    assert (o is Ordering.EQUAL) == (a == b)
    c = (1, -2, 3)
    assert compare(add(a, c, LEX3), add(b, c, LEX3), LEX3) is o


@given(st.tuples(ints, ints), st.tuples(ints, ints))
def test_componentwise_order(a, b):
    o = compare(a, b, N2)
    both = all(x <= y for x, y in zip(a, b)), all(x >= y for x, y in zip(a, b))
    assert (o is Ordering.INCOMPARABLE) == (not any(both))
    assert leq(a, b, N2) == both[0]


def test_arith_dispatch():
    assert group_arith("add", [(1, 0, 0), (0, 1, 0), (0, 0, 1)], LEX3) == (1, 1, 1)
    assert group_arith("negate", [(1, 2, 3)], LEX3) == (-1, -2, -3)
    assert group_arith("min_total", [(0, 1, 0), (0, 0, 9)], LEX3) == (0, 0, 9)
    with pytest.raises(ValueGroupError):
        negate((1, 0), N2)  # a monoid needs the fractional flag
    assert negate((1, 0), N2, fractional=True) == (-1, 0)
    with pytest.raises(ValueGroupError):
        min_total([(1, 0)], N2)
    with pytest.raises(ValueGroupError):
        group_arith("mul", [(1,)], S35)


def test_semigroup_gaps_and_generators():
    assert S35.gaps == frozenset({1, 2, 4, 7})
    assert S35.frobenius == 7
    assert S35.in_monoid((8,)) and not S35.in_monoid((7,))
    assert minimal_semigroup_generators([3, 5, 6, 8, 10]) == [3, 5]
    assert S35.unit_vectors() == [(3,), (5,)]


def test_rational_step():
    assert QHALF.step == Fraction(1, 6)
    assert QHALF.unit_vectors() == [(Fraction(1, 6),)]


def test_convex_chain_and_quotient():
    chain = LEX3.convex_chain()
    assert chain[0] is None and [h.n for h in chain[1:]] == [1, 2, 3]
    assert quotient_by_convex(LEX3, chain[1]) == ValueGroup.lex(2)
    assert quotient_by_convex(LEX3, None) == LEX3
    with pytest.raises(ValueGroupError):
        quotient_by_convex(LEX3, LEX3)
    with pytest.raises(ValueGroupError):
        N2.convex_chain()


def test_rank():
    assert [ValueGroup.lex(3).rank, N2.rank, S35.rank, QHALF.rank] == [3, 2, 1, 1]
