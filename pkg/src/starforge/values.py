"""Value groups and value monoids.

Four kinds are supported:

* ``LexZ(n)``: Z^n with the lexicographic order (value group of a rank-n
  discrete valuation).
* ``RationalSubgroup(denominators)``: the subgroup of Q generated by the
  reciprocals of the given denominators (always cyclic, so rank 1).
* ``ComponentwiseN(n)``: the monoid N^n with the componentwise partial order,
  enveloping group Z^n.  ``n = 0`` is allowed internally and models a field.
* ``NumericalSemigroup(generators)``: a numerical semigroup inside Z.

Vectors are plain tuples of ``int`` (or ``Fraction`` for rational
subgroups).  Numerical-semigroup values are 1-tuples; bare integers are
accepted wherever a vector is expected.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]
Vector = tuple


class ValueGroupError(ValueError):
    """Raised on malformed values or unsupported group operations."""


class ArityError(ValueGroupError):
    pass


class Ordering(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"
    INCOMPARABLE = "Incomparable"


class Kind(str, enum.Enum):
    LEX_Z = "LexZ"
    RATIONAL = "RationalSubgroup"
    COMPONENTWISE_N = "ComponentwiseN"
    SEMIGROUP = "NumericalSemigroup"


@dataclass(frozen=True)
class ValueGroup:
    kind: Kind
    n: int = 1
    generators: tuple[int, ...] = ()
    denominators: tuple[int, ...] = ()
    _gaps: frozenset = field(default=frozenset(), compare=False, repr=False)

    def __post_init__(self):
        if self.kind is Kind.LEX_Z and self.n < 1:
            raise ValueGroupError("LexZ needs a positive arity")
        if self.kind is Kind.COMPONENTWISE_N and self.n < 0:
            raise ValueGroupError("ComponentwiseN needs a nonnegative arity")
        if self.kind is Kind.RATIONAL:
            if not self.denominators or any(d < 1 for d in self.denominators):
                raise ValueGroupError("RationalSubgroup needs positive denominators")
        if self.kind is Kind.SEMIGROUP:
            gens = self.generators
            if not gens or any(g < 1 for g in gens):
                raise ValueGroupError("numerical semigroup needs positive generators")
            if reduce(math.gcd, gens) != 1:
                raise ValueGroupError(f"semigroup generators {gens} are not coprime")
            object.__setattr__(self, "_gaps", frozenset(_gaps_of(gens)))

    # -- constructors -------------------------------------------------------
    @classmethod
    def lex(cls, n: int) -> "ValueGroup":
        return cls(Kind.LEX_Z, n)

    @classmethod
    def rational(cls, denominators: Iterable[int]) -> "ValueGroup":
        return cls(Kind.RATIONAL, 1, denominators=tuple(sorted(set(denominators))))

    @classmethod
    def nn(cls, n: int) -> "ValueGroup":
        return cls(Kind.COMPONENTWISE_N, n)

    @classmethod
    def semigroup(cls, generators: Iterable[int]) -> "ValueGroup":
        return cls(Kind.SEMIGROUP, 1, generators=tuple(sorted(set(generators))))

    # -- structure ---------------------------------------------------------
    @property
    def arity(self) -> int:
        return self.n if self.kind in (Kind.LEX_Z, Kind.COMPONENTWISE_N) else 1

    @property
    def totally_ordered(self) -> bool:
        return self.kind in (Kind.LEX_Z, Kind.RATIONAL, Kind.SEMIGROUP)

    @property
    def is_monoid_kind(self) -> bool:
        return self.kind in (Kind.COMPONENTWISE_N, Kind.SEMIGROUP)

    @property
    def rank(self) -> int:
        """Length of the convex-subgroup chain minus one (Krull dimension)."""
        if self.kind is Kind.LEX_Z:
            return self.n
        if self.kind is Kind.COMPONENTWISE_N:
            return self.n
        return 1

    @property
    def step(self) -> Scalar:
        """Generator of a RationalSubgroup (it is cyclic)."""
        return Fraction(1, reduce(lambda a, b: a * b // math.gcd(a, b), self.denominators))

    @property
    def gaps(self) -> frozenset:
        return self._gaps

    @property
    def frobenius(self) -> int:
        return max(self._gaps) if self._gaps else -1

    def convex_chain(self) -> list["ValueGroup | None"]:
        """Convex subgroups from the trivial one up to the whole group.

        The trivial subgroup is represented by ``None``; the member of rank
        ``r`` (0 < r < n) of ``LexZ(n)`` is the suffix group {0}^(n-r) x Z^r,
        returned as ``LexZ(r)``.
        """
        if self.kind is Kind.LEX_Z:
            return [None] + [ValueGroup.lex(r) for r in range(1, self.n + 1)]
        if self.kind in (Kind.RATIONAL, Kind.SEMIGROUP):
            return [None, self]
        raise ValueGroupError("convex subgroups are only defined for totally ordered kinds")

    def zero(self) -> Vector:
        if self.kind is Kind.RATIONAL:
            return (Fraction(0),)
        return (0,) * self.arity

    def unit_vectors(self) -> list[Vector]:
        """Minimal nonzero elements of the value monoid (the maximal ideal)."""
        if self.kind is Kind.LEX_Z:
            return [(0,) * (self.n - 1) + (1,)]
        if self.kind is Kind.RATIONAL:
            return [(self.step,)]
        if self.kind is Kind.COMPONENTWISE_N:
            return [tuple(int(i == j) for j in range(self.n)) for i in range(self.n)]
        return [(g,) for g in minimal_semigroup_generators(self.generators)]

    def conform(self, v) -> Vector:
        """Coerce ``v`` to a vector of this group, validating arity and entries."""
        if not isinstance(v, tuple):
            v = tuple(v) if isinstance(v, (list,)) else (v,)
        if len(v) != self.arity:
            raise ArityError(f"value {v} has arity {len(v)}, group {self} expects {self.arity}")
        if self.kind is Kind.RATIONAL:
            out = []
            for c in v:
                c = Fraction(c)
                if (c / self.step).denominator != 1:
                    raise ValueGroupError(f"{c} is not in the subgroup with denominators {self.denominators}")
                out.append(c)
            return tuple(out)
        for c in v:
            if isinstance(c, bool) or not isinstance(c, int):
                if isinstance(c, Fraction) and c.denominator == 1:
                    continue
                raise ValueGroupError(f"non-integer coordinate {c!r} in {v}")
        return tuple(int(c) for c in v)

    def in_monoid(self, v: Vector) -> bool:
        """Is ``v`` the value of an element of the ring (v >= 0 in the monoid)?"""
        if self.kind in (Kind.LEX_Z, Kind.RATIONAL):
            return _lex_sign(v) >= 0
        if self.kind is Kind.COMPONENTWISE_N:
            return all(c >= 0 for c in v)
        x = v[0]
        return x >= 0 and x not in self._gaps

    def __str__(self) -> str:
        if self.kind is Kind.LEX_Z:
            return f"LexZ({self.n})"
        if self.kind is Kind.RATIONAL:
            return f"RationalSubgroup({list(self.denominators)})"
        if self.kind is Kind.COMPONENTWISE_N:
            return f"ComponentwiseN({self.n})"
        return f"NumericalSemigroup({list(self.generators)})"


def _gaps_of(gens: Sequence[int]) -> set[int]:
    # Gaps are bounded by the Frobenius bound (a-1)(b-1) for the two smallest.
    g = sorted(gens)
    bound = (g[0] - 1) * (g[-1] - 1) + g[-1] if len(g) > 1 else 0
    reachable = [False] * (bound + 1)
    reachable[0] = True
    for x in range(1, bound + 1):
        reachable[x] = any(x >= a and reachable[x - a] for a in g)
    return {x for x in range(bound + 1) if not reachable[x]}


def minimal_semigroup_generators(gens: Sequence[int]) -> list[int]:
    out: list[int] = []
    for a in sorted(set(gens)):
        if not (out and _representable(a, out)):
            out.append(a)
    return out


def _representable(x: int, gens: Sequence[int]) -> bool:
    reach = [True] + [False] * x
    for y in range(1, x + 1):
        reach[y] = any(y >= a and reach[y - a] for a in gens)
    return reach[x]


def _lex_sign(v: Vector) -> int:
    for c in v:
        if c > 0:
            return 1
        if c < 0:
            return -1
    return 0


def compare(a, b, G: ValueGroup) -> Ordering:
    a, b = G.conform(a), G.conform(b)
    if G.kind is Kind.COMPONENTWISE_N:
        le = all(x <= y for x, y in zip(a, b))
        ge = all(x >= y for x, y in zip(a, b))
        if le and ge:
            return Ordering.EQUAL
        if le:
            return Ordering.LESS
        if ge:
            return Ordering.GREATER
        return Ordering.INCOMPARABLE
    s = _lex_sign(tuple(x - y for x, y in zip(a, b)))
    return {1: Ordering.GREATER, -1: Ordering.LESS, 0: Ordering.EQUAL}[s]


def leq(a: Vector, b: Vector, G: ValueGroup) -> bool:
    """Order relation of the enveloping group (not the monoid divisibility)."""
    return compare(a, b, G) in (Ordering.LESS, Ordering.EQUAL)


def add(a, b, G: ValueGroup) -> Vector:
    a, b = G.conform(a), G.conform(b)
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def negate(a, G: ValueGroup, fractional: bool = False) -> Vector:
    if G.is_monoid_kind and not fractional:
        raise ValueGroupError(f"negation in the monoid {G} needs the fractional flag")
    a = G.conform(a)
    return tuple(-x for x in a)


def min_total(values: Iterable, G: ValueGroup) -> Vector:
    if not G.totally_ordered:
        raise ValueGroupError(f"min_total needs a totally ordered kind, got {G}")
    vals = [G.conform(v) for v in values]
    if not vals:
        raise ValueGroupError("min_total of an empty set")
    return min(vals)  # tuple order is lexicographic


def max_total(values: Iterable, G: ValueGroup) -> Vector:
    vals = [G.conform(v) for v in values]
    return max(vals)


def group_arith(op: str, args: Sequence, G: ValueGroup, fractional: bool = False) -> Vector:
    if op == "add":
        return reduce(lambda x, y: add(x, y, G), args[1:], G.conform(args[0]))
    if op == "negate":
        (a,) = args
        return negate(a, G, fractional)
    if op == "min_total":
        return min_total(args, G)
    raise ValueGroupError(f"unknown group operation {op!r}")


def quotient_by_convex(G: ValueGroup, H: "ValueGroup | None") -> ValueGroup:
    """Quotient of a totally ordered group by a member of its convex chain.

    ``H`` is ``None`` for the trivial subgroup.  For ``LexZ(n)`` and the
    suffix subgroup of rank ``r`` the quotient is ``LexZ(n - r)``.  The
    quotient by the whole group is trivial and has no valuation meaning, so
    it is rejected.
    """
    chain = G.convex_chain()
    if H is not None and H not in chain:
        raise ValueGroupError(f"{H} is not a convex subgroup of {G}")
    r = 0 if H is None else H.rank
    if r == G.rank:
        raise ValueGroupError("quotient by the whole group is trivial")
    if r == 0:
        return G
    return ValueGroup.lex(G.rank - r)
