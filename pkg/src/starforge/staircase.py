"""Staircases: finitely generated upward-closed value sets.

A staircase over a value group ``G`` is the set ``gens + monoid(G)``: the
value set of a monomial (fractional) ideal.  The ring itself is the
staircase ``<0>``.  Every operation returns a staircase in normal form
(pairwise incomparable generators, sorted).

The module also carries the brute-force box oracle used by the test suite.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

from .values import Kind, ValueGroup, Vector, sub

DEFAULT_BOX_RADIUS = 8
DEFAULT_BOX_CAP = 10**6


class StaircaseError(ValueError):
    pass


class ZeroIdealError(StaircaseError):
    """The zero ideal is not a fractional ideal and is never represented."""


class GroupMismatch(StaircaseError):
    pass


class BoxTooLarge(StaircaseError):
    pass


@dataclass(frozen=True)
class Staircase:
    group: ValueGroup
    generators: tuple[Vector, ...]

    def __init__(self, group: ValueGroup, generators: Iterable):
        gens = {group.conform(g) for g in generators}
        if not gens:
            raise ZeroIdealError("a staircase needs at least one generator")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "generators", tuple(_minimal(group, gens)))

    @classmethod
    def ring(cls, group: ValueGroup) -> "Staircase":
        return cls(group, [group.zero()])

    @classmethod
    def maximal(cls, group: ValueGroup) -> "Staircase":
        return cls(group, group.unit_vectors())

    @property
    def normalized(self) -> bool:
        return True

    def __contains__(self, v) -> bool:
        return membership(self, v)

    def __le__(self, other: "Staircase") -> bool:
        return contains(other, self)

    def is_principal(self) -> bool:
        return len(self.generators) == 1

    def is_ring(self) -> bool:
        return self == Staircase.ring(self.group)

    def is_integral(self) -> bool:
        return all(self.group.in_monoid(g) for g in self.generators)

    def translate(self, d: Vector) -> "Staircase":
        return Staircase(self.group, [tuple(x + y for x, y in zip(g, d)) for g in self.generators])

    def __repr__(self) -> str:
        gens = ", ".join(_fmt(g) for g in self.generators)
        return f"<{gens}>"

    def to_json(self) -> list:
        return [[_jnum(c) for c in g] for g in self.generators]


def _fmt(v: Vector) -> str:
    return str(v[0]) if len(v) == 1 else "(" + ",".join(str(c) for c in v) + ")"


def _jnum(c):
    return c if isinstance(c, int) else str(c)


def _minimal(G: ValueGroup, gens: set) -> list[Vector]:
    if G.totally_ordered and G.kind is not Kind.SEMIGROUP:
        return [min(gens)]
    keep = [g for g in gens if not any(h != g and G.in_monoid(sub(g, h)) for h in gens)]
    return sorted(keep)


def minimal_generators(A: Staircase) -> list[Vector]:
    return list(A.generators)


def membership(S: Staircase, v) -> bool:
    v = S.group.conform(v)
    return any(S.group.in_monoid(sub(v, g)) for g in S.generators)


def contains(A: Staircase, B: Staircase) -> bool:
    """Is B a subset of A?"""
    _same_group(A, B)
    return all(membership(A, g) for g in B.generators)


def _same_group(A: Staircase, B: Staircase) -> None:
    if A.group != B.group:
        raise GroupMismatch(f"{A.group} vs {B.group}")


def add_ideals(A: Staircase, B: Staircase) -> Staircase:
    _same_group(A, B)
    return Staircase(A.group, A.generators + B.generators)


def product(A: Staircase, B: Staircase) -> Staircase:
    _same_group(A, B)
    return Staircase(A.group, [tuple(x + y for x, y in zip(a, b))
                               for a in A.generators for b in B.generators])


def intersect(A: Staircase, B: Staircase) -> Staircase:
    _same_group(A, B)
    G = A.group
    if G.kind is Kind.COMPONENTWISE_N:
        return Staircase(G, [tuple(max(x, y) for x, y in zip(a, b))
                             for a in A.generators for b in B.generators])
    if G.kind is Kind.SEMIGROUP:
        return _semigroup_meet(A, B)
    return Staircase(G, [max(A.generators[0], B.generators[0])])


def _semigroup_meet(A: Staircase, B: Staircase) -> Staircase:
    G = A.group
    lo = max(min(A.generators)[0], min(B.generators)[0])
    # Everything from lo + F + 1 on lies in both; minimal generators sit
    # below that bound plus the largest semigroup generator.
    hi = lo + 2 * (G.frobenius + 1) + max(G.generators) + 1
    members = [x for x in range(lo, hi + 1) if membership(A, x) and membership(B, x)]
    return Staircase(G, [(x,) for x in members])


def combine(op: str, A: Staircase, B: Staircase) -> Staircase:
    if op == "sum":
        return add_ideals(A, B)
    if op == "product":
        return product(A, B)
    if op == "intersect":
        return intersect(A, B)
    raise StaircaseError(f"unknown combine op {op!r}")


def colon(A: Staircase, B: Staircase, fractional: bool = True) -> Staircase:
    """(A : B) = {v | v + B is contained in A}; with ``fractional`` off, (A :_D B)."""
    _same_group(A, B)
    parts = [A.translate(tuple(-c for c in b)) for b in B.generators]
    out = reduce(intersect, parts)
    if not fractional:
        out = intersect(out, Staircase.ring(A.group))
    return out


def inverse(A: Staircase) -> Staircase:
    return colon(Staircase.ring(A.group), A, fractional=True)


def v_closure(A: Staircase) -> Staircase:
    return inverse(inverse(A))


# -- brute-force oracle --------------------------------------------------------

@dataclass(frozen=True)
class Box:
    lower: tuple[int, ...]
    upper: tuple[int, ...]

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise StaircaseError("box bounds of different arity")
        if any(lo > hi for lo, hi in zip(self.lower, self.upper)):
            raise StaircaseError("box lower bound exceeds upper bound")

    @classmethod
    def cube(cls, arity: int, lo: int, hi: int) -> "Box":
        return cls((lo,) * arity, (hi,) * arity)

    @classmethod
    def radius(cls, arity: int, r: int = DEFAULT_BOX_RADIUS) -> "Box":
        return cls.cube(arity, -r, r)

    @property
    def size(self) -> int:
        n = 1
        for lo, hi in zip(self.lower, self.upper):
            n *= hi - lo + 1
        return n

    def points(self, cap: int | None = None):
        cap = box_cap() if cap is None else cap
        if self.size > cap:
            raise BoxTooLarge(f"box has {self.size} points, cap is {cap}")
        return itertools.product(*[range(lo, hi + 1) for lo, hi in zip(self.lower, self.upper)])

    def contains(self, v: Sequence) -> bool:
        return all(lo <= c <= hi for c, lo, hi in zip(v, self.lower, self.upper))


def box_cap() -> int:
    return int(os.environ.get("STARFORGE_BOX_CAP", DEFAULT_BOX_CAP))


def _oracle_monoid(G: ValueGroup, v: Sequence[int]) -> bool:
    if G.kind is Kind.COMPONENTWISE_N:
        return all(c >= 0 for c in v)
    if G.kind in (Kind.LEX_Z, Kind.RATIONAL):
        nz = [c for c in v if c != 0]
        return not nz or nz[0] > 0
    x = v[0]
    if x < 0:
        return False
    reach = {0}
    for y in range(1, x + 1):
        if any(y - g in reach for g in G.generators):
            reach.add(y)
    return x in reach


def _oracle_member(G: ValueGroup, gens: Sequence[Vector], v) -> bool:
    return any(_oracle_monoid(G, tuple(a - b for a, b in zip(v, g))) for g in gens)


def oracle(op: str, operands: Sequence[Staircase], box: Box) -> frozenset:
    """Points of ``box`` lying in the result of ``op``, by direct quantifier
    evaluation over box points.

    The box must contain the generators of every operand (and, for
    ``inverse``/``v_closure``, those of the intermediate inverse), otherwise
    the quantifiers over box points would miss generators.
    """
    G = operands[0].group
    pts = [tuple(p) for p in box.points()]
    ring = [G.zero()]

    def inside(S):
        return [p for p in pts if _oracle_member(G, S.generators, p)]

    def colon_pts(a_member, b_pts):
        return [v for v in pts if all(a_member(tuple(x + y for x, y in zip(v, b))) for b in b_pts)]

    for S in operands:
        for g in S.generators:
            if not box.contains(g):
                raise StaircaseError(f"generator {g} lies outside the oracle box")

    if op == "membership":
        return frozenset(inside(operands[0]))
    if op == "intersect":
        A, B = operands
        return frozenset(p for p in pts if _oracle_member(G, A.generators, p) and _oracle_member(G, B.generators, p))
    if op == "sum":
        A, B = operands
        return frozenset(p for p in pts if _oracle_member(G, A.generators + B.generators, p))
    if op == "colon":
        A, B = operands
        return frozenset(colon_pts(lambda w: _oracle_member(G, A.generators, w), inside(B)))
    if op == "inverse":
        (A,) = operands
        return frozenset(colon_pts(lambda w: _oracle_member(G, ring, w), inside(A)))
    if op == "v_closure":
        (A,) = operands
        inv = colon_pts(lambda w: _oracle_member(G, ring, w), inside(A))
        return frozenset(colon_pts(lambda w: _oracle_member(G, ring, w), inv))
    if op == "w_closure":
        # x is in A^w iff the integral set (A :_D x) has inverse exactly D
        (A,) = operands
        ring_pts = set(inside(Staircase.ring(G)))
        out = []
        for x in pts:
            c = [y for y in ring_pts if _oracle_member(G, A.generators, tuple(a + b for a, b in zip(x, y)))]
            if not c:
                continue
            inv = colon_pts(lambda w: _oracle_member(G, ring, w), c)
            if set(inv) == ring_pts:
                out.append(x)
        return frozenset(out)
    raise StaircaseError(f"oracle does not know {op!r}")


def restrict(S: Staircase, box: Box) -> frozenset:
    """Points of ``box`` in ``S`` according to the normal-form membership test."""
    return frozenset(tuple(p) for p in box.points() if membership(S, tuple(p)))
