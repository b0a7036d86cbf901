"""Layer stacks and the monomial ideal arithmetic of pullback towers.

A tower ``D = L0 x_{k0} (L1 x_{k1} ( ... Lm))`` is stored top first.  Each
layer is a local atom with a value group (``nn(0)`` for a field sitting at
the bottom).  A monomial element is a *path*: one value per layer, read as
"value ``w0`` in L0 with leading coefficient of value ``w1`` in L1, ...".

A monomial fractional ideal of a multi-layer stack is a pair ``(U, P)``:

* ``U`` is a staircase of top-layer values at which every leading
  coefficient occurs ("full" positions);
* ``P`` maps finitely many further top values ``w`` (not in ``U``) to a
  nonzero fractional ideal of the lower stack: the admissible leading
  coefficients at ``w``.  Module closure forces ``w + N`` into ``U``, where
  ``N`` is the top layer's maximal ideal.

The bottom level is a plain :class:`Staircase`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Iterable, Sequence, Union

from .staircase import Staircase, ZeroIdealError, colon as st_colon, contains as st_contains
from .staircase import intersect as st_meet, product as st_product, add_ideals as st_add
from .values import ValueGroup

Path = tuple


class LayerError(ValueError):
    pass


class FragmentError(LayerError):
    """Input ideal is outside the representable fragment."""


@dataclass(frozen=True)
class Layer:
    """One local atom of a stack."""
    group: ValueGroup
    kind: str  # valuation | power_series | localized_polynomial | semigroup | field | poly_local
    residue: str
    fraction: str
    label: str = ""
    max_name: str | None = None
    prime_names: tuple[str, ...] = ()  # valuation chain, heights 1..rank-1
    family_reps: tuple[tuple[int, str, tuple[int, ...]], ...] = ()  # (height, name, coordinates)
    uncountable: bool = True
    variables: tuple[str, ...] = ()

    @property
    def is_field(self) -> bool:
        return self.kind == "field"

    @property
    def is_valuation(self) -> bool:
        return self.kind in ("valuation", "field")

    @property
    def valuation_like(self) -> bool:
        """A valuation ring: valuation atoms, and one-variable power series or
        localized polynomial rings (DVRs)."""
        return self.kind == "valuation" or (self.kind in ("power_series", "localized_polynomial")
                                            and self.group.n == 1)

    @property
    def dim(self) -> int:
        if self.is_field:
            return 0
        if self.kind == "semigroup":
            return 1
        return self.group.rank

    @property
    def noetherian(self) -> bool:
        if self.kind == "valuation":
            return self.group.rank == 1
        return True

    @property
    def integrally_closed(self) -> bool:
        return self.kind != "semigroup"


@dataclass(frozen=True)
class LayeredIdeal:
    U: Staircase
    P: tuple  # ((key, sub-ideal), ...) sorted by key

    def part(self, w):
        for k, sub in self.P:
            if k == w:
                return sub
        return None

    @property
    def keys(self) -> list:
        return [k for k, _ in self.P]

    def to_json(self) -> dict:
        out: dict[str, Any] = {"U": self.U.to_json()}
        if self.P:
            out["P"] = [{"at": list(k), "ideal": sub.to_json()} for k, sub in self.P]
        return out

    def __repr__(self) -> str:
        inner = ", ".join(f"{list(k)}: {sub!r}" for k, sub in self.P)
        return f"({self.U!r} | {{{inner}}})"


Ideal = Union[Staircase, LayeredIdeal]


def _plus(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _minus(a, b):
    return tuple(x - y for x, y in zip(a, b))


@dataclass(frozen=True)
class Stack:
    layers: tuple[Layer, ...]
    # finite_over[i]: the residue field of layer i is a finite extension of the
    # field forming layer i+1 (only meaningful when layer i+1 is a field).
    finite_over: tuple[bool, ...] = field(default=())

    def __post_init__(self):
        if not self.layers:
            raise LayerError("empty stack")
        for i, L in enumerate(self.layers[:-1]):
            if L.is_field:
                raise LayerError(f"field layer {L.label or i} above the bottom")
        if not self.finite_over:
            object.__setattr__(self, "finite_over", (False,) * len(self.layers))

    # -- structure --------------------------------------------------------
    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def top(self) -> Layer:
        return self.layers[0]

    @property
    def is_field(self) -> bool:
        return self.depth == 1 and self.top.is_field

    def lower(self) -> "Stack":
        if self.depth == 1:
            raise LayerError("bottom stack has no lower part")
        return Stack(self.layers[1:], self.finite_over[1:])

    def full(self, i: int) -> bool:
        """Is the transition below layer i full (frac of layer i+1 = residue of i)?"""
        return self.layers[i + 1].fraction == self.layers[i].residue

    @property
    def dim(self) -> int:
        return sum(L.dim for L in self.layers)

    def N(self) -> Staircase:
        return Staircase.maximal(self.top.group)

    def zero_path(self) -> Path:
        return tuple(L.group.zero() for L in self.layers)

    def conform_path(self, path: Sequence) -> Path:
        if len(path) > self.depth:
            # Values in dropped lower layers only record the size of a leading
            # coefficient; over this stack that coefficient is a unit.
            path = path[: self.depth]
        if len(path) != self.depth:
            raise LayerError(f"path {path} has {len(path)} layers, stack has {self.depth}")
        return tuple(L.group.conform(tuple(v) if isinstance(v, (list, tuple)) else v)
                     for L, v in zip(self.layers, path))

    # -- constructors -----------------------------------------------------
    def make(self, U: Staircase, P: dict | Iterable = ()) -> Ideal:
        items = dict(P) if not isinstance(P, dict) else P
        if self.depth == 1:
            if items:
                raise LayerError("bottom level carries no partial positions")
            return U
        kept = tuple(sorted((k, v) for k, v in items.items() if k not in U))
        return LayeredIdeal(U, kept)

    def ring(self) -> Ideal:
        if self.depth == 1:
            return Staircase.ring(self.top.group)
        return self.make(self.N(), {self.top.group.zero(): self.lower().ring()})

    def maximal(self) -> Ideal:
        if self.depth == 1:
            if self.top.is_field:
                raise ZeroIdealError("a field has zero maximal ideal")
            return Staircase.maximal(self.top.group)
        if self.lower().is_field:
            return self.make(self.N(), {})
        return self.make(self.N(), {self.top.group.zero(): self.lower().maximal()})

    def full_at(self, w) -> Ideal:
        """Everything of top value >= w: the T-ideal generated by one full monomial."""
        w = self.top.group.conform(w)
        return self.make(Staircase(self.top.group, [w]), {})

    def principal(self, path: Sequence) -> Ideal:
        path = self.conform_path(path)
        w = path[0]
        if self.depth == 1:
            return Staircase(self.top.group, [w])
        U = self.N().translate(w)
        return self.make(U, {w: self.lower().principal(path[1:])})

    def generated(self, paths: Iterable[Sequence]) -> Ideal:
        ideals = [self.principal(p) for p in paths]
        if not ideals:
            raise ZeroIdealError("no generators")
        return reduce(self.add, ideals)

    # -- membership and order ---------------------------------------------
    def contains_path(self, I: Ideal, path: Sequence) -> bool:
        path = self.conform_path(path)
        if self.depth == 1:
            return path[0] in I
        if path[0] in I.U:
            return True
        sub = I.part(path[0])
        return sub is not None and self.lower().contains_path(sub, path[1:])

    def leq(self, J: Ideal, I: Ideal) -> bool:
        """J inside I."""
        if self.depth == 1:
            return st_contains(I, J)
        if not st_contains(I.U, J.U):
            return False
        low = self.lower()
        for w, sub in J.P:
            if w in I.U:
                continue
            other = I.part(w)
            if other is None or not low.leq(sub, other):
                return False
        return True

    def is_ring(self, I: Ideal) -> bool:
        return I == self.ring()

    def is_integral(self, I: Ideal) -> bool:
        return self.leq(I, self.ring())

    # -- arithmetic -------------------------------------------------------
    def add(self, I: Ideal, J: Ideal) -> Ideal:
        if self.depth == 1:
            return st_add(I, J)
        U = st_add(I.U, J.U)
        low = self.lower()
        P: dict = {}
        for w, sub in I.P + J.P:
            if w in U:
                continue
            P[w] = low.add(P[w], sub) if w in P else sub
        return self.make(U, P)

    def mul(self, I: Ideal, J: Ideal) -> Ideal:
        if self.depth == 1:
            return st_product(I, J)
        G = self.top.group
        parts = [st_product(I.U, J.U)]
        if J.P:
            parts.append(st_product(I.U, Staircase(G, J.keys)))
        if I.P:
            parts.append(st_product(Staircase(G, I.keys), J.U))
        U = reduce(st_add, parts)
        low = self.lower()
        P: dict = {}
        for (w1, a), (w2, b) in itertools.product(I.P, J.P):
            w = _plus(w1, w2)
            if w in U:
                continue
            ab = low.mul(a, b)
            P[w] = low.add(P[w], ab) if w in P else ab
        return self.make(U, P)

    def meet(self, I: Ideal, J: Ideal) -> Ideal:
        if self.depth == 1:
            return st_meet(I, J)
        U = st_meet(I.U, J.U)
        low = self.lower()
        P: dict = {}
        for A, B in ((I, J), (J, I)):
            for w, sub in A.P:
                if w in B.U:
                    P[w] = sub
                elif (other := B.part(w)) is not None:
                    P[w] = low.meet(sub, other)
        return self.make(U, P)

    def colon(self, I: Ideal, J: Ideal, fractional: bool = True) -> Ideal:
        """(I : J) computed layer by layer."""
        if self.depth == 1:
            return st_colon(I, J, fractional)
        UI, UJ = I.U, J.U
        parts = [st_colon(UI, UJ)] + [UI.translate(tuple(-c for c in w2)) for w2 in J.keys]
        Uc = reduce(st_meet, parts)
        low = self.lower()
        P: dict = {}
        for w1, w2 in itertools.product(I.keys, J.keys):
            w = _minus(w1, w2)
            if w in Uc or w in P:
                continue
            if not st_contains(UI, UJ.translate(w)):
                continue
            subs = []
            ok = True
            for k2, b in J.P:
                target = _plus(w, k2)
                if target in UI:
                    continue
                a = I.part(target)
                if a is None:
                    ok = False
                    break
                subs.append(low.colon(a, b))
            if ok and subs:
                P[w] = reduce(low.meet, subs)
        out = self.make(Uc, P)
        if not fractional:
            out = self.meet(out, self.ring())
        return out

    def inverse(self, I: Ideal) -> Ideal:
        return self.colon(self.ring(), I)

    def v_closure(self, I: Ideal) -> Ideal:
        return self.inverse(self.inverse(I))

    def power(self, I: Ideal, n: int) -> Ideal:
        if n < 1:
            raise LayerError("powers start at 1")
        return reduce(self.mul, [I] * n)

    # -- elements ---------------------------------------------------------
    def mul_path(self, a: Sequence, b: Sequence) -> Path:
        a, b = self.conform_path(a), self.conform_path(b)
        return tuple(_plus(x, y) for x, y in zip(a, b))

    def div_path(self, a: Sequence, b: Sequence) -> Path:
        a, b = self.conform_path(a), self.conform_path(b)
        return tuple(_minus(x, y) for x, y in zip(a, b))

    def in_ring(self, path: Sequence) -> bool:
        return self.contains_path(self.ring(), path)

    def is_unit(self, path: Sequence) -> bool:
        path = self.conform_path(path)
        return self.in_ring(path) and self.in_ring(tuple(tuple(-c for c in v) for v in path))

    def first_nonzero_layer(self, path: Sequence) -> int | None:
        path = self.conform_path(path)
        for i, v in enumerate(path):
            if any(c != 0 for c in v):
                return i
        return None

    # -- finiteness -------------------------------------------------------
    def minimal_monomials(self, I: Ideal) -> list[Path]:
        """Monomials generating ``I`` up to full positions: key monomials and
        unit-coefficient monomials at the corners of ``U``."""
        if self.depth == 1:
            return [(g,) for g in I.generators]
        low = self.lower()
        out: list[Path] = []
        for w, sub in I.P:
            out.extend((w,) + m for m in low.minimal_monomials(sub))
        zero_low = low.zero_path()
        for g in I.U.generators:
            out.append((g,) + zero_low)
        return sorted(set(out))

    def free_full(self, I: LayeredIdeal) -> list:
        """Corners of U not reached from a partial position."""
        N = self.N()
        return [g for g in I.U.generators
                if not any(g in N.translate(w) for w in I.keys)]

    def is_fg(self, I: Ideal) -> bool:
        if self.depth == 1:
            return True
        low = self.lower()
        if self.free_full(I):
            if not (low.is_field and self.finite_over[0]):
                return False
        return all(low.is_fg(sub) for _, sub in I.P)

    def is_principal(self, I: Ideal) -> Path | None:
        for m in self.minimal_monomials(I):
            if self.principal(m) == I:
                return m
        return None

    # -- literals ---------------------------------------------------------
    def parse_ideal(self, obj) -> Ideal:
        G = self.top.group
        if self.depth == 1:
            gens = obj["U"] if isinstance(obj, dict) else obj
            if isinstance(obj, dict) and obj.get("P"):
                raise FragmentError("bottom level literal with partial positions")
            return Staircase(G, [_vec(g) for g in gens])
        if not isinstance(obj, dict) or "U" not in obj:
            raise FragmentError(f"layered literal needs a 'U' entry: {obj!r}")
        U = Staircase(G, [_vec(g) for g in obj["U"]])
        low = self.lower()
        P = {}
        for entry in obj.get("P", []):
            w = G.conform(_vec(entry["at"]))
            P[w] = low.parse_ideal(entry["ideal"])
        out = self.make(U, P)
        self.validate(out)
        return out

    def validate(self, I: Ideal) -> None:
        if self.depth == 1:
            return
        N = self.N()
        for w, sub in I.P:
            if not st_contains(I.U, N.translate(w)):
                raise FragmentError(f"position {list(w)} is not absorbed: w + N must lie in U")
            self.lower().validate(sub)


def _vec(g):
    return tuple(g) if isinstance(g, (list, tuple)) else (g,)


def ideal_to_json(I: Ideal):
    return I.to_json()
