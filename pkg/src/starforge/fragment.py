"""Fragment ideals that are not finite layered data: directed families of
layered ideals, and the monomial fragment of ``V + X V_P[X]``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .values import ValueGroup

WITNESS_CHECK = 6  # indices checked when validating a directed family


@dataclass(frozen=True)
class DirectedUnion:
    """Upward-directed union of the ideals ``member(0) <= member(1) <= ...``."""
    member: Callable[[int], object]
    description: str

    def to_json(self) -> dict:
        return {"kind": "DirectedUnion", "description": self.description}

    def __repr__(self) -> str:
        return f"DirectedUnion({self.description})"


@dataclass(frozen=True)
class DirectedIntersection:
    """Downward-directed intersection of principal fractional ideals."""
    member: Callable[[int], object]
    description: str

    def to_json(self) -> dict:
        return {"kind": "DirectedIntersection", "description": self.description}

    def __repr__(self) -> str:
        return f"DirectedIntersection({self.description})"


@dataclass(frozen=True)
class PrincipalBy:
    element: tuple
    name: str = ""

    def to_json(self) -> dict:
        return {"kind": "PrincipalBy", "element": self.name or [list(v) for v in self.element]}


def check_directed(fam, leq: Callable[[object, object], bool], upward: bool, n: int = WITNESS_CHECK) -> bool:
    """Verify monotonicity of the first ``n`` members."""
    for i in range(n):
        a, b = fam.member(i), fam.member(i + 1)
        if not (leq(a, b) if upward else leq(b, a)):
            return False
    return True


# -- the fragment of V + X V_P[X] ----------------------------------------

@dataclass(frozen=True)
class PolyExtFragment:
    """Monomials ``c X^j`` of ``D = V + X V_P[X]``, recorded as ``(v(c), j)``.

    ``V`` has value group ``LexZ(r)``; ``P`` has height ``h``, so ``V_P`` has
    values ``pi(v) = v[:h]``.  ``c X^j`` lies in ``D`` iff ``v >= 0`` when
    ``j = 0`` and ``pi(v) >= 0`` when ``j >= 1``.
    """
    group: ValueGroup
    height: int

    def pi(self, v) -> tuple:
        return tuple(v[: self.height])

    def in_ring(self, mono) -> bool:
        v, j = mono
        if j < 0:
            return False
        target = tuple(v) if j == 0 else self.pi(v)
        return _lex_nonneg(target)

    def divides(self, a, b) -> bool:
        """Does ``a`` divide ``b`` in D (b in aD)?"""
        (va, ja), (vb, jb) = a, b
        return self.in_ring((tuple(x - y for x, y in zip(vb, va)), jb - ja))

    def witness(self, n: int):
        """a_n: value (0, ..., 0, n) in the prefix coordinates below P, degree 0.

        These are elements of M outside P; P is the intersection of a_n V."""
        r = self.group.n
        v = [0] * r
        v[self.height] = n + 1
        return (tuple(v), 0)

    def frak_p(self) -> DirectedIntersection:
        return DirectedIntersection(lambda n: PrincipalBy(self.witness(n)),
                                    "intersection of a D over a in M outside P")

    def in_frak_p(self, mono) -> bool:
        v, j = mono
        if j == 0:
            return _lex_pos(self.pi(v))
        return _lex_nonneg(self.pi(v))


def _lex_sign(v) -> int:
    for c in v:
        if c:
            return 1 if c > 0 else -1
    return 0


def _lex_nonneg(v) -> bool:
    return _lex_sign(v) >= 0


def _lex_pos(v) -> bool:
    return _lex_sign(v) > 0
