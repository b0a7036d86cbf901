"""Abstract syntax for domain descriptions, and the field-label registry."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from .values import ValueGroup
from .verdict import Value


class DescError(ValueError):
    """Malformed or invalid domain description; ``path`` locates the node."""

    def __init__(self, msg: str, path: str = "desc"):
        super().__init__(f"{path}: {msg}")
        self.path = path


# -- fields ----------------------------------------------------------------

@dataclass(frozen=True)
class Extension:
    degree: int | str | None = None  # integer, "infinite" or unknown
    algebraically_closed_in: bool | None = None


@dataclass(frozen=True)
class FieldInfo:
    label: str
    subfield_of: tuple[tuple[str, Extension], ...] = ()
    algebraically_closed: bool = False
    real_closed: bool = False
    uncountable: bool = False


@dataclass
class Fields:
    """Labels only; no arithmetic.  Subfield relations are declared."""
    info: dict[str, FieldInfo] = field(default_factory=dict)

    def get(self, label: str) -> FieldInfo:
        return self.info.get(label, FieldInfo(label))

    def _ext(self, sub: str, sup: str) -> Extension | None:
        for lab, ext in self.get(sub).subfield_of:
            if lab == sup:
                return ext
        return None

    def is_subfield(self, sub: str, sup: str, _seen=None) -> bool:
        if sub == sup:
            return True
        seen = _seen or set()
        seen.add(sub)
        for lab, _ in self.get(sub).subfield_of:
            if lab not in seen and self.is_subfield(lab, sup, seen):
                return True
        return False

    def degree(self, sub: str, sup: str) -> int | str | None:
        if sub == sup:
            return 1
        ext = self._ext(sub, sup)
        return ext.degree if ext else None

    def finite(self, sub: str, sup: str) -> bool:
        return isinstance(self.degree(sub, sup), int)

    def algebraically_closed_in(self, sub: str, sup: str) -> Value:
        if sub == sup or self.get(sub).algebraically_closed:
            return Value.YES
        ext = self._ext(sub, sup)
        if ext and ext.algebraically_closed_in is not None:
            return Value.of(ext.algebraically_closed_in)
        d = self.degree(sub, sup)
        if isinstance(d, int) and d > 1:
            return Value.NO  # a finite proper extension is algebraic
        return Value.UNKNOWN


# -- nodes -----------------------------------------------------------------

@dataclass(frozen=True)
class FieldAtom:
    field: str
    label: str | None = None


@dataclass(frozen=True)
class ValuationAtom:
    group: ValueGroup
    residue: str
    fraction: str
    max_name: str | None = None
    prime_names: tuple[str, ...] = ()
    label: str | None = None


MONOMIAL_KINDS = ("PowerSeries", "LocalizedPolynomial", "NumericalSemigroup")


@dataclass(frozen=True)
class FamilyRep:
    name: str
    coordinates: tuple[int, ...]  # monomial prime generated by these variables


@dataclass(frozen=True)
class MonomialAtom:
    kind: str
    coefficients: str
    n: int = 0
    semigroup: tuple[int, ...] = ()
    fraction: str | None = None
    max_name: str | None = None
    representatives: tuple[FamilyRep, ...] = ()
    label: str | None = None

    @property
    def group(self) -> ValueGroup:
        if self.kind == "NumericalSemigroup":
            return ValueGroup.semigroup(self.semigroup)
        return ValueGroup.nn(self.n)

    @property
    def fraction_label(self) -> str:
        if self.fraction:
            return self.fraction
        if self.kind == "NumericalSemigroup":
            return f"{self.coefficients}((t))"
        bracket = "[[{}]]" if self.kind == "PowerSeries" else "({})"
        return "Frac " + self.coefficients + bracket.format(self.n)


@dataclass(frozen=True)
class Pullback:
    T: "Node"
    R: "Node"
    conductor_name: str | None = None
    label: str | None = None


@dataclass(frozen=True)
class ValuationPolyExt:
    """V + X V_P[X] for a valuation atom V and its prime of the given height."""
    V: ValuationAtom
    prime_height: int
    label: str | None = None


@dataclass(frozen=True)
class Localization:
    D: "Node"
    prime: str
    label: str | None = None


@dataclass(frozen=True)
class NagataRing:
    D: "Node"
    star: str = "d"
    label: str | None = None


Node = Union[FieldAtom, ValuationAtom, MonomialAtom, Pullback, ValuationPolyExt, Localization, NagataRing]

KIND_NAMES = {
    FieldAtom: "FieldAtom", ValuationAtom: "ValuationAtom", MonomialAtom: "MonomialAtom",
    Pullback: "Pullback", ValuationPolyExt: "ValuationPolyExt", Localization: "Localization",
    NagataRing: "NagataRing",
}


def children(node: Node) -> list[tuple[str, Node]]:
    if isinstance(node, Pullback):
        return [("T", node.T), ("R", node.R)]
    if isinstance(node, ValuationPolyExt):
        return [("V", node.V)]
    if isinstance(node, (Localization, NagataRing)):
        return [("D", node.D)]
    return []


def walk(node: Node, path: str = "desc") -> Iterator[tuple[str, Node]]:
    yield path, node
    for name, child in children(node):
        yield from walk(child, f"{path}.{name}")


def find_label(node: Node, label: str) -> Node | None:
    for _, n in walk(node):
        if getattr(n, "label", None) == label:
            return n
    return None
