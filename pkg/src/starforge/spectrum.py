"""Prime spectra as small posets of named primes and symbolic families."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

COUNTABLE = "countably-infinite"
UNCOUNTABLE = "uncountable"


@dataclass(frozen=True)
class PrimeEntry:
    """A named prime, or a bundle of pairwise incomparable primes of one height.

    ``layer``/``layer_height`` locate it inside a layer stack; ``coordinates``
    is set for monomial representatives of a power-series/polynomial family.
    """
    name: str
    height: int
    layer: int = 0
    layer_height: int = 0
    family: bool = False
    cardinality: str = "1"
    coordinates: tuple[int, ...] = ()
    member_of: str | None = None  # representatives point at their family
    role: str = "prime"  # zero | prime | conductor | maximal | family

    def to_json(self) -> dict:
        out = {"name": self.name, "height": self.height, "role": self.role}
        if self.family:
            out["family"] = True
            out["cardinality"] = self.cardinality
        if self.member_of:
            out["member_of"] = self.member_of
        if self.coordinates:
            out["coordinates"] = list(self.coordinates)
        return out


@dataclass
class SpectrumPoset:
    entries: list[PrimeEntry] = field(default_factory=list)
    below: dict[str, set[str]] = field(default_factory=dict)  # strict containments
    complete: bool = True  # False when only part of the spectrum is modelled

    def add(self, e: PrimeEntry, contains: Iterable[str] = ()) -> None:
        self.entries.append(e)
        self.below[e.name] = set(contains)

    def __getitem__(self, name: str) -> PrimeEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(e.name == name for e in self.entries)

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    @property
    def dim(self) -> int:
        return max(e.height for e in self.entries)

    def maximal(self) -> list[PrimeEntry]:
        return [e for e in self.entries if not any(e.name in s for s in self.below.values())]

    def strictly_below(self, name: str) -> set[str]:
        todo, seen = list(self.below.get(name, ())), set()
        while todo:
            x = todo.pop()
            if x not in seen:
                seen.add(x)
                todo.extend(self.below.get(x, ()))
        return seen

    def covers(self) -> list[tuple[str, str]]:
        out = []
        for b, lows in self.below.items():
            for a in lows:
                if not any(a in self.strictly_below(c) for c in lows if c != a):
                    out.append((a, b))
        return sorted(out)

    def _bundles(self) -> list[PrimeEntry]:
        # representatives are already counted inside their family
        return [e for e in self.entries if e.member_of is None]

    def linearly_ordered(self) -> bool:
        if any(e.family and e.cardinality != "1" for e in self._bundles()):
            return False
        by_h: dict[int, int] = {}
        for e in self._bundles():
            by_h[e.height] = by_h.get(e.height, 0) + 1
        return all(c == 1 for c in by_h.values())

    def treed(self) -> bool:
        """Tree: no prime contains two incomparable primes."""
        for e in self._bundles():
            lows = [self[n] for n in self.strictly_below(e.name)]
            lows = [x for x in lows if x.member_of is None]
            for x in lows:
                if x.family and x.cardinality != "1":
                    return False
            hs = [x.height for x in lows]
            if len(hs) != len(set(hs)):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "primes": [e.to_json() for e in sorted(self.entries, key=lambda e: (e.height, e.name))],
            "covers": [list(c) for c in self.covers()],
            "linearly_ordered": self.linearly_ordered(),
            "treed": self.treed(),
            "complete": self.complete,
        }
