"""Three-valued answers with provenance."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Any, Iterable


class Value(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"

    def negate(self) -> "Value":
        return {Value.YES: Value.NO, Value.NO: Value.YES}.get(self, Value.UNKNOWN)

    @classmethod
    def of(cls, b: bool) -> "Value":
        return cls.YES if b else cls.NO


class VerdictError(ValueError):
    pass


@dataclass(frozen=True)
class Provenance:
    """One justification: a computation trace, a rule firing, a declared fact,
    or a structural fact read off the constructor tree."""
    kind: str
    rule: str | None = None
    citation: str | None = None
    trace: tuple[str, ...] = ()

    KINDS = ("computation", "rule", "declared", "constructor")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise VerdictError(f"unknown provenance kind {self.kind!r}")

    def to_json(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind}
        if self.rule:
            out["rule"] = self.rule
        if self.citation:
            out["citation"] = self.citation
        if self.trace:
            out["trace"] = list(self.trace)
        return out


def computed(*trace: str) -> Provenance:
    return Provenance("computation", trace=tuple(trace))


def structural(note: str) -> Provenance:
    return Provenance("constructor", trace=(note,))


@dataclass(frozen=True)
class Verdict:
    value: Value
    provenance: tuple[Provenance, ...] = ()
    attempted: tuple[str, ...] = ()
    conditional_on: tuple[str, ...] = ()
    witness: Any = None
    result: Any = None

    def __post_init__(self):
        if self.value is not Value.UNKNOWN and not self.provenance:
            raise VerdictError(f"{self.value.value} verdict without provenance")
        if self.value is Value.UNKNOWN and not self.attempted:
            raise VerdictError("Unknown verdict without an attempted list")

    @classmethod
    def yes(cls, *prov: Provenance, **kw) -> "Verdict":
        return cls(Value.YES, tuple(prov), **kw)

    @classmethod
    def no(cls, *prov: Provenance, **kw) -> "Verdict":
        return cls(Value.NO, tuple(prov), **kw)

    @classmethod
    def unknown(cls, *attempted: str, **kw) -> "Verdict":
        return cls(Value.UNKNOWN, (), tuple(attempted) or ("nothing applicable",), **kw)

    @classmethod
    def of(cls, b: bool, *prov: Provenance, **kw) -> "Verdict":
        return cls(Value.of(b), tuple(prov), **kw)

    @property
    def known(self) -> bool:
        return self.value is not Value.UNKNOWN

    @property
    def is_yes(self) -> bool:
        return self.value is Value.YES

    @property
    def is_no(self) -> bool:
        return self.value is Value.NO

    def with_witness(self, witness: Any) -> "Verdict":
        return replace(self, witness=witness)

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "value": self.value.value,
            "provenance": [p.to_json() for p in self.provenance],
            "conditional_on": sorted(self.conditional_on),
        }
        if self.attempted:
            out["attempted"] = list(self.attempted)
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.result is not None:
            out["result"] = _jsonable(self.result)
        return out


def _jsonable(x: Any):
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (str, int, bool)) or x is None:
        return x
    return str(x)


def first_known(verdicts: Iterable[Verdict], attempted: Iterable[str] = ()) -> Verdict:
    tried = list(attempted)
    for v in verdicts:
        if v.known:
            return v
        tried.extend(v.attempted)
    return Verdict.unknown(*tried)
