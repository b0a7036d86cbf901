"""JSON domain files: schema validation, parsing to descriptions, canonical
serialization, and materialization into a model with its named data."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .desc import (DescError, Extension, FamilyRep, FieldAtom, FieldInfo, Fields, Localization,
                   MonomialAtom, NagataRing, Node, Pullback, ValuationAtom, ValuationPolyExt)
from .domain import DomainModel, UnknownPrime, build
from .fragment import PrincipalBy
from .layered import LayerError
from .values import Kind, ValueGroup, ValueGroupError
from .verdict import Value


class SchemaError(ValueError):
    """The document violates the file schema; ``pointer`` is a JSON pointer."""

    def __init__(self, msg: str, pointer: str = ""):
        super().__init__(f"{pointer or '/'}: {msg}")
        self.pointer = pointer or "/"


class BuildError(ValueError):
    """Schema-valid, but the description or its named data does not build."""


@lru_cache(maxsize=None)
def schema(name: str) -> dict:
    text = resources.files("starforge").joinpath("schemas").joinpath(f"{name}.schema.json").read_text("utf-8")
    return json.loads(text)


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def validate(obj: Any, which: str = "domain") -> None:
    v = jsonschema.Draft202012Validator(schema(which))
    errors = sorted(v.iter_errors(obj), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        # the deepest error is usually the informative one for oneOf / if-then nests
        e = max(errors, key=lambda e: len(e.absolute_path))
        raise SchemaError(e.message, _pointer(e.absolute_path))


# -- documents ---------------------------------------------------------------

@dataclass
class DomainFile:
    name: str
    desc: Node
    fields: Fields = field(default_factory=Fields)
    elements: dict[str, Any] = field(default_factory=dict)
    named_ideals: dict[str, Any] = field(default_factory=dict)
    declared: dict[str, tuple[Value, str]] = field(default_factory=dict)
    expect: dict[str, Any] = field(default_factory=dict)
    note: str = ""


def loads(text: str) -> DomainFile:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"not JSON: {e.msg} (line {e.lineno})") from None
    return parse(obj)


def load(path: str | Path) -> DomainFile:
    return loads(Path(path).read_text("utf-8"))


def parse(obj: dict) -> DomainFile:
    validate(obj)
    return DomainFile(
        name=obj["name"],
        desc=node_from_json(obj["desc"], "/desc"),
        fields=fields_from_json(obj.get("fields", {})),
        elements=dict(obj.get("elements", {})),
        named_ideals=dict(obj.get("named_ideals", {})),
        declared={f: (Value(d["value"]), d["source"]) for f, d in obj.get("declared", {}).items()},
        expect=dict(obj.get("expect", {})),
        note=obj.get("note", ""),
    )


def to_json(df: DomainFile) -> dict:
    out: dict[str, Any] = {"name": df.name, "desc": node_to_json(df.desc)}
    if df.note:
        out["note"] = df.note
    if df.fields.info:
        out["fields"] = fields_to_json(df.fields)
    for key in ("elements", "named_ideals", "expect"):
        if getattr(df, key):
            out[key] = getattr(df, key)
    if df.declared:
        out["declared"] = {f: {"value": v.value, "source": s} for f, (v, s) in df.declared.items()}
    return out


def dumps(df: DomainFile | dict) -> str:
    """Canonical text: sorted keys, two-space indent, LF line ends, final newline."""
    obj = to_json(df) if isinstance(df, DomainFile) else df
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def canonical(text: str) -> str:
    return dumps(loads(text))


# -- fields --------------------------------------------------------------------

def fields_from_json(obj: dict) -> Fields:
    info = {}
    for label, d in obj.items():
        subs = tuple((sup, Extension(e.get("degree"), e.get("algebraically_closed_in")))
                     for sup, e in sorted(d.get("subfield_of", {}).items()))
        info[label] = FieldInfo(label, subs, d.get("algebraically_closed", False),
                                d.get("real_closed", False), d.get("uncountable", False))
    return Fields(info)


def fields_to_json(F: Fields) -> dict:
    out = {}
    for label, fi in F.info.items():
        d: dict[str, Any] = {}
        if fi.subfield_of:
            d["subfield_of"] = {}
            for sup, ext in fi.subfield_of:
                e = {}
                if ext.degree is not None:
                    e["degree"] = ext.degree
                if ext.algebraically_closed_in is not None:
                    e["algebraically_closed_in"] = ext.algebraically_closed_in
                d["subfield_of"][sup] = e
        for flag in ("algebraically_closed", "real_closed", "uncountable"):
            if getattr(fi, flag):
                d[flag] = True
        out[label] = d
    return out


# -- groups and nodes ------------------------------------------------------------

def group_from_json(obj: dict, path: str) -> ValueGroup:
    try:
        k = Kind(obj["kind"])
        if k is Kind.LEX_Z:
            return ValueGroup.lex(obj["n"])
        if k is Kind.COMPONENTWISE_N:
            return ValueGroup.nn(obj["n"])
        if k is Kind.RATIONAL:
            return ValueGroup.rational(obj["denominators"])
        return ValueGroup.semigroup(obj["generators"])
    except ValueGroupError as e:
        raise SchemaError(str(e), path) from None


def group_to_json(G: ValueGroup) -> dict:
    if G.kind is Kind.RATIONAL:
        return {"kind": G.kind.value, "denominators": list(G.denominators)}
    if G.kind is Kind.SEMIGROUP:
        return {"kind": G.kind.value, "generators": list(G.generators)}
    return {"kind": G.kind.value, "n": G.n}


def node_from_json(obj: dict, path: str = "/desc") -> Node:
    k = obj["kind"]
    lab = obj.get("label")
    if k == "FieldAtom":
        return FieldAtom(obj["field"], lab)
    if k == "ValuationAtom":
        return ValuationAtom(group_from_json(obj["group"], path + "/group"), obj["residue"], obj["fraction"],
                             obj.get("max_name"), tuple(obj.get("prime_names", ())), lab)
    if k == "MonomialAtom":
        ring = obj["ring"]
        if ring == "NumericalSemigroup":
            if "semigroup" not in obj or "n" in obj:
                raise SchemaError("a semigroup ring takes 'semigroup' and no 'n'", path)
        elif "n" not in obj or "semigroup" in obj:
            raise SchemaError(f"{ring} takes 'n' and no 'semigroup'", path)
        reps = tuple(FamilyRep(r["name"], tuple(r["coordinates"])) for r in obj.get("representatives", ()))
        return MonomialAtom(ring, obj["coefficients"], obj.get("n", 0), tuple(obj.get("semigroup", ())),
                            obj.get("fraction"), obj.get("max_name"), reps, lab)
    if k == "Pullback":
        return Pullback(node_from_json(obj["T"], path + "/T"), node_from_json(obj["R"], path + "/R"),
                        obj.get("conductor_name"), lab)
    if k == "Tower":
        # top layer first; each lower layer is glued below the tower above it
        layers = [node_from_json(x, f"{path}/layers/{i}") for i, x in enumerate(obj["layers"])]
        names = list(obj.get("conductor_names", ()))
        if names and len(names) != len(layers) - 1:
            raise SchemaError("conductor_names needs one name per gluing", path + "/conductor_names")
        out = layers[0]
        for i, low in enumerate(layers[1:]):
            last = i == len(layers) - 2
            out = Pullback(out, low, names[i] if names else None, lab if last else None)
        return out
    if k == "ValuationPolyExt":
        V = node_from_json(obj["V"], path + "/V")
        if not isinstance(V, ValuationAtom):
            raise SchemaError("V must be a ValuationAtom", path + "/V")
        return ValuationPolyExt(V, obj["prime_height"], lab)
    if k == "Localization":
        return Localization(node_from_json(obj["D"], path + "/D"), obj["prime"], lab)
    if k == "NagataRing":
        return NagataRing(node_from_json(obj["D"], path + "/D"), obj.get("star", "d"), lab)
    raise SchemaError(f"unknown node kind {k!r}", path)


def node_to_json(n: Node) -> dict:
    out: dict[str, Any]
    if isinstance(n, FieldAtom):
        out = {"kind": "FieldAtom", "field": n.field}
    elif isinstance(n, ValuationAtom):
        out = {"kind": "ValuationAtom", "group": group_to_json(n.group), "residue": n.residue,
               "fraction": n.fraction}
        if n.max_name:
            out["max_name"] = n.max_name
        if n.prime_names:
            out["prime_names"] = list(n.prime_names)
    elif isinstance(n, MonomialAtom):
        out = {"kind": "MonomialAtom", "ring": n.kind, "coefficients": n.coefficients}
        if n.kind == "NumericalSemigroup":
            out["semigroup"] = list(n.semigroup)
        else:
            out["n"] = n.n
        if n.fraction:
            out["fraction"] = n.fraction
        if n.max_name:
            out["max_name"] = n.max_name
        if n.representatives:
            out["representatives"] = [{"name": r.name, "coordinates": list(r.coordinates)}
                                      for r in n.representatives]
    elif isinstance(n, Pullback):
        out = {"kind": "Pullback", "T": node_to_json(n.T), "R": node_to_json(n.R)}
        if n.conductor_name:
            out["conductor_name"] = n.conductor_name
    elif isinstance(n, ValuationPolyExt):
        out = {"kind": "ValuationPolyExt", "V": node_to_json(n.V), "prime_height": n.prime_height}
    elif isinstance(n, Localization):
        out = {"kind": "Localization", "D": node_to_json(n.D), "prime": n.prime}
    elif isinstance(n, NagataRing):
        out = {"kind": "NagataRing", "D": node_to_json(n.D), "star": n.star}
    else:
        raise TypeError(f"not a description node: {n!r}")
    if n.label:
        out["label"] = n.label
    return out


# -- materialization --------------------------------------------------------------

def split_scope(key: str) -> tuple[str | None, str]:
    """``"T::X"`` -> ``("T", "X")``; an unqualified key lives on the root."""
    if "::" in key:
        scope, _, rest = key.partition("::")
        return scope, rest
    return None, key


def model(df: DomainFile) -> DomainModel:
    """Build the model and attach elements, named ideals and declared facts
    (scope-qualified keys go to the labelled sub-model)."""
    try:
        m = build(df.desc, df.fields, name=df.name)
    except (DescError, LayerError, ValueGroupError) as e:
        raise BuildError(str(e)) from None

    def target(scope):
        if scope is None:
            return m
        try:
            return m.scope(scope)
        except (UnknownPrime, DescError, LayerError) as e:
            raise BuildError(f"scope {scope!r}: {e}") from None

    for key, raw in sorted(df.elements.items()):
        scope, name = split_scope(key)
        t = target(scope)
        t.elements[name] = element(t, raw, key)
    for key, (v, src) in sorted(df.declared.items()):
        scope, flag = split_scope(key)
        target(scope).declared[flag] = (v, src)
    for key, raw in df.named_ideals.items():  # document order: later ideals may use earlier ones
        scope, name = split_scope(key)
        t = target(scope)
        t.named_ideals[name] = ideal(t, raw, key)
    return m


def _scalar(c):
    return Fraction(c) if isinstance(c, str) else c


def element(m: DomainModel, raw, key: str = "?"):
    try:
        if m.kind == "polyext":
            if not isinstance(raw, dict):
                raise BuildError(f"element {key}: V + X V_P[X] elements are {{value, degree}} monomials")
            return (m.polyext.group.conform(tuple(_scalar(c) for c in raw["value"])), raw["degree"])
        if m.kind != "stack" or isinstance(raw, dict):
            raise BuildError(f"element {key}: not representable in a {m.kind} model")
        path = [tuple(_scalar(c) for c in v) if isinstance(v, list) else _scalar(v) for v in raw]
        p = m.stack.conform_path(path)
        if not m.stack.in_ring(p):
            raise BuildError(f"element {key}: path {raw} is not in D")
        return p
    except (LayerError, ValueGroupError) as e:
        raise BuildError(f"element {key}: {e}") from None


def _literal(obj):
    if isinstance(obj, dict):
        out = {"U": [[_scalar(c) for c in g] for g in obj["U"]]}
        if "P" in obj:
            out["P"] = [{"at": [_scalar(c) for c in e["at"]], "ideal": _literal(e["ideal"])} for e in obj["P"]]
        return out
    return [[_scalar(c) for c in g] for g in obj]


def ideal(m: DomainModel, raw, key: str = "?"):
    try:
        if isinstance(raw, dict):
            if m.kind != "stack":
                raise BuildError(f"ideal {key}: layered literals need a layer-stack model")
            return m.stack.parse_ideal(_literal(raw))
        return IdealExpr(m).parse(raw)
    except (LayerError, ValueGroupError) as e:
        raise BuildError(f"ideal {key}: {e}") from None


# -- ideal expressions ---------------------------------------------------------------
#
#   expr   := term (("+" | "&") term)*        sum, intersection
#   term   := power ("*" power)*              product
#   power  := atom ("^" INT)?
#   atom   := NAME | "(" expr ("," expr)* ")" | "(" expr ":" expr ")"
#
# NAME is a named ideal, a prime, "D", or an element (its principal ideal).
# A parenthesised list is the ideal generated by its members.

_TOKEN = re.compile(r"\s*(?:([A-Za-z][A-Za-z0-9_.]*|\(0\))|(\d+)|(.))")


class IdealExpr:
    def __init__(self, m: DomainModel):
        self.m = m

    def parse(self, text: str):
        self.toks = []
        for name, num, ch in _TOKEN.findall(text):
            if name:
                self.toks.append(("name", name))
            elif num:
                self.toks.append(("int", int(num)))
            elif ch.strip():
                self.toks.append(("op", ch))
        self.i = 0
        out = self.expr()
        if self.i != len(self.toks):
            raise BuildError(f"ideal expression {text!r}: trailing input at token {self.i}")
        return out

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, val=None):
        t = self.peek()
        if t[0] is None or (kind and t[0] != kind) or (val and t[1] != val):
            raise BuildError(f"ideal expression: expected {val or kind}, got {t[1]!r}")
        self.i += 1
        return t[1]

    def _S(self):
        if self.m.kind != "stack":
            raise BuildError("ideal arithmetic needs a layer-stack model")
        return self.m.stack

    def expr(self):
        out = self.term()
        while self.peek() in (("op", "+"), ("op", "&")):
            op = self.take()
            rhs = self.term()
            out = self._S().add(out, rhs) if op == "+" else self._S().meet(out, rhs)
        return out

    def term(self):
        out = self.power()
        while self.peek() == ("op", "*"):
            self.take()
            out = self._S().mul(out, self.power())
        return out

    def power(self):
        out = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            out = self._S().power(out, self.take("int"))
        return out

    def atom(self):
        kind, val = self.peek()
        if kind == "name":
            self.take()
            return self.resolve(val)
        self.take("op", "(")
        first = self.expr()
        if self.peek() == ("op", ":"):
            self.take()
            second = self.expr()
            self.take("op", ")")
            return self._S().colon(first, second)
        items = [first]
        while self.peek() == ("op", ","):
            self.take()
            items.append(self.expr())
        self.take("op", ")")
        return items[0] if len(items) == 1 else reduce(self._S().add, items)

    def resolve(self, name: str):
        m = self.m
        if name in m.named_ideals:
            return m.named_ideals[name]
        if name == "D" and m.kind == "stack":
            return m.ring()
        if name in m.elements:
            p = m.elements[name]
            if m.kind == "stack":
                return m.stack.principal(p)
            return PrincipalBy(p, name)
        if name in m.spectrum:
            I = m.prime_ideal(name)
            if I is None:
                raise BuildError(f"prime {name} has no fragment representation")
            return I
        raise BuildError(f"unknown name {name!r} in ideal expression")
