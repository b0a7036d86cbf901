"""Domain models: validated descriptions with layer stacks, spectra,
conductors and constructor-level flags."""
from __future__ import annotations

import threading
from dataclasses import dataclass, field, replace
from typing import Any

from .desc import (DescError, FamilyRep, FieldAtom, Fields, Localization, MonomialAtom, NagataRing,
                   Node, Pullback, ValuationAtom, ValuationPolyExt, find_label)
from .fragment import DirectedUnion, PolyExtFragment
from .layered import Ideal, Layer, LayeredIdeal, Stack
from .spectrum import COUNTABLE, UNCOUNTABLE, PrimeEntry, SpectrumPoset
from .staircase import Staircase
from .values import Kind, ValueGroup, quotient_by_convex
from .verdict import Value, Verdict, structural


class UnknownLocalization(ValueError):
    """The prime is only known as a member of a symbolic family."""


class UnknownPrime(KeyError):
    pass


@dataclass(frozen=True)
class Conductor:
    name: str
    layer: int
    ideal: Ideal
    overring: Ideal  # the T of this pullback level, as a fractional ideal of D


@dataclass
class DomainModel:
    desc: Node
    fields: Fields
    kind: str  # stack | polyext | nagata
    stack: Stack | None = None
    spectrum: SpectrumPoset = field(default_factory=SpectrumPoset)
    flags: dict[str, Verdict] = field(default_factory=dict)
    conductors: list[Conductor] = field(default_factory=list)
    maximal_name: str | None = None
    base: "DomainModel | None" = None
    polyext: PolyExtFragment | None = None
    name: str = ""
    elements: dict[str, Any] = field(default_factory=dict)
    named_ideals: dict[str, Any] = field(default_factory=dict)
    declared: dict[str, tuple[Value, str]] = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)
    _lock: Any = field(default_factory=threading.RLock, repr=False)

    # -- memo -------------------------------------------------------------
    def memo(self, key, fn):
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        val = fn()
        with self._lock:
            return self._cache.setdefault(key, val)

    # -- basics -------------------------------------------------------------
    @property
    def local(self) -> bool:
        return self.kind == "stack" or (self.kind == "nagata" and self.desc.star == "d")

    @property
    def is_field(self) -> bool:
        return self.kind == "stack" and self.stack.is_field

    @property
    def dim(self) -> int | None:
        if self.kind == "stack":
            return self.stack.dim
        if self.kind == "nagata":
            b = self.base
            if b.flags.get("Noetherian", Verdict.unknown("x")).is_yes or b.flags["valuation"].is_yes:
                return b.dim
        return None

    def prime(self, name: str) -> PrimeEntry:
        try:
            return self.spectrum[name]
        except KeyError:
            raise UnknownPrime(name) from None

    def prime_ideal(self, name: str):
        """Representation of a named prime as a fragment ideal, or None."""
        return self.memo(("prime", name), lambda: _prime_ideal(self, name))

    def ring(self) -> Ideal:
        return self.stack.ring()

    def maximal(self) -> Ideal:
        return self.stack.maximal()

    def scope(self, label: str) -> "DomainModel":
        """Sub-model named by a node label, or ``@prime`` for a localization."""
        def make():
            if label.startswith("@"):
                return build(localize(self, label[1:]), self.fields, name=f"{self.name}@{label[1:]}")
            node = find_label(self.desc, label)
            if node is None:
                raise UnknownPrime(f"no node labelled {label!r}")
            return build(node, self.fields, name=f"{self.name}::{label}")
        return self.memo(("scope", label), make)


# -- atoms to layers ---------------------------------------------------------

def _layer_of(node: Node, fields: Fields, path: str) -> Layer:
    if isinstance(node, FieldAtom):
        return Layer(ValueGroup.nn(0), "field", node.field, node.field, label=node.label or node.field)
    if isinstance(node, ValuationAtom):
        if not node.group.totally_ordered or node.group.kind is Kind.SEMIGROUP:
            raise DescError("a valuation atom needs a LexZ or rational value group", path)
        return Layer(node.group, "valuation", node.residue, node.fraction, label=node.label or "",
                     max_name=node.max_name, prime_names=tuple(node.prime_names))
    if isinstance(node, MonomialAtom):
        if node.kind == "NumericalSemigroup":
            if not node.semigroup:
                raise DescError("numerical semigroup atom needs generators", path)
            if 1 in node.semigroup:
                raise DescError("semigroup containing 1 is a power series ring; use PowerSeries(1)", path)
            return Layer(node.group, "semigroup", node.coefficients, node.fraction_label,
                         label=node.label or "", max_name=node.max_name)
        if node.kind not in ("PowerSeries", "LocalizedPolynomial"):
            raise DescError(f"unknown monomial atom kind {node.kind!r}", path)
        if node.n < 1:
            raise DescError("monomial atom needs at least one variable", path)
        reps = []
        for r in node.representatives:
            cs = tuple(sorted(set(r.coordinates)))
            if not cs or any(c < 0 or c >= node.n for c in cs) or len(cs) >= node.n:
                raise DescError(f"representative {r.name} needs 1..n-1 distinct coordinates", path)
            reps.append((len(cs), r.name, cs))
        unc = node.kind == "PowerSeries" or fields.get(node.coefficients).uncountable
        kind = "power_series" if node.kind == "PowerSeries" else "localized_polynomial"
        return Layer(node.group, kind, node.coefficients, node.fraction_label, label=node.label or "",
                     max_name=node.max_name, family_reps=tuple(reps), uncountable=unc)
    raise DescError(f"{type(node).__name__} is not an atom", path)


def _stack_layers(node: Node, fields: Fields, path: str) -> list[Layer]:
    if isinstance(node, Pullback):
        T = _stack_layers(node.T, fields, path + ".T")
        R = _stack_layers(node.R, fields, path + ".R")
        if len(T) == 1 and T[0].is_field:
            raise DescError("pullback needs T local with a nonzero maximal ideal, got a field", path + ".T")
        k = T[-1].fraction if T[-1].is_field else T[-1].residue
        if T[-1].is_field:
            T = T[:-1]
        fr = R[0].fraction
        if not fields.is_subfield(fr, k):
            raise DescError(f"fraction field {fr} of R is not a declared subfield of the residue field {k}", path)
        if len(R) == 1 and R[0].is_field and fr == k:
            raise DescError("R equals the residue field: the pullback is T itself", path)
        if node.conductor_name:
            T[-1] = replace(T[-1], max_name=node.conductor_name)
        return T + R
    if isinstance(node, Localization):
        inner = build(node.D, fields)
        if inner.kind != "stack":
            loc = localize(inner, node.prime)
            return _stack_layers(loc, fields, path + ".D")
        return list(build(localize(inner, node.prime), fields).stack.layers)
    return [_layer_of(node, fields, path)]


def _finite_over(layers: list[Layer], fields: Fields) -> tuple[bool, ...]:
    out = []
    for i, L in enumerate(layers):
        nxt = layers[i + 1] if i + 1 < len(layers) else None
        out.append(bool(nxt and nxt.is_field and fields.finite(nxt.fraction, L.residue)))
    return tuple(out)


# -- build -------------------------------------------------------------------

def build(desc: Node, fields: Fields | None = None, name: str = "") -> DomainModel:
    fields = fields or Fields()
    if isinstance(desc, ValuationPolyExt):
        return _build_polyext(desc, fields, name)
    if isinstance(desc, NagataRing):
        base = build(desc.D, fields)
        if base.kind != "stack":
            raise DescError("Nagata ring of a non-local model is not supported", "desc.D")
        if desc.star not in ("d", "v"):
            raise DescError(f"Nagata ring star must be d or v, got {desc.star!r}", "desc")
        m = DomainModel(desc, fields, "nagata", base=base, name=name)
        m.flags = {}
        if desc.star == "d":
            m.flags["local"] = Verdict.yes(structural("D(X) of a local domain is local"))
        m.spectrum.complete = False
        return m
    layers = _stack_layers(desc, fields, "desc")
    stack = Stack(tuple(_default_names(layers)), _finite_over(layers, fields))
    m = DomainModel(desc, fields, "stack", stack=stack, name=name)
    m.spectrum = _spectrum(stack)
    m.maximal_name = _last_max(stack)
    m.conductors = _conductors(stack)
    m.flags = _stack_flags(m)
    return m


def _last_real(stack: Stack) -> int:
    return max(i for i, L in enumerate(stack.layers) if not L.is_field) if not stack.is_field else -1


def _last_max(stack: Stack) -> str | None:
    j = _last_real(stack)
    return None if j < 0 else stack.layers[j].max_name


def _default_names(layers: list[Layer]) -> list[Layer]:
    real = [i for i, L in enumerate(layers) if not L.is_field]
    out = []
    for i, L in enumerate(layers):
        if L.is_field:
            out.append(L)
            continue
        mx = L.max_name or ("M" if i == real[-1] else f"C{i}")
        names = list(L.prime_names)
        if L.kind == "valuation":
            for h in range(len(names) + 1, L.dim):
                names.append(f"{mx}.P{h}")
        out.append(replace(L, max_name=mx, prime_names=tuple(names[: max(L.dim - 1, 0)])))
    return out


def _spectrum(stack: Stack) -> SpectrumPoset:
    S = SpectrumPoset()
    S.add(PrimeEntry("(0)", 0, role="zero"))
    prev = "(0)"
    offset = 0
    last = _last_real(stack)
    for j, L in enumerate(stack.layers):
        if L.is_field:
            continue
        inner: list[str] = []
        if L.kind == "valuation":
            for h in range(1, L.dim):
                nm = L.prime_names[h - 1]
                S.add(PrimeEntry(nm, offset + h, j, h), [inner[-1] if inner else prev])
                inner.append(nm)
        elif L.kind in ("power_series", "localized_polynomial"):
            card = UNCOUNTABLE if L.uncountable else COUNTABLE
            fam_prev = prev
            fams = {}
            for h in range(1, L.dim):
                nm = f"{L.max_name}.F{h}"
                S.add(PrimeEntry(nm, offset + h, j, h, family=True, cardinality=card, role="family"),
                      [fam_prev])
                fams[h] = nm
                fam_prev = nm
                inner.append(nm)
            for h, nm, cs in L.family_reps:
                lows = [r_nm for r_h, r_nm, r_cs in L.family_reps if r_h < h and set(r_cs) < set(cs)]
                S.add(PrimeEntry(nm, offset + h, j, h, coordinates=cs, member_of=fams[h]),
                      lows or [prev])
                inner.append(nm)
        role = "maximal" if j == last else "conductor"
        S.add(PrimeEntry(L.max_name, offset + L.dim, j, L.dim, role=role), inner or [prev])
        prev = L.max_name
        offset += L.dim
    return S


def _wrap(stack: Stack, j: int, inner: Ideal) -> Ideal:
    """Lift an ideal living at level j (all lower coefficients) to the top."""
    for i in range(j - 1, -1, -1):
        sub = Stack(stack.layers[i:], stack.finite_over[i:])
        inner = sub.make(sub.N(), {sub.top.group.zero(): inner})
    return inner


def _level(stack: Stack, j: int) -> Stack:
    return Stack(stack.layers[j:], stack.finite_over[j:])


def full_ideal(stack: Stack, j: int, st: Staircase) -> Ideal:
    """Ideal of D consisting of level-j values in ``st`` with any lower coefficient."""
    return _wrap(stack, j, _level(stack, j).make(st, {}))


def overring(stack: Stack, j: int) -> Ideal:
    """T_j: the local ring formed by layers 0..j with everything below forgotten."""
    return full_ideal(stack, j, Staircase.ring(stack.layers[j].group))


def _conductors(stack: Stack) -> list[Conductor]:
    out = []
    last = _last_real(stack)
    for j, L in enumerate(stack.layers):
        if L.is_field or j == len(stack.layers) - 1:
            continue
        if j == last and not stack.layers[j + 1].is_field:
            continue
        out.append(Conductor(L.max_name, j, full_ideal(stack, j, Staircase.maximal(L.group)),
                             overring(stack, j)))
    return out


def _prime_ideal(m: DomainModel, name: str):
    if m.kind == "polyext":
        return m.polyext.frak_p() if name == _polyext_names(m)[0] else None
    if m.kind != "stack":
        return None
    e = m.prime(name)
    S = m.stack
    if e.role == "zero" or e.family:
        return None
    L = S.layers[e.layer]
    G = L.group
    if e.layer_height == L.dim:
        if e.role == "maximal":
            return S.maximal()
        return full_ideal(S, e.layer, Staircase.maximal(G))
    if e.coordinates:
        gens = [tuple(int(i == c) for i in range(G.n)) for c in e.coordinates]
        return full_ideal(S, e.layer, Staircase(G, gens))
    h = e.layer_height

    def member(n: int, S=S, e=e, G=G, h=h):
        v = [0] * G.n
        v[h - 1] = 1
        for i in range(h, G.n):
            v[i] = -n
        return full_ideal(S, e.layer, Staircase(G, [tuple(v)]))
    return DirectedUnion(member, f"union over n of the level-{e.layer} ideals above e{h} - n*(tail)")


# -- flags ---------------------------------------------------------------------

def valuation_layers(layers) -> bool:
    """Do these layers (top first) glue to a valuation ring?"""
    layers = list(layers)
    real = [L for L in layers if not L.is_field]
    return (all(L.valuation_like for L in real)
            and all(layers[i + 1].fraction == layers[i].residue for i in range(len(layers) - 1)))


def _stack_flags(m: DomainModel) -> dict[str, Verdict]:
    S, F = m.stack, m.fields

    def yes(note):
        return Verdict.yes(structural(note))

    def no(note):
        return Verdict.no(structural(note))

    f: dict[str, Verdict] = {"local": yes("every layer stack is local")}
    if S.is_field:
        f["field"] = yes("field atom")
        for k in ("valuation", "Noetherian", "integrally_closed", "GCD", "Bezout", "Prufer", "t_local"):
            f[k] = yes("fields satisfy this trivially")
        return f
    f["field"] = no("the maximal ideal is nonzero")
    real = [L for L in S.layers if not L.is_field]
    fulls = [S.full(i) for i in range(S.depth - 1)]
    vals = valuation_layers(S.layers)
    f["valuation"] = (yes("all layers are valuation atoms glued along full residue fields") if vals else
                      no("a layer is not a valuation atom or a residue field is cut down by the next layer"))
    if S.depth == 1:
        L = S.top
        f["Noetherian"] = Verdict.of(L.noetherian, structural(f"{L.kind} atom of rank {L.dim}"))
        f["integrally_closed"] = Verdict.of(L.integrally_closed, structural(f"{L.kind} atom"))
        if L.kind in ("power_series", "localized_polynomial"):
            f["UFD"] = yes("regular local ring")
            f["Krull"] = yes("regular local ring")
            f["completely_integrally_closed"] = yes("Krull domain")
        if L.kind == "valuation":
            f["completely_integrally_closed"] = Verdict.of(L.dim == 1, structural("valuation atom: iff rank 1"))
        if L.kind == "semigroup":
            f["completely_integrally_closed"] = no("not integrally closed")
        return f
    # proper pullback tower
    f["completely_integrally_closed"] = no("the overring T is almost integral over D and differs from D")
    bottom = S.layers[-1]
    if bottom.is_field and S.depth == 2 and S.top.valuation_like:
        f["PVD"] = yes("a valuation ring glued over a subfield of its residue field")
    if bottom.is_field:
        if S.depth == 2:
            f["Noetherian"] = Verdict.of(S.top.noetherian and S.finite_over[0], structural(
                "pullback over a subfield: Noetherian iff T is and the residue field is finite over it"))
        else:
            f["Noetherian"] = no("a lower layer is not a field")
    else:
        f["Noetherian"] = no("R is not a field, so the conductor is not finitely generated over D")
    # integral closure: every layer integrally closed and each cut-down field
    # algebraically closed in the residue field above it
    ic = Value.YES
    notes = []
    for i, L in enumerate(real):
        if not L.integrally_closed:
            ic = Value.NO
            notes.append(f"layer {i} not integrally closed")
    for i in range(S.depth - 1):
        if not fulls[i]:
            sub, sup = S.layers[i + 1].fraction, S.layers[i].residue
            a = F.algebraically_closed_in(sub, sup)
            notes.append(f"{sub} algebraically closed in {sup}: {a.value}")
            if a is Value.NO:
                ic = Value.NO
            elif a is Value.UNKNOWN and ic is Value.YES:
                ic = Value.UNKNOWN
    if ic is Value.UNKNOWN:
        f["integrally_closed"] = Verdict.unknown("algebraic closure of a residue subfield not declared")
    else:
        f["integrally_closed"] = Verdict(ic, (structural("; ".join(notes) or "all layers integrally closed"),))
    return f


# -- V + X V_P[X] -------------------------------------------------------------

def _polyext_names(m: DomainModel) -> tuple[str, str]:
    return ("frakP", "N")


def _build_polyext(desc: ValuationPolyExt, fields: Fields, name: str) -> DomainModel:
    V = desc.V
    if not isinstance(V, ValuationAtom) or V.group.kind is not Kind.LEX_Z:
        raise DescError("V + X V_P[X] needs a LexZ valuation atom", "desc.V")
    r = V.group.n
    if r < 2:
        raise DescError("V + X V_P[X] needs dim(V) >= 2", "desc.V")
    if not 1 <= desc.prime_height <= r - 1:
        raise DescError("P must be a nonzero nonmaximal prime of V", "desc")
    m = DomainModel(desc, fields, "polyext", name=name)
    m.base = build(V, fields)
    m.polyext = PolyExtFragment(V.group, desc.prime_height)
    P, N = _polyext_names(m)
    S = SpectrumPoset(complete=False)
    S.add(PrimeEntry("(0)", 0, role="zero"))
    S.add(PrimeEntry(P, desc.prime_height, role="prime"), ["(0)"])
    S.add(PrimeEntry(N, desc.prime_height + 1, role="maximal"), [P])
    S.add(PrimeEntry("fD", 1, family=True, cardinality=COUNTABLE, role="family"), ["(0)"])
    m.spectrum = S
    m.flags = {
        "local": Verdict.no(structural("the primes f D with f(0) a unit and N are distinct maximal ideals")),
        "field": Verdict.no(structural("not a field")),
        "valuation": Verdict.no(structural("not local")),
    }
    return m


# -- localization ----------------------------------------------------------------

def _atom_of(L: Layer) -> Node:
    if L.is_field:
        return FieldAtom(L.fraction)
    if L.kind == "valuation":
        return ValuationAtom(L.group, L.residue, L.fraction, L.max_name, tuple(L.prime_names))
    if L.kind == "semigroup":
        return MonomialAtom("NumericalSemigroup", L.residue, semigroup=L.group.generators,
                            fraction=L.fraction, max_name=L.max_name)
    kind = "PowerSeries" if L.kind == "power_series" else "LocalizedPolynomial"
    reps = tuple(FamilyRep(nm, cs) for _, nm, cs in L.family_reps)
    return MonomialAtom(kind, L.residue, n=L.group.n, fraction=L.fraction, max_name=L.max_name,
                        representatives=reps)


def desc_of_layers(layers: list[Layer]) -> Node:
    layers = _merge_valuations(list(layers))
    node = _atom_of(layers[-1])
    for L in reversed(layers[:-1]):
        node = Pullback(_atom_of(L), node)
    return node


def _merge_valuations(layers: list[Layer]) -> list[Layer]:
    """A LexZ(a) valuation glued over a LexZ(b) valuation along the full
    residue field is the rank a+b valuation with lex value group."""
    i = len(layers) - 2
    while i >= 0:
        A, B = layers[i], layers[i + 1]
        if (A.kind == "valuation" and B.kind == "valuation" and A.group.kind is Kind.LEX_Z
                and B.group.kind is Kind.LEX_Z and B.fraction == A.residue):
            names = tuple(A.prime_names) + (A.max_name,) + tuple(B.prime_names)
            merged = Layer(ValueGroup.lex(A.group.n + B.group.n), "valuation", B.residue, A.fraction,
                           max_name=B.max_name, prime_names=names)
            layers[i: i + 2] = [merged]
        i -= 1
    return layers


def localize(m: DomainModel, prime: str, generic: bool = False) -> Node:
    """Description of the localization at a named prime.

    With ``generic`` a symbolic family is accepted: the shape of D_P depends
    only on the height of P inside its layer (a DVR at height one, a regular
    local ring of that dimension above)."""
    if m.kind == "polyext":
        P, N = _polyext_names(m)
        if prime != P:
            raise UnknownLocalization(f"only the localization at {P} is modelled")
        k = f"kappa({m.desc.V.residue})"
        return MonomialAtom("LocalizedPolynomial", k, n=2, fraction=f"{m.desc.V.fraction}(X)",
                            max_name=f"{P}D_{P}")
    if m.kind != "stack":
        raise UnknownLocalization("localization of a Nagata model is not supported")
    e = m.prime(prime)
    S = m.stack
    if e.family and not generic:
        raise UnknownLocalization(f"{prime} is a symbolic family; name a representative")
    if e.role == "zero":
        return FieldAtom(S.top.fraction)
    if e.role == "maximal":
        return m.desc
    j = e.layer
    L = S.layers[j]
    head = list(S.layers[:j])
    if e.layer_height == L.dim:  # conductor: keep T_j, cut below
        out = head + [L]
        nxt = S.layers[j + 1]
        if nxt.fraction != L.residue:
            out.append(Layer(ValueGroup.nn(0), "field", nxt.fraction, nxt.fraction))
        return desc_of_layers(out)
    kappa = f"kappa({prime})"
    h = e.layer_height
    if L.kind == "valuation":
        H = L.group.convex_chain()[L.group.rank - h]
        G = quotient_by_convex(L.group, H)
        loc = Layer(G, "valuation", kappa, L.fraction, max_name=prime, prime_names=tuple(L.prime_names[: h - 1]))
    elif h == 1:
        loc = Layer(ValueGroup.lex(1), "valuation", kappa, L.fraction, max_name=prime)
    else:
        loc = Layer(ValueGroup.nn(h), "power_series", kappa, L.fraction, max_name=prime)
    return desc_of_layers(head + [loc])
