"""Classification of domain models: exact fragment computations feed the rule
engine; per-prime questions (t-ideal, well behaved, potent) and the
comparable-element analysis are answered on top of the saturated facts."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from . import starops
from .domain import (DomainModel, UnknownLocalization, build, desc_of_layers, localize, overring,
                     valuation_layers)
from .layered import Layer
from .rules import RULES, Contradiction, Inference, Rule, infer, violations
from .spectrum import PrimeEntry
from .values import Kind, ValueGroup
from .verdict import Provenance, Value, Verdict, computed, structural

REPORT_FLAGS = (
    "t_local", "DW", "TW", "DT_fgv", "valuation", "DVR", "GCD", "PvMD", "Prufer", "Bezout",
    "pre_Schreier", "Schreier", "FC", "v_FC", "coherent", "atomic", "Noetherian", "integrally_closed",
    "Archimedean", "treed", "linearly_ordered_spectrum", "finite_t_character", "t_linkative",
    "Cl_t_trivial", "normal_pair", "comparable_element", "t_sharp",
)

def rule(rid: str, statement: str) -> Provenance:
    return Provenance("rule", rule=rid, citation=statement)


RULE_H1 = ("H1", "a height-one prime is minimal over each of its nonzero elements, hence a t-ideal")
RULE_KRULL = ("KRT", "in a Krull domain the prime t-ideals are exactly the height-one primes")
RULE_LOCT = ("LOCT", "if P D_P is a t-ideal of D_P then P = P D_P meet D is a t-ideal of D")
RULE_NP = ("NP", "with P the intersection of cD over the comparable c, the pair (D, D_P) is normal")
RULE_FAM = ("FAM", "D_P has one shape for all members of the family: it depends only on the height of P")
RULE_POT = ("POT", "in a t-local domain M is the only maximal t-ideal, so it is potent")
RULE_FTCW = ("FTCW", "with finite t-character every maximal t-ideal is well behaved")


# -- comparable elements on layer stacks -------------------------------------

@dataclass(frozen=True)
class Candidate:
    """Nonunits whose leading value sits at coordinate ``index`` of ``layer``.

    All of them share Q = the intersection of x^n D; they are comparable iff
    D/Q is a valuation ring (Q = Q D_Q holds for these primes)."""
    layer: int
    index: int
    witness: tuple
    Q: str
    quotient: tuple  # layers of D/Q
    valuation: bool

    @property
    def quotient_dim(self) -> int:
        return sum(L.dim for L in self.quotient)


def candidates(m: DomainModel) -> list[Candidate]:
    S = m.stack
    out = []
    for i, L in enumerate(S.layers):
        if L.is_field:
            continue
        Q0 = "(0)" if i == 0 else S.layers[i - 1].max_name
        idx = range(L.group.n) if L.kind == "valuation" and L.group.kind is Kind.LEX_Z else [0]
        for j in idx:
            path = list(S.zero_path())
            if L.kind == "semigroup":
                v = (min(L.group.generators),)
            else:
                v = tuple(int(k == j) for k in range(L.group.n)) if L.group.n else (1,)
            if L.group.kind is Kind.RATIONAL:
                v = (1,)
            path[i] = v
            Q = Q0 if j == 0 else L.prime_names[j - 1]
            top = L
            if j:
                top = Layer(ValueGroup.lex(L.group.n - j), "valuation", L.residue, f"kappa({Q})")
            q = (top,) + tuple(S.layers[i + 1:])
            out.append(Candidate(i, j, tuple(path), Q, q, valuation_layers(q)))
    return out


@dataclass
class ComparableReport:
    x: tuple
    layer: int
    Q: str
    prime_of_intersection: bool
    Q_equals_QDQ: Verdict
    quotient_valuation: bool
    comparable: bool
    dim: int
    dim_quotient: int
    dim_localization: int | None
    DQ_valuation: Verdict | None = None
    normal_pair_partner: str | None = None

    @property
    def additive(self) -> bool | None:
        if self.dim_localization is None:
            return None
        return self.dim == self.dim_quotient + self.dim_localization

    def to_json(self) -> dict:
        return {
            "x": [list(v) for v in self.x], "layer": self.layer, "Q": self.Q,
            "Q_is_prime": self.prime_of_intersection, "Q_equals_QD_Q": self.Q_equals_QDQ.to_json(),
            "D_mod_Q_valuation": self.quotient_valuation, "comparable": self.comparable,
            "dim": self.dim, "dim_D_mod_Q": self.dim_quotient, "dim_D_Q": self.dim_localization,
            "dim_additive": self.additive,
            "D_Q_valuation": self.DQ_valuation.to_json() if self.DQ_valuation else None,
            "normal_pair_partner": self.normal_pair_partner,
        }


def _candidate_of(m: DomainModel, x) -> Candidate | None:
    S = m.stack
    x = S.conform_path(x)
    if not S.in_ring(x):
        raise ValueError(f"{x} is not an element of D")
    i = S.first_nonzero_layer(x)
    if i is None:
        return None
    L = S.layers[i]
    j = 0
    if L.kind == "valuation" and L.group.kind is Kind.LEX_Z:
        j = next(k for k, c in enumerate(x[i]) if c)
    for c in candidates(m):
        if (c.layer, c.index) == (i, j):
            return c
    return None


def _q_equals_qdq(m: DomainModel, c: Candidate) -> Verdict:
    S = m.stack
    if c.Q == "(0)":
        return Verdict.yes(computed("Q = (0)"))
    if c.index:
        return Verdict.yes(rule("VQ", "a prime of a valuation ring is an ideal of its localization"))
    Qi = m.prime_ideal(c.Q)
    T = overring(S, c.layer - 1)
    prod = S.mul(Qi, T)
    return Verdict.of(prod == Qi, computed(f"D_Q = T (layers above {c.layer})", f"Q T = {prod!r}"))


def comparable_prime(m: DomainModel, x) -> ComparableReport:
    """Structure of Q = the intersection of the x^n D for a fragment element x."""
    if m.kind != "stack":
        raise starops.FragmentUnsupported("comparable-element analysis needs a layer stack")
    c = _candidate_of(m, x)
    if c is None:
        raise ValueError("x is a unit")
    qq = _q_equals_qdq(m, c)
    dq_dim = None
    dqv = None
    try:
        loc = build(localize(m, c.Q), m.fields)
        dq_dim = loc.dim
        dqv = loc.flags.get("valuation", Verdict.unknown("no constructor flag"))
        if c.Q == "(0)":
            dqv = Verdict.yes(structural("D_(0) is the fraction field"))
    except UnknownLocalization:
        pass
    partner = minimal_comparable_prime(m)
    rep = ComparableReport(m.stack.conform_path(x), c.layer, c.Q, True, qq, c.valuation,
                           c.valuation and qq.is_yes, m.dim, c.quotient_dim, dq_dim, dqv,
                           partner if c.valuation else None)
    return rep


def minimal_comparable_prime(m: DomainModel) -> str | None:
    """P such that the comparable elements are exactly D minus P, if any exist."""
    good = [c for c in candidates(m) if c.valuation]
    if not good:
        return None
    return min(good, key=lambda c: m.prime(c.Q).height).Q


def is_comparable(m: DomainModel, x) -> bool:
    c = _candidate_of(m, x)
    return c is not None and c.valuation


# -- seeds -------------------------------------------------------------------------

def _safe(fn, *args, **kw) -> Verdict:
    try:
        return fn(*args, **kw)
    except (starops.UnknownClosure, starops.FragmentUnsupported) as e:
        return Verdict.unknown(str(e))


def _stack_seeds(m: DomainModel) -> dict[str, Verdict]:
    S = m.stack
    s: dict[str, Verdict] = {}
    s["pullback"] = Verdict.of(S.depth > 1, structural(f"layer stack of depth {S.depth}"))
    if S.depth > 1:
        sub = build(desc_of_layers(list(S.layers[1:])), m.fields)
        rt = _light(sub).get("t_local")
        if rt.known:
            s["R_t_local"] = Verdict(rt.value, (summary(rt, f"t-local(R), R = {_shape(sub)}"),),
                                     conditional_on=rt.conditional_on)
    if S.is_field:
        return s
    d = S.dim
    s["one_dim"] = Verdict.of(d == 1, computed(f"dim = {d}"))
    s["dim_le_1"] = Verdict.of(d <= 1, computed(f"dim = {d}"))
    if m.spectrum.complete:
        s["linearly_ordered_spectrum"] = Verdict.of(m.spectrum.linearly_ordered(), computed(
            "spectrum poset: one prime (or bundle of size 1) per height"))
        s["treed"] = Verdict.of(m.spectrum.treed(), computed("spectrum poset: no prime above two incomparable ones"))
    M = S.maximal()
    gen = S.is_principal(M)
    s["M_principal"] = Verdict.of(gen is not None, computed(
        f"M = {M!r}" + (f" = ({list(map(list, gen))})" if gen is not None else " has no single generator")))
    if not s["M_principal"].is_yes and S.depth == 1:
        s["M_fg"] = Verdict.yes(computed("atoms are Noetherian on the monomial fragment"))
    else:
        s["M_fg"] = Verdict.of(S.is_fg(M), computed("finite generation of the layered ideal M"))
    MM = S.colon(M, M)
    s["MM_eq_D"] = Verdict.of(MM == S.ring(), computed(f"(M:M) = {MM!r}"))
    cond = any(c.name == m.maximal_name for c in m.conductors)
    mt = _safe(starops.is_t_ideal, m, M, conductor=cond)
    if mt.known:
        s["M_t_ideal"] = mt
    if not s["M_fg"].is_yes:
        ti = _safe(starops.is_t_invertible, m, M)
        if ti.known:
            s["M_t_invertible"] = ti
    last = max(i for i, L in enumerate(S.layers) if not L.is_field)
    Ll = S.layers[last]
    rp = Ll.valuation_like or Ll.kind == "semigroup" or Ll.dim == 1
    s["M_radical_principal"] = Verdict.of(rp, computed(
        f"last layer {Ll.kind} of dimension {Ll.dim}: " +
        ("its last coordinate generates M up to radical" if rp else
         "a prime minimal over a principal ideal of a Noetherian layer has height at most 1")))
    if S.depth == 1 and S.top.kind == "valuation":
        s["Bezout"] = Verdict.yes(computed("staircases over a totally ordered group have one minimal generator"))
    # comparable-element analysis (exact on stacks)
    cs = candidates(m)
    good = [c for c in cs if c.valuation]
    trace = [f"x at layer {c.layer}.{c.index}: Q = {c.Q}, D/Q valuation: {c.valuation}" for c in cs]
    if good:
        w = min(good, key=lambda c: m.prime(c.Q).height)
        s["comparable_element"] = Verdict.yes(computed(*trace, "Q = Q D_Q for each candidate; "
                                                       "D/Q valuation makes x comparable"),
                                              witness=[list(v) for v in good[-1].witness])
        LQ = _light(build(localize(m, w.Q), m.fields)) if w.Q != "(0)" else None
        if LQ is not None and LQ.get("valuation").known:
            s["DQ_valuation"] = Verdict(LQ.get("valuation").value,
                                        (summary(LQ.get("valuation"), f"valuation(D_Q), Q = {w.Q}"),))
        s["comparable_set_meet_zero"] = Verdict.of(w.Q == "(0)", computed(
            f"the comparable elements are D minus {w.Q}; their principal ideals meet in {w.Q}"))
    else:
        s["comparable_element"] = Verdict.no(computed(*trace, "every nonunit has D/Q non-valuation"))
    top_ok = any(c.Q == "(0)" for c in good)
    s["every_prime_contains_comparable"] = Verdict.of(top_ok, computed(
        "a height-one prime only holds nonunits with Q = (0); those are comparable iff D is valuation"))
    nz = [c for c in cs if c.Q != "(0)"]
    s["nonzero_power_intersection"] = Verdict.of(bool(nz), computed(
        *(f"x = {[list(v) for v in c.witness]}: intersection of x^n D is {c.Q}" for c in nz[:1]))
        if nz else computed("every nonunit x has the x^n D meeting in (0)"))
    # witnesses against DT and GV-triviality
    gvw = _gv_witness(m)
    if gvw is not None:
        s["GV_trivial"] = Verdict.no(computed(f"J = {gvw!r} is proper, f.g., with J^-1 = D"),
                                     witness=gvw)
    dtw = _dt_witness(m)
    if dtw is not None:
        I, Iv, chain = dtw
        s["DT_fgv"] = Verdict.no(computed(*chain, f"I = {I!r} is f.g. with I^v = {Iv!r} != I"),
                                 witness={"I": I, "I^v": Iv})
    ftc = _ftc_witness(m, s)
    if ftc is not None:
        s["finite_t_character"] = ftc
    return s


def _gv_witness(m: DomainModel):
    S = m.stack
    M = S.maximal()
    ring = S.ring()
    best = None
    for F in starops.fg_subideals(S, M):
        if F != ring and S.inverse(F) == ring:
            if best is None or len(S.minimal_monomials(F)) < len(S.minimal_monomials(best)):
                best = F
    return best


def _dt_witness(m: DomainModel):
    S = m.stack
    M = S.maximal()
    pool = [("M", M), ("M^2", S.mul(M, M))] + [(k, v) for k, v in sorted(m.named_ideals.items())
                                             if not isinstance(v, (starops.DirectedUnion, starops.DirectedIntersection,
                                                                   starops.PrincipalBy))]
    for name, I in pool:
        try:
            if not S.is_fg(I):
                continue
            inv = S.inverse(I)
            Iv = S.inverse(inv)
        except Exception:  # named ideals from another scope
            continue
        if Iv != I:
            return I, Iv, (f"{name}: (D:{name}) = {inv!r}", f"(D:(D:{name})) = {Iv!r}")
    return None


def _ftc_witness(m: DomainModel, s: dict[str, Verdict]) -> Verdict | None:
    """Infinitely many maximal t-ideals over one nonzero prime: an infinite
    family just below a non-t-ideal M whose members are t-ideals."""
    mt = s.get("M_t_ideal")
    if mt is None or not mt.is_no:
        return None
    sp = m.spectrum
    M = m.maximal_name
    for e in sp.entries:
        if not e.family or e.cardinality == "1" or M not in _covers_above(sp, e.name):
            continue
        below = [b for b in sp.strictly_below(e.name) if b != "(0)"]
        if not below:
            continue
        loc = family_t_local(m, e)
        if loc.is_yes:
            return Verdict.no(computed(
                f"M is not a t-ideal; each member of {e.name} ({e.cardinality}) is a t-ideal, "
                f"maximal among t-ideals", f"each contains the nonzero prime {sorted(below)[0]}"),
                *loc.provenance, conditional_on=loc.conditional_on)
    return None


def _covers_above(sp, name: str) -> set[str]:
    return {b for a, b in sp.covers() if a == name}


def family_t_local(m: DomainModel, e: PrimeEntry) -> Verdict:
    try:
        sub = build(localize(m, e.name, generic=True), m.fields)
    except UnknownLocalization as err:
        return Verdict.unknown(str(err))
    v = _light(sub).get("t_local")
    if not v.known:
        return v
    return Verdict(v.value, (rule(*RULE_FAM), summary(v, f"t-local(D_P), P in {e.name}, D_P = {_shape(sub)}")),
                   conditional_on=v.conditional_on)


def summary(v: Verdict, what: str) -> Provenance:
    """One computation line standing for a sub-model verdict."""
    via = ", ".join(p.rule or p.kind for p in v.provenance[:4])
    return computed(f"{what} = {v.value.value} (via {via})")


def _shape(sub: DomainModel) -> str:
    if sub.kind != "stack":
        return sub.kind
    return " over ".join(f"{L.kind}({L.group.kind.value} {L.group.n})" if not L.is_field else f"field {L.fraction}"
                         for L in sub.stack.layers)


def _declared(m: DomainModel) -> dict[str, Verdict]:
    return {f: Verdict(v, (Provenance("declared", citation=src),), conditional_on=(f,))
            for f, (v, src) in m.declared.items()}


def seeds(m: DomainModel) -> dict[str, Verdict]:
    """Computed, constructor and declared facts (independent of the rule order)."""
    return dict(m.memo(("seeds",), lambda: _seeds(m)))


def _seeds(m: DomainModel) -> dict[str, Verdict]:
    s: dict[str, Verdict] = {}
    for f, v in m.flags.items():
        if v.known:
            s[f] = v
    if m.kind == "stack":
        s.update(_stack_seeds(m))
    elif m.kind == "nagata":
        star = m.desc.star
        s["nagata_d"] = Verdict.of(star == "d", structural(f"Nagata ring for the {star}-operation"))
        s["nagata_v"] = Verdict.of(star == "v", structural(f"Nagata ring for the {star}-operation"))
        s["field"] = Verdict.no(structural("D(X)-type rings are not fields"))
        bt = _light(m.base).get("t_local")
        if bt.known:
            s["base_t_local"] = bt
    elif m.kind == "polyext":
        s["pullback"] = Verdict.no(structural("not a layer stack"))
    for f, v in _declared(m).items():
        if f in s and s[f].value is not v.value:
            raise Contradiction(f, s[f], v)
        s.setdefault(f, v)
    return s


def _light(m: DomainModel, rules: Sequence[Rule] = RULES) -> Inference:
    """Flag inference without the per-prime phase."""
    return m.memo(("light", _key(rules)), lambda: infer(seeds(m), rules, declared=m.declared))


def _key(rules: Sequence[Rule]):
    return None if rules is RULES else tuple(r.id for r in rules)


# -- per prime ------------------------------------------------------------------

def _combine(vs: list[Verdict], what: str) -> Verdict:
    known = [v for v in vs if v.known]
    if not known:
        tried = [a for v in vs for a in v.attempted]
        return Verdict.unknown(*(tried or [f"nothing decides {what}"]))
    vals = {v.value for v in known}
    if len(vals) > 1:
        yes = next(v for v in known if v.is_yes)
        no = next(v for v in known if v.is_no)
        raise Contradiction(what, yes, no)
    prov = tuple(p for v in known for p in v.provenance)
    cond = tuple(sorted({c for v in known for c in v.conditional_on}))
    wit = next((v.witness for v in known if v.witness is not None), None)
    return Verdict(known[0].value, prov, conditional_on=cond, witness=wit)


def t_ideal(m: DomainModel, name: str, inf: Inference | None = None) -> Verdict:
    """Is the named prime a t-ideal?"""
    inf = inf or _light(m)
    e = m.prime(name)
    if e.role == "zero":
        return Verdict.unknown("the zero ideal is not a nonzero fractional ideal")
    vs: list[Verdict] = []
    if e.role == "maximal" and m.local:
        if m.kind == "stack" and not m.is_field:
            vs.append(_safe(starops.is_t_ideal, m, m.maximal()))
        v = inf.get("t_local")
        vs.append(Verdict(v.value, v.provenance, v.attempted, v.conditional_on) if v.known else v)
    elif m.kind == "polyext" and e.role == "maximal":
        vs.append(Verdict.unknown("the maximal ideal N of V + X V_P[X] is not in the fragment"))
    if e.family:
        if e.height == 1:
            vs.append(Verdict.yes(rule(*RULE_H1)))
        if m.kind == "stack":
            loc = family_t_local(m, e)
            if loc.is_yes:
                vs.append(Verdict.yes(rule(*RULE_LOCT), *loc.provenance, conditional_on=loc.conditional_on))
    elif e.role != "maximal":
        I = m.prime_ideal(name)
        if I is not None:
            is_cond = any(c.name == name for c in m.conductors)
            vs.append(_safe(starops.is_t_ideal, m, I, conductor=is_cond))
        if e.height == 1:
            vs.append(Verdict.yes(rule(*RULE_H1)))
        try:
            sub = m.scope("@" + name)
            lt = _light(sub).get("t_local")
            if lt.is_yes:
                vs.append(Verdict.yes(rule(*RULE_LOCT), summary(lt, f"t-local(D_P), D_P = {_shape(sub)}"),
                                      conditional_on=lt.conditional_on))
        except UnknownLocalization:
            pass
    kr = inf.get("Krull")
    if kr.is_yes and isinstance(e.height, int) and e.height >= 2:
        vs.append(Verdict.no(rule(*RULE_KRULL), summary(kr, "Krull"), conditional_on=kr.conditional_on))
    if e.role != "maximal":
        for flag in ("every_prime_t_ideal",):
            v = inf.get(flag)
            if v.is_yes:
                vs.append(Verdict(v.value, v.provenance, conditional_on=v.conditional_on))
    return _combine(vs, f"t_ideal({name})")


def well_behaved(m: DomainModel, name: str, inf: Inference | None = None) -> Verdict:
    """Is P a t-ideal with P D_P a t-ideal of D_P?"""
    inf = inf or _light(m)
    e = m.prime(name)
    ti = t_ideal(m, name, inf)
    if ti.is_no:
        return Verdict.no(computed(f"{name} is not a t-ideal"), *ti.provenance, witness=ti.witness)
    if not ti.known:
        return Verdict.unknown(f"t-ideal status of {name} unknown", *ti.attempted)
    vs = []
    if e.family:
        vs.append(family_t_local(m, e))
    else:
        try:
            sub = m.scope("@" + name)
            lt = _light(sub).get("t_local")
            if lt.known:
                lt = Verdict(lt.value, (computed(f"D_P = {_shape(sub)}; P D_P is its maximal ideal"),
                                        summary(lt, "t-local(D_P)")),
                             conditional_on=lt.conditional_on, witness=lt.witness)
            vs.append(lt)
        except UnknownLocalization as err:
            vs.append(Verdict.unknown(str(err)))
    if e.role == "maximal" and inf.get("finite_t_character").is_yes:
        vs.append(Verdict.yes(rule(*RULE_FTCW)))
    pr = inf.get("every_prime_well_behaved")
    if pr.is_yes:
        vs.append(Verdict(pr.value, pr.provenance, conditional_on=pr.conditional_on))
    return _combine(vs, f"well_behaved({name})")


def potent(m: DomainModel, name: str, inf: Inference | None = None) -> Verdict:
    inf = inf or _light(m)
    e = m.prime(name)
    if e.role == "maximal" and inf.get("t_local").is_yes:
        return Verdict.yes(rule(*RULE_POT))
    return Verdict.unknown("potency is only decided for the maximal ideal of a t-local domain")


# -- reports ---------------------------------------------------------------------

@dataclass
class PropertyReport:
    name: str
    flags: dict[str, Verdict]
    auxiliary: dict[str, Verdict]
    primes: dict[str, dict[str, Verdict]]
    comparable: dict[str, Any] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)
    routes: dict[str, list[str]] = field(default_factory=dict)

    def get(self, flag: str) -> Verdict:
        return self.flags.get(flag) or self.auxiliary.get(flag) or Verdict.unknown(f"{flag} not decided")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "flags": {k: v.to_json() for k, v in self.flags.items()},
            "auxiliary": {k: v.to_json() for k, v in sorted(self.auxiliary.items())},
            "primes": {p: {k: v.to_json() for k, v in d.items()} for p, d in self.primes.items()},
            "comparable": self.comparable,
            "violations": self.violations,
        }


def classify(m: DomainModel, rules: Sequence[Rule] = RULES) -> PropertyReport:
    return m.memo(("classify", _key(rules)), lambda: _classify(m, rules))


def _classify(m: DomainModel, rules: Sequence[Rule]) -> PropertyReport:
    first = _light(m, rules)
    primes = {}
    for e in sorted(m.spectrum.entries, key=lambda e: (e.height, e.name)):
        if e.role == "zero":
            continue
        primes[e.name] = {"t_ideal": t_ideal(m, e.name, first)}
    s = seeds(m)
    named = [p for p in primes if not m.prime(p).member_of]
    vals = {primes[p]["t_ideal"].value for p in named}
    if named and m.spectrum.complete and "every_prime_t_ideal" not in first.verdicts:
        if vals == {Value.YES}:
            s["every_prime_t_ideal"] = Verdict.yes(computed("each nonzero prime and family checked: " + ", ".join(named)))
        elif Value.NO in vals:
            bad = next(p for p in named if primes[p]["t_ideal"].is_no)
            s["every_prime_t_ideal"] = Verdict.no(computed(f"{bad} is not a t-ideal"))
    inf = infer(s, rules, declared=m.declared) if s.keys() != seeds(m).keys() else first
    for p in primes:
        primes[p]["well_behaved"] = well_behaved(m, p, inf)
        primes[p]["potent"] = potent(m, p, inf)
    flags = {}
    for f in REPORT_FLAGS:
        flags[f] = inf.get(f)
    flags["t_sharp"] = Verdict.unknown("t-sharpness is only related to potency for PvMD primes; not decided")
    comp: dict[str, Any] = {}
    ce = inf.get("comparable_element")
    if m.kind == "stack" and ce.is_yes and not m.is_field:
        P = minimal_comparable_prime(m)
        comp = {"minimal_prime": P, "witness": find_comparable(m).witness}
        flags["normal_pair"] = Verdict.yes(rule(*RULE_NP), *ce.provenance, result={"partner": f"D_{P}"})
    elif ce.is_no:
        flags["normal_pair"] = Verdict.unknown("no comparable element to produce a partner")
    aux = {f: v for f, v in inf.verdicts.items() if f not in flags}
    bad = violations(inf.verdicts, rules)
    if bad:
        raise Contradiction("post-pass", Verdict.unknown(*bad), Verdict.unknown("rule base"))
    return PropertyReport(m.name, flags, aux, primes, comp, bad, inf.routes)


# -- entry points -------------------------------------------------------------------

def is_t_local(m: DomainModel) -> Verdict:
    return _light(m).get("t_local")


def archimedean(m: DomainModel) -> Verdict:
    return _light(m).get("Archimedean")


def find_comparable(m: DomainModel) -> Verdict:
    v = _light(m).get("comparable_element")
    if m.kind == "stack" and v.is_yes and not m.is_field:
        good = [c for c in candidates(m) if c.valuation]
        w = good[-1]  # the lowest layer: the largest Q
        name = next((k for k, p in sorted(m.elements.items())
                     if _candidate_of_safe(m, p) == (w.layer, w.index)), None)
        return Verdict(v.value, v.provenance, conditional_on=v.conditional_on,
                       witness={"element": name, "path": [list(c) for c in w.witness], "Q": w.Q})
    return v


def _candidate_of_safe(m: DomainModel, p):
    try:
        c = _candidate_of(m, p)
    except Exception:
        return None
    return None if c is None else (c.layer, c.index)
