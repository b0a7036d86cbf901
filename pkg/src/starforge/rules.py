"""Horn rules over three-valued flags, and an order-independent fixpoint.

A rule is a conjunction of literals ``flag = value`` implying one literal.
Every rule also yields its contrapositives (all flags here are two-valued
once known), so a single statement covers both directions of use.

Statements are written as plain mathematics; the rule id is the only locator.
"""
from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .verdict import Provenance, Value, Verdict

Lit = tuple[str, bool]


@dataclass(frozen=True)
class Rule:
    id: str
    premises: tuple[Lit, ...]
    conclusion: Lit
    statement: str
    derived: bool = False  # a contrapositive, or a standard fact not specific to these results

    def citation(self) -> Provenance:
        return Provenance("rule", rule=self.id, citation=self.statement)


def _parse(lit: str) -> Lit:
    lit = lit.strip()
    return (lit[1:], False) if lit.startswith("!") else (lit, True)


def R(rid: str, premises: str, conclusion: str, statement: str, std: bool = False) -> list[Rule]:
    """``premises`` is a ``&``-joined literal list; ``!flag`` negates."""
    ps = tuple(_parse(p) for p in premises.split("&")) if premises.strip() else ()
    base = Rule(rid, ps, _parse(conclusion), statement, derived=std)
    out = [base]
    c_flag, c_val = base.conclusion
    for i, (f, v) in enumerate(ps):
        rest = ps[:i] + ps[i + 1:]
        out.append(Rule(f"{rid}/c{i + 1}", rest + ((c_flag, not c_val),), (f, not v),
                        f"contrapositive of {rid}: {statement}", derived=True))
    return out


def IFF(rid: str, guard: str, a: str, b: str, statement: str, std: bool = False) -> list[Rule]:
    g = guard + " & " if guard.strip() else ""
    return R(rid + ".a", g + a, b, statement, std) + R(rid + ".b", g + b, a, statement, std)


# -- the rule base ---------------------------------------------------------------

def _rules() -> list[Rule]:
    rs: list[Rule] = []
    # definition and elementary t-local criteria
    rs += R("DEF1", "t_local", "local", "a t-local domain is local by definition")
    rs += IFF("DEF2", "local", "M_t_ideal", "t_local", "local D is t-local iff M^t = M")
    rs += R("C4", "local & M_principal", "t_local", "local with M = pD principal implies t-local")
    rs += R("C5", "local & one_dim", "t_local", "a local domain of Krull dimension 1 is t-local")
    rs += R("C3", "local & M_radical_principal", "t_local",
            "if M = rad(xD) for some x then M is a t-ideal")
    rs += R("LIN", "local & linearly_ordered_spectrum", "t_local",
            "local with Spec D a chain implies M^t = M")
    rs += R("LIN2", "linearly_ordered_spectrum", "every_prime_t_ideal",
            "when Spec D is a chain, every nonzero prime P satisfies P^t = P")
    rs += R("COMP", "comparable_element", "t_local",
            "a nonzero nonunit c with cD, xD always comparable forces D t-local")
    rs += R("PULL1", "pullback & R_t_local", "t_local",
            "for D = phi^-1(R) over a local T: R t-local implies D t-local")
    rs += R("PULL2", "pullback & t_local", "R_t_local",
            "for D = phi^-1(R) over a local T: D t-local implies R t-local")
    rs += R("MM1", "local & !MM_eq_D", "t_local", "(M:M) != D implies M = (D:(M:M)) is divisorial")
    rs += R("MM2", "local & MM_eq_D & M_fg & !M_principal", "!t_local",
            "(M:M) = D with M f.g.: M^t = M iff M is principal")
    rs += R("MM3a", "local & MM_eq_D & !M_fg & !M_t_invertible", "t_local",
            "(M:M) = D with M not f.g.: M^t = M iff (M M^-1)^t != D")
    rs += R("MM3b", "local & MM_eq_D & !M_fg & M_t_invertible", "!t_local",
            "(M:M) = D with M not f.g.: M^t = M iff (M M^-1)^t != D")
    rs += R("PVD", "PVD", "t_local", "a pseudo-valuation domain is t-local")
    rs += IFF("UNIQ", "local", "t_local", "unique_max_t", "local D is t-local iff Max^t(D) = {M}")
    # DW, TW, DT
    rs += IFF("TL1", "local", "t_local", "DW", "for local D: t-local iff d = w")
    rs += IFF("DW1", "", "DW", "every_max_t", "d = w iff every maximal ideal is a t-ideal")
    rs += IFF("DW2", "", "DW", "GV_trivial", "d = w iff the only GV ideal is D")
    rs += IFF("TLK", "", "t_linkative", "every_max_t", "every overring t-linked iff Max(D) consists of t-ideals")
    rs += R("DT1", "DT_fgv", "DW", "d = t forces d = w, as w lies between them")
    rs += R("DT2", "DT_fgv", "TW", "d = t forces w = t, as w lies between them")
    rs += R("DT3", "DW & TW", "DT_fgv", "d = w and w = t give d = t")
    rs += R("CL", "t_local", "Cl_t_trivial", "in a t-local domain t-invertible t-ideals are principal")
    rs += R("HZ", "Noetherian & DT_fgv", "dim_le_1", "a Noetherian domain with d = t has dimension at most 1")
    rs += R("FTC", "t_local", "finite_t_character", "one maximal t-ideal is finite t-character")
    # Nagata rings
    rs += R("NAG1", "nagata_v", "DW", "Na(D, v) always satisfies d = w")
    rs += R("NAG2", "nagata_v & base_t_local", "t_local", "Max^t(D) = {M} makes Na(D, v) t-local")
    rs += IFF("NAG3", "nagata_d", "base_t_local", "t_local", "D(X) is t-local iff D is")
    # valuation criteria
    rs += R("V1", "t_local & GCD", "valuation", "a t-local GCD domain is a valuation domain")
    rs += R("V2", "t_local & PvMD", "valuation", "a t-local PvMD is a valuation domain")
    rs += R("V3a", "t_local & integrally_closed & FC", "valuation",
            "integrally closed, finite conductor and t-local imply valuation")
    rs += R("V3b", "t_local & integrally_closed & coherent", "valuation",
            "integrally closed, coherent and t-local imply valuation")
    rs += R("V4", "pre_Schreier & v_FC", "GCD", "a pre-Schreier v-finite conductor domain is GCD")
    rs += R("V5", "atomic & comparable_element", "DVR", "atomic with a nonunit comparable element implies DVR")
    rs += R("V6a", "PvMD & treed", "Prufer", "a PvMD with Spec D a tree is Prufer")
    rs += R("V6b", "PvMD & every_max_t", "Prufer", "a PvMD whose maximal ideals are t-ideals is Prufer")
    rs += IFF("V7", "", "every_prime_contains_comparable", "valuation",
              "every nonzero prime holds a comparable element iff D is a valuation domain")
    rs += IFF("V8", "comparable_element", "comparable_set_meet_zero", "valuation",
              "given comparables C, the intersection of cD over C is 0 iff D is valuation")
    rs += R("MCA", "integrally_closed & FC & linearly_ordered_spectrum", "valuation",
            "integrally closed finite conductor with Spec D a chain implies valuation")
    rs += R("G1", "comparable_element & DQ_valuation", "valuation",
            "with x comparable and Q the intersection of x^n D: D valuation iff D_Q valuation")
    rs += R("G2", "valuation", "DQ_valuation", "localizations of a valuation domain are valuation domains")
    rs += R("TREED", "Prufer", "every_prime_t_ideal", "in a Prufer domain each D_P is valuation, so P^t = P")
    rs += R("TREED2", "Prufer", "every_prime_well_behaved", "in a Prufer domain each P D_P is a t-ideal")
    # Archimedean
    rs += R("ARC1", "Noetherian", "Archimedean", "Krull intersection: the x^n D meet in 0", std=True)
    rs += R("ARC2", "one_dim", "Archimedean", "one-dimensional domains are Archimedean", std=True)
    rs += R("ARC3", "completely_integrally_closed", "Archimedean", "c.i.c. domains are Archimedean", std=True)
    rs += R("ARC4", "nonzero_power_intersection", "!Archimedean",
            "a nonunit x with the x^n D meeting in a nonzero ideal violates the definition")
    rs += R("ARC5", "!nonzero_power_intersection", "Archimedean",
            "definition: every nonunit x has the x^n D meeting in 0", std=True)
    # standard implications
    std = [
        ("S1", "valuation", "Bezout"), ("S2", "Bezout", "GCD"), ("S3", "GCD", "PvMD"),
        ("S4", "Bezout", "Prufer"), ("S5", "Prufer", "PvMD"), ("S6", "PvMD", "integrally_closed"),
        ("S7", "GCD", "Schreier"), ("S8", "Schreier", "pre_Schreier"), ("S9", "Schreier", "integrally_closed"),
        ("S10", "valuation", "t_local"), ("S11", "valuation", "linearly_ordered_spectrum"),
        ("S12", "linearly_ordered_spectrum", "treed"), ("S13", "Prufer", "treed"),
        ("S14", "DVR", "valuation"), ("S15", "DVR", "Noetherian"), ("S16", "DVR", "one_dim"),
        ("S17", "UFD", "GCD"), ("S18", "UFD", "Krull"), ("S19", "Krull", "completely_integrally_closed"),
        ("S20", "Krull", "PvMD"), ("S21", "completely_integrally_closed", "integrally_closed"),
        ("S22", "Noetherian", "coherent"), ("S23", "coherent", "FC"), ("S24", "FC", "v_FC"),
        ("S25", "GCD", "v_FC"), ("S26", "Noetherian", "atomic"), ("S27", "one_dim", "dim_le_1"),
        ("S28", "PvMD", "TW"), ("S29", "valuation", "PVD"), ("S30", "PVD", "local"),
        ("S31", "Bezout", "coherent"), ("S32", "valuation", "integrally_closed"),
        ("S36", "Krull", "finite_t_character"), ("S37", "UFD", "Cl_t_trivial"),
        ("S38", "Noetherian", "finite_t_character"),
    ]
    text = {
        "S28": "in a PvMD the w- and t-operations agree",
        "S30": "pseudo-valuation domains are local",
        "S36": "a nonzero element of a Krull domain lies in finitely many height-one primes",
        "S37": "a Krull domain is a UFD exactly when its t-class group vanishes",
        "S38": "a nonzero element of a Noetherian domain lies in finitely many maximal t-ideals",
    }
    for rid, a, b in std:
        rs += R(rid, a, b, text.get(rid, f"{a.replace('_', ' ')} implies {b.replace('_', ' ')}"), std=True)
    rs += R("S39", "Krull & Cl_t_trivial", "UFD", "a Krull domain with trivial t-class group is a UFD", std=True)
    rs += R("S33", "valuation & !field", "comparable_element",
            "in a valuation domain every nonunit is comparable", std=True)
    rs += R("S34", "valuation & Noetherian & !field", "DVR", "a Noetherian valuation domain is a DVR", std=True)
    rs += R("S35", "field", "!comparable_element", "a field has no nonzero nonunit", std=True)
    return rs


RULES: tuple[Rule, ...] = tuple(_rules())

FLAGS = tuple(sorted({f for r in RULES for f, _ in r.premises + (r.conclusion,)}))


class Contradiction(RuntimeError):
    """A computation or declared fact disagrees with a rule conclusion.

    Treated as a soundness bug: the trace is kept for the diagnostic."""

    def __init__(self, flag: str, old: Verdict, new: Verdict):
        super().__init__(f"contradiction on {flag}: {old.value.value} ({_brief(old)}) vs "
                         f"{new.value.value} ({_brief(new)})")
        self.flag, self.old, self.new = flag, old, new


def _brief(v: Verdict) -> str:
    parts = []
    for p in v.provenance:
        parts.append(p.rule or (p.trace[0] if p.trace else p.kind))
    return "; ".join(parts)


# -- engine -----------------------------------------------------------------------

def _holds(facts: dict[str, Value], lits: Iterable[Lit]) -> bool:
    return all(facts.get(f) is Value.of(v) for f, v in lits)


_COMPILED: dict[int, tuple] = {}


def _compile(rules: Sequence[Rule]):
    """Premises and conclusions as Values, plus a premise-flag index (cached)."""
    hit = _COMPILED.get(id(rules))
    if hit is not None and hit[0] is rules:
        return hit[1], hit[2]
    prem = [tuple((f, Value.of(v)) for f, v in r.premises) for r in rules]
    concl = [(r.conclusion[0], Value.of(r.conclusion[1])) for r in rules]
    idx: dict[str, list[int]] = {}
    for i, ps in enumerate(prem):
        for f, _ in ps:
            idx.setdefault(f, []).append(i)
    body = [(ps, c) for ps, c in zip(prem, concl)]
    if len(_COMPILED) > 256:
        _COMPILED.clear()
    _COMPILED[id(rules)] = (rules, body, idx)
    return body, idx


def saturate(seeds: dict[str, Value], rules: Sequence[Rule] = RULES,
             skip: str | None = None) -> dict[str, Value]:
    """Close ``seeds`` under ``rules``.  Raises on conflict.

    Agenda-driven: a rule is rechecked only when one of its premise flags
    gains a value; pending rules are taken in the given order.  ``skip``
    names a flag no rule may conclude (used to test route independence)."""
    facts = dict(seeds)
    body, idx = _compile(rules)
    # a rule can only fire once each premise flag is known, so start from the
    # rules mentioning a seeded flag (and any premise-free rules)
    queued = [not ps for ps, _ in body]
    for f in facts:
        for j in idx.get(f, ()):
            queued[j] = True
    heap = [j for j, q in enumerate(queued) if q]
    get = facts.get
    while heap:
        i = heapq.heappop(heap)
        queued[i] = False
        ps, (f, want) = body[i]
        if f == skip:
            continue
        for p, v in ps:
            if get(p) is not v:
                break
        else:
            have = get(f)
            if have is None:
                facts[f] = want
                for j in idx.get(f, ()):
                    if not queued[j]:
                        queued[j] = True
                        heapq.heappush(heap, j)
            elif have is not want:
                raise Contradiction(f, Verdict(have, (Provenance("rule", rule="(earlier)"),)),
                                    Verdict(want, (rules[i].citation(),)))
    return facts


@dataclass
class Inference:
    """The saturated fact base, with flag verdicts assembled canonically."""
    verdicts: dict[str, Verdict]
    routes: dict[str, list[str]] = field(default_factory=dict)

    def get(self, flag: str) -> Verdict:
        return self.verdicts.get(flag) or Verdict.unknown(f"no rule or computation decides {flag}")


def _closure_without(base: dict[str, Value], rules: Sequence[Rule], flag: str,
                     drop_seed: bool = False) -> dict[str, Value]:
    """Closure with ``flag`` unseeded and (unless ``drop_seed``) never
    concluded.  No conflict can arise: it is contained in the full closure."""
    seeds = {f: v for f, v in base.items() if f != flag}
    return saturate(seeds, rules, skip=None if drop_seed else flag)


def infer(seeds: dict[str, Verdict], rules: Sequence[Rule] = RULES,
          declared: Iterable[str] = ()) -> Inference:
    """Forward chaining from seed verdicts.

    Each concluded flag lists its seed provenance and every rule deriving it
    from premises that do not themselves rest on the flag (independent
    routes).  The output does not depend on rule order.  A flag that is lost
    when the declared seeds are dropped is conditional on the declarations in
    its support."""
    declared = set(declared)
    for f, v in seeds.items():
        if not v.known:
            raise ValueError(f"seed {f} must be Yes or No")
    base = {f: v.value for f, v in seeds.items()}
    facts = saturate(base, rules)
    for f, v in seeds.items():
        if facts[f] is not v.value:
            raise Contradiction(f, v, Verdict(facts[f], (Provenance("rule", rule="(closure)"),)))
    plain = saturate({f: v for f, v in base.items() if f not in declared}, rules) if declared else facts
    # every closure below is contained in ``facts``, so only rules firing there matter
    active = [r for r in rules if facts.get(r.conclusion[0]) is Value.of(r.conclusion[1])
              and _holds(facts, r.premises)]
    by_concl: dict[str, list[Rule]] = {}
    for r in active:
        by_concl.setdefault(r.conclusion[0], []).append(r)
    out: dict[str, Verdict] = {}
    routes: dict[str, list[str]] = {}
    for f, val in facts.items():
        prov: list[Provenance] = list(seeds[f].provenance) if f in seeds else []
        firing = list(by_concl.get(f, ()))
        if firing and not all(p != f and p in base for r in firing for p, _ in r.premises):
            rest = _closure_without(base, active, f)
            firing = [r for r in firing if _holds(rest, r.premises)]
        firing.sort(key=lambda r: (r.derived, r.id))
        prov.extend(r.citation() for r in firing)
        routes[f] = [r.id for r in firing]
        cond = set(seeds[f].conditional_on) if f in seeds else set()
        if f not in plain:
            cond |= {d for d in declared
                     if f not in _closure_without(base, active, d, drop_seed=True)} or declared
        if not prov:  # derived only through chains that loop back to f: keep the shallowest rule
            r0 = next(r for r in sorted(rules, key=lambda r: (r.derived, r.id))
                      if r.conclusion == (f, val is Value.YES) and _holds(facts, r.premises))
            prov.append(r0.citation())
            routes[f] = [r0.id]
        out[f] = Verdict(val, tuple(prov), conditional_on=tuple(sorted(cond)))
    return Inference(out, routes)


def violations(verdicts: dict[str, Verdict], rules: Sequence[Rule] = RULES) -> list[str]:
    """Post-pass: rules whose premises hold while the conclusion fails or is missing."""
    facts = {f: v.value for f, v in verdicts.items() if v.known}
    bad = []
    for r in rules:
        if _holds(facts, r.premises):
            f, v = r.conclusion
            if facts.get(f) is not Value.of(v):
                bad.append(f"{r.id}: premises hold but {f} is {facts.get(f, Value.UNKNOWN).value}")
    return bad


def permuted(seed: int) -> list[Rule]:
    """The rule base in a reproducible shuffled order (for order-independence checks)."""
    rs = list(RULES)
    random.Random(seed).shuffle(rs)
    return rs


def rule_table() -> list[dict]:
    return [{"id": r.id, "if": [f if v else "!" + f for f, v in r.premises],
             "then": r.conclusion[0] if r.conclusion[1] else "!" + r.conclusion[0],
             "statement": r.statement} for r in RULES if "/" not in r.id]

