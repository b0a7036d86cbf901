"""Star operations on the representable fragment of a domain model."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from .domain import DomainModel
from .fragment import DirectedIntersection, DirectedUnion, PrincipalBy, check_directed
from .layered import Ideal, LayeredIdeal, Stack
from .staircase import Staircase, inverse as st_inverse
from .verdict import Provenance, Verdict, computed

OPS = ("d", "w", "t", "v")
WITNESS_GENERATORS = 4
WITNESS_POOL = 8


class FragmentUnsupported(ValueError):
    pass


class UnknownClosure(ValueError):
    def __init__(self, msg: str, attempted: tuple[str, ...] = ()):
        super().__init__(msg)
        self.attempted = attempted or (msg,)


def rule(rid: str, statement: str) -> Provenance:
    return Provenance("rule", rule=rid, citation=statement)


RULE_PRINCIPAL = ("PRINC", "a principal fractional ideal is fixed by every star operation")
RULE_DINT = ("DINT", "an intersection of principal fractional ideals is divisorial")
RULE_COND = ("COND", "the conductor (D:T) of an overring T is divisorial, being the inverse of T")
RULE_VT = ("VT", "on finitely generated ideals the t-closure equals the v-closure")
RULE_DW = ("DWC", "in a DW-domain the w-closure is the identity")
RULE_TLGV = ("TLGV", "a t-local domain has no proper GV ideal")


@dataclass
class Closure:
    ideal: object
    provenance: tuple[Provenance, ...]


def _is_layered(I) -> bool:
    return isinstance(I, (Staircase, LayeredIdeal))


def _stack(D: DomainModel) -> Stack:
    if D.kind != "stack":
        raise FragmentUnsupported(f"{D.kind} model has no layered fragment")
    return D.stack


def show(I) -> str:
    return repr(I)


# -- inverse -----------------------------------------------------------------

def ideal_inverse(D: DomainModel, I) -> object:
    if _is_layered(I):
        return _stack(D).inverse(I)
    if isinstance(I, PrincipalBy) and D.kind == "polyext":
        v, j = I.element
        return PrincipalBy((tuple(-c for c in v), -j))
    raise FragmentUnsupported(f"inverse of {I!r} is outside the fragment")


# -- closures ----------------------------------------------------------------

def closure(D: DomainModel, I, op: str, dw: Verdict | None = None) -> Closure:
    """Star closure of a fragment ideal.  ``dw`` is the model's DW verdict
    (needed for the w-operation on non-atomic stacks)."""
    if op not in OPS:
        raise ValueError(f"unknown star operation {op!r}")
    if op == "d":
        return Closure(I, (computed("d is the identity"),))
    if isinstance(I, PrincipalBy):
        return Closure(I, (rule(*RULE_PRINCIPAL),))
    if isinstance(I, DirectedIntersection):
        if op in ("v", "t"):
            return Closure(I, (rule(*RULE_DINT),))
        raise UnknownClosure("w-closure of a directed intersection", ("DINT covers v and t only",))
    if isinstance(I, DirectedUnion):
        return _union_closure(D, I, op, dw)
    S = _stack(D)
    if op == "v":
        inv = S.inverse(I)
        out = S.inverse(inv)
        return Closure(out, (computed(f"I^-1 = {show(inv)}", f"I^v = (D:I^-1) = {show(out)}"),))
    if op == "t":
        return _t_closure(D, I)
    return _w_closure(D, I, dw)


def _t_closure(D: DomainModel, I) -> Closure:
    S = _stack(D)
    v = S.v_closure(I)
    if S.is_fg(I):
        return Closure(v, (rule(*RULE_VT), computed(f"I^v = {show(v)}")))
    if v == I:
        return Closure(I, (computed("I^v = I, and I <= I^t <= I^v"),))
    W = None
    for F in fg_subideals(S, I):
        Fv = S.v_closure(F)
        W = Fv if W is None else S.add(W, Fv)
    if W is not None and W == v:
        return Closure(v, (computed("f.g. subideals already have v-closure filling I^v",
                                    f"I^t = I^v = {show(v)}"),))
    raise UnknownClosure("t-closure of a non-finitely generated ideal",
                         ("I^v != I", f"searched f.g. subideals with <= {WITNESS_GENERATORS} generators"))


def fg_subideals(S: Stack, I, limit: int = WITNESS_GENERATORS):
    """Finitely generated monomial subideals from the minimal monomials of ``I``."""
    monos = S.minimal_monomials(I)[:WITNESS_POOL]
    for k in range(1, min(limit, len(monos)) + 1):
        for combo in itertools.combinations(monos, k):
            yield S.generated(combo)


def _w_closure(D: DomainModel, I, dw: Verdict | None) -> Closure:
    S = _stack(D)
    if dw is not None and dw.is_yes:
        return Closure(I, (rule(*RULE_DW),) + dw.provenance)
    if S.depth == 1 and S.top.group.kind.value == "ComponentwiseN":
        out = w_staircase(I)
        return Closure(out, (computed("x in I^w iff (I :_D x)^-1 = D, tested on the box below I^v"),))
    t = _t_closure(D, I)
    if t.ideal == I:
        return Closure(I, (computed("I <= I^w <= I^t = I"),) + t.provenance)
    raise UnknownClosure("w-closure on a non-DW layered model", ("no GV witness search for layered models",))


def w_staircase(E: Staircase) -> Staircase:
    """Exact w-closure of a monomial ideal of a regular local atom."""
    G = E.group
    V = st_inverse(st_inverse(E))
    n = G.n
    lo = [min(g[i] for g in V.generators) for i in range(n)]
    hi = [max(g[i] for g in E.generators) for i in range(n)]
    ring = Staircase.ring(G)
    gens = list(E.generators)
    for x in itertools.product(*[range(a, max(a, b) + 1) for a, b in zip(lo, hi)]):
        if x not in V or x in E:
            continue
        c = _colon_point(E, x)
        if c is not None and st_inverse(c) == ring:
            gens.append(x)
    return Staircase(G, gens)


def _colon_point(E: Staircase, x) -> Staircase | None:
    """(E :_D x) for a monomial x."""
    from .staircase import colon
    return colon(E, Staircase(E.group, [x]), fractional=False)


def _union_closure(D: DomainModel, I: DirectedUnion, op: str, dw) -> Closure:
    S = _stack(D)
    if op == "w" and not (dw is not None and dw.is_yes):
        raise UnknownClosure("w-closure of a directed union on a non-DW model")
    if op == "w":
        return Closure(I, (rule(*RULE_DW),))
    if not check_directed(I, lambda a, b: S.leq(a, b), upward=True):
        raise FragmentUnsupported("declared union family is not upward directed")
    if op == "v":
        raise UnknownClosure("v-closure of an infinite union", ("only t is computed member-wise",))
    closed = DirectedUnion(lambda n, f=I.member: S.v_closure(f(n)), f"v-closures of ({I.description})")
    same = all(S.v_closure(I.member(n)) == I.member(n) for n in range(4))
    prov = [computed("t-closure of a directed union of f.g. ideals is the union of their v-closures")]
    if same:
        prov.append(computed("each checked member is divisorial"))
        return Closure(I, tuple(prov))
    return Closure(closed, tuple(prov))


# -- predicates ------------------------------------------------------------------

def is_t_ideal(D: DomainModel, I, conductor: bool = False) -> Verdict:
    if isinstance(I, PrincipalBy):
        return Verdict.yes(rule(*RULE_PRINCIPAL))
    if isinstance(I, DirectedIntersection):
        return Verdict.yes(rule(*RULE_DINT), computed(f"I = {I.description}"))
    try:
        c = closure(D, I, "t")
    except UnknownClosure as e:
        if conductor:
            return Verdict.yes(rule(*RULE_COND))
        return Verdict.unknown(*e.attempted)
    except FragmentUnsupported as e:
        return Verdict.unknown(str(e))
    if c.ideal == I or (isinstance(I, DirectedUnion) and c.ideal is I):
        prov = c.provenance + ((rule(*RULE_COND),) if conductor else ())
        return Verdict.yes(*prov)
    wit = witness_not_t(D, I)
    if wit is not None:
        F, Fv = wit
        return Verdict.no(computed(f"F = {show(F)} f.g. inside I", f"F^v = {show(Fv)} not inside I"),
                          witness={"F": F, "F^v": Fv})
    return Verdict.no(*c.provenance, computed(f"I^t = {show(c.ideal)} != I"))


def witness_not_t(D: DomainModel, I):
    """A f.g. subideal F of I with F^v not inside I, if the search finds one."""
    if not _is_layered(I):
        return None
    S = _stack(D)
    if S.is_fg(I):
        Iv = S.v_closure(I)
        if Iv != I:
            best = None
            for F in fg_subideals(S, I):
                Fv = S.v_closure(F)
                if not S.leq(Fv, I):
                    if best is None or len(S.minimal_monomials(F)) < len(S.minimal_monomials(best[0])):
                        best = (F, Fv)
            return best or (I, Iv)
        return None
    for F in fg_subideals(S, I):
        Fv = S.v_closure(F)
        if not S.leq(Fv, I):
            return F, Fv
    return None


def is_divisorial(D: DomainModel, I) -> Verdict:
    if isinstance(I, (PrincipalBy, DirectedIntersection)):
        return is_t_ideal(D, I)
    try:
        c = closure(D, I, "v")
    except (UnknownClosure, FragmentUnsupported) as e:
        return Verdict.unknown(str(e))
    return Verdict.of(c.ideal == I, *c.provenance, result=c.ideal)


def is_GV(D: DomainModel, J, t_local: Verdict | None = None) -> Verdict:
    try:
        S = _stack(D)
    except FragmentUnsupported as e:
        return Verdict.unknown(str(e))
    if not _is_layered(J):
        return Verdict.unknown("GV test needs a finitely generated layered ideal")
    if not S.is_fg(J):
        return Verdict.no(computed("J is not finitely generated"))
    if J == S.ring():
        return Verdict.yes(computed("J = D"))
    inv = S.inverse(J)
    prov = [computed(f"J^-1 = {show(inv)}")]
    if t_local is not None and t_local.is_yes and S.leq(J, S.ring()):
        prov.append(rule(*RULE_TLGV))
    return Verdict.of(inv == S.ring(), *prov)


def is_t_invertible(D: DomainModel, I, t_local: Verdict | None = None) -> Verdict:
    if isinstance(I, PrincipalBy):
        return Verdict.yes(rule(*RULE_PRINCIPAL))
    try:
        S = _stack(D)
        inv = S.inverse(I)
        prod = S.mul(I, inv)
        c = closure(D, prod, "t")
    except (UnknownClosure, FragmentUnsupported) as e:
        return Verdict.unknown(str(e))
    ok = c.ideal == S.ring()
    prov = [computed(f"I^-1 = {show(inv)}", f"I I^-1 = {show(prod)}", f"(I I^-1)^t = {show(c.ideal)}")]
    notes = []
    if ok and t_local is not None and t_local.is_yes:
        principal = S.is_principal(I)
        notes.append(f"t-local: t-invertible ideals are principal (generator {principal})")
        prov.append(rule("TINV", "t-local with (I I^-1)^t = D forces I = xD for some x"))
    return Verdict.of(ok, *prov, result={"notes": notes} if notes else None)


def is_v_coprime(D: DomainModel, a, b) -> Verdict:
    try:
        S = _stack(D)
        J = S.generated([a, b])
        inv = S.inverse(J)
    except FragmentUnsupported as e:
        return Verdict.unknown(str(e))
    return Verdict.of(inv == S.ring(), computed(f"(a, b)^-1 = {show(inv)}"))
