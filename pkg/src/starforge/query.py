"""Query dispatch: one string in, one Report out."""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Any, Callable

from . import classifier as C
from . import starops
from .domain import DomainModel, UnknownLocalization, UnknownPrime
from .layered import LayerError
from .rules import FLAGS
from .verdict import Value, Verdict, computed, structural

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_BUILD, EXIT_UNKNOWN = 0, 1, 2, 3, 10

BASE_QUERIES = ("t-local", "classify", "closure", "t-ideal", "well-behaved", "gv", "comparable", "dim",
                "spectrum")


class QueryError(ValueError):
    """Unknown query, or a name the model does not know (usage error)."""


@dataclass
class Report:
    query: str
    domain: str
    verdict: Verdict
    seconds: float = 0.0

    def to_json(self, timings: bool = True) -> dict:
        return {"query": self.query, "domain": self.domain, "verdict": self.verdict.to_json(),
                "timings": {"seconds": round(self.seconds, 6)} if timings else {}}

    @property
    def exit_code(self) -> int:
        return EXIT_UNKNOWN if self.verdict.value is Value.UNKNOWN else EXIT_OK


# -- scope -----------------------------------------------------------------------

def resolve_scope(m: DomainModel, query: str) -> tuple[DomainModel, str]:
    """Strip ``LABEL::`` and ``@Prime::`` prefixes, descending into sub-models."""
    while "::" in query:
        head, _, rest = query.partition("::")
        try:
            m = m.scope(head)
        except UnknownPrime as e:
            raise QueryError(f"unknown scope {head!r}: {e}") from None
        except UnknownLocalization as e:
            raise QueryError(f"cannot localize at {head[1:]!r}: {e}") from None
        query = rest
    return m, query


# -- name lookup ----------------------------------------------------------------

def _ideal(m: DomainModel, name: str):
    if name in m.named_ideals:
        return m.named_ideals[name]
    if name == "D" and m.kind == "stack":
        return m.ring()
    if name in m.spectrum:
        I = m.prime_ideal(name)
        if I is None:
            raise QueryError(f"prime {name} has no fragment representation")
        return I
    raise QueryError(f"unknown ideal {name!r}")


lookup_ideal = _ideal


def _element(m: DomainModel, name: str):
    if name not in m.elements:
        raise QueryError(f"unknown element {name!r}")
    return m.elements[name]


def _prime(m: DomainModel, name: str):
    if name not in m.spectrum:
        raise QueryError(f"unknown prime {name!r}")
    return name


def _name_of(m: DomainModel, I) -> str | None:
    for k, J in sorted(m.named_ideals.items()):
        if J == I:
            return k
    for e in m.spectrum.entries:
        if e.role != "zero" and not e.family:
            try:
                if m.prime_ideal(e.name) == I:
                    return e.name
            except (LayerError, ValueError):
                continue
    if m.kind == "stack" and I == m.ring():
        return "D"
    return None


# -- handlers ------------------------------------------------------------------------

def _classify(m, arg):
    r = C.classify(m)
    return Verdict.yes(computed("full classification", f"{len(r.flags)} reported flags, "
                                f"{len(r.violations)} post-pass violations"), result=r.to_json())


def _closure(m, arg):
    try:
        name, op = arg.rsplit(":", 1)
    except ValueError:
        raise QueryError("closure query is closure:<ideal>:<op>") from None
    if op not in starops.OPS:
        raise QueryError(f"unknown star operation {op!r}")
    I = _ideal(m, name)
    dw = C._light(m).get("DW") if m.kind == "stack" else None
    try:
        c = starops.closure(m, I, op, dw=dw)
    except starops.UnknownClosure as e:
        return Verdict.unknown(*e.attempted)
    except starops.FragmentUnsupported as e:
        return Verdict.unknown(str(e))
    same = c.ideal == I or c.ideal is I
    res = {"ideal": c.ideal.to_json() if hasattr(c.ideal, "to_json") else repr(c.ideal),
           "name": name if same else _name_of(m, c.ideal), "closed": same}
    return Verdict.yes(*c.provenance, result=res)


def _t_ideal(m, arg):
    if arg in m.spectrum:
        return C.classify(m).primes[_prime(m, arg)]["t_ideal"] if m.prime(arg).role != "zero" else \
            Verdict.unknown("the zero ideal is not a nonzero fractional ideal")
    return starops.is_t_ideal(m, _ideal(m, arg), conductor=any(c.name == arg for c in m.conductors))


def _well_behaved(m, arg):
    p = _prime(m, arg)
    if m.prime(p).role == "zero":
        return Verdict.unknown("the zero ideal is not a nonzero fractional ideal")
    return C.classify(m).primes[p]["well_behaved"]


def _gv(m, arg):
    return starops.is_GV(m, _ideal(m, arg), t_local=C.is_t_local(m))


def _divisorial(m, arg):
    I = _ideal(m, arg)
    v = starops.is_divisorial(m, I)
    if v.known and m.kind == "stack" and not isinstance(v.result, (type(None), str)):
        try:
            inv = m.stack.inverse(I)
        except (LayerError, ValueError):
            return v
        res = {"inverse": _name_of(m, inv), "closure": _name_of(m, v.result),
               "inverse_ideal": inv.to_json(), "closure_ideal": v.result.to_json()}
        return Verdict(v.value, v.provenance, conditional_on=v.conditional_on, result=res)
    return v


def _t_invertible(m, arg):
    return starops.is_t_invertible(m, _ideal(m, arg), t_local=C.is_t_local(m))


def _v_coprime(m, arg):
    a, _, b = arg.partition(",")
    if not b:
        raise QueryError("v-coprime query is v-coprime:<a>,<b>")
    return starops.is_v_coprime(m, _element(m, a.strip()), _element(m, b.strip()))


def _dim(m, arg):
    d = m.dim
    if d is None:
        return Verdict.unknown("dimension of this model is not computed")
    return Verdict.yes(structural("sum of the layer dimensions" if m.kind == "stack" else "from the base model"),
                       result=d)


def _spectrum(m, arg):
    return Verdict.yes(structural("spectrum assembled from the constructor tree"), result=m.spectrum.to_json())


def _flag(m, arg):
    r = C.classify(m)
    if arg not in r.flags and arg not in r.auxiliary and arg not in FLAGS and arg not in C.REPORT_FLAGS:
        raise QueryError(f"unknown flag {arg!r}")
    return r.get(arg)


def _comparable_prime(m, arg):
    x = _element(m, arg)
    try:
        rep = C.comparable_prime(m, x)
    except starops.FragmentUnsupported as e:
        return Verdict.unknown(str(e))
    except ValueError as e:
        raise QueryError(str(e)) from None
    p = computed(f"Q = intersection of the x^n D = {rep.Q}",
                 f"D/Q {'is' if rep.quotient_valuation else 'is not'} a valuation domain")
    return Verdict.of(rep.comparable, p, *rep.Q_equals_QDQ.provenance, result=rep.to_json())


HANDLERS: dict[str, Callable[[DomainModel, str], Verdict]] = {
    "t-local": lambda m, a: C.is_t_local(m),
    "classify": _classify,
    "closure": _closure,
    "t-ideal": _t_ideal,
    "well-behaved": _well_behaved,
    "gv": _gv,
    "comparable": lambda m, a: C.find_comparable(m),
    "dim": _dim,
    "spectrum": _spectrum,
    "divisorial": _divisorial,
    "t-invertible": _t_invertible,
    "v-coprime": _v_coprime,
    "flag": _flag,
    "comparable-prime": _comparable_prime,
    "archimedean": lambda m, a: C.archimedean(m),
}
NEEDS_ARG = {"closure", "t-ideal", "well-behaved", "gv", "divisorial", "t-invertible", "v-coprime", "flag",
             "comparable-prime"}


def run_query(m: DomainModel, query: str) -> Report:
    """Evaluate ``query`` on ``m``.  Raises QueryError for usage problems and
    Contradiction if the engine finds an inconsistency."""
    t0 = time.perf_counter()
    sub, q = resolve_scope(m, query)
    head, _, arg = q.partition(":")
    if head not in HANDLERS:
        raise QueryError(f"unknown query {q!r}")
    if head in NEEDS_ARG and not arg:
        raise QueryError(f"query {head} needs an argument")
    if head not in NEEDS_ARG and arg:
        raise QueryError(f"query {head} takes no argument")
    v = HANDLERS[head](sub, arg)
    return Report(query, m.name, v, time.perf_counter() - t0)


# -- expectations ----------------------------------------------------------------------

def matches(report: Report, expected: Any) -> bool:
    """Verdict strings compare values; an int compares a dim-like result; a
    closure query compares against the name of the expected ideal; a dict is
    a subset match against the verdict JSON."""
    v = report.verdict
    head = resolve_tail(report.query)
    if isinstance(expected, bool):
        return False
    if isinstance(expected, int):
        return v.is_yes and v.result == expected
    if isinstance(expected, str):
        if head == "closure" and expected not in ("Yes", "No", "Unknown"):
            return v.is_yes and isinstance(v.result, dict) and v.result.get("name") == expected
        return v.value.value == expected
    if isinstance(expected, dict):
        return _subset(expected, v.to_json())
    return False


def resolve_tail(query: str) -> str:
    return query.rsplit("::", 1)[-1].partition(":")[0]


def _subset(want, have) -> bool:
    if isinstance(want, dict):
        return isinstance(have, dict) and all(k in have and _subset(w, have[k]) for k, w in want.items())
    if isinstance(want, list):
        # every wanted item occurs somewhere in the actual list
        return isinstance(have, list) and all(any(_subset(w, h) for h in have) for w in want)
    return want == have
