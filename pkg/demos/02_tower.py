"""Walking through the four-dimensional pullback tower.

D is built from three layers: a discrete valuation ring in Z on top, the
power series ring Q[[X, Y]] below it, and Z_(p) at the bottom.  The script asks
the same questions a user would ask from the command line.

Run: python demos/02_tower.py
"""
from pathlib import Path

from starforge import classify, find_comparable, load, model, run_query
from starforge.classifier import comparable_prime

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "fx-tower4.json"


def ask(m, query):
    v = run_query(m, query).verdict
    rules = [p.rule for p in v.provenance if p.kind == "rule"]
    extra = f"  result={v.result}" if v.result is not None and not isinstance(v.result, dict) else ""
    print(f"  {query:<32} {v.value.value:<8} {', '.join(rules[:3])}{extra}")
    return v


def main():
    m = model(load(FIXTURE))
    print(f"{m.name}: {load(FIXTURE).note}")
    print("spectrum:", ", ".join(m.spectrum.names()))

    print("\n1. Global shape")
    ask(m, "dim")
    ask(m, "t-local")
    print("   the maximal ideal is generated by p, so M is a t-ideal at once.")

    print("\n2. The prime Q below M")
    ask(m, "t-ideal:Q")
    ask(m, "well-behaved:Q")
    ask(m, "well-behaved:PX")
    print("   Q is a t-ideal of D, but Q D_Q is not a t-ideal of the localization.")

    print("\n3. Inside the upper layer T")
    v = ask(m, "T::t-ideal:M")
    print(f"   witness: F = {v.witness['F']!r} with F^v = {v.witness['F^v']!r}, which is all of T")
    ask(m, "T::t-local")
    ask(m, "T::flag:finite_t_character")

    print("\n4. Comparable elements")
    w = find_comparable(m).witness
    print(f"   witness {w['element']} with Q = {w['Q']}")
    rep = comparable_prime(m, m.elements["p"])
    print(f"   dim D = {rep.dim} = dim D/Q ({rep.dim_quotient}) + dim D_Q ({rep.dim_localization})")
    ask(m, "archimedean")

    print("\n5. The full report")
    r = classify(m)
    yes = sorted(f for f, v in r.flags.items() if v.is_yes)
    print(f"   {len(r.flags)} flags, {len(r.violations)} post-pass violations")
    print("   Yes:", ", ".join(yes))


if __name__ == "__main__":
    main()
