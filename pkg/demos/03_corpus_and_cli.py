"""The classifier across the fixture corpus, then the command line.

Run: python demos/03_corpus_and_cli.py
"""
from pathlib import Path

from starforge import classify, load, model
from starforge.cli import main as cli
from starforge.query import run_query

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main():
    print("1. Valuation or not, and why")
    for path in sorted(FIXTURES.glob("*.json")):
        m = model(load(path))
        r = classify(m)
        v = r.get("valuation")
        t = r.get("t_local")
        routes = r.routes.get("valuation", [])
        print(f"  {m.name:<14} t-local={t.value.value:<8} valuation={v.value.value:<8} "
              f"routes: {', '.join(routes[:4]) or '-'}")

    print("\n2. A divisorial computation, step by step (R + M with M = (X, Y)C[X, Y]_(X, Y))")
    rc = model(load(FIXTURES / "fx-rc.json"))
    v = run_query(rc, "divisorial:M2").verdict
    for step in v.provenance[0].trace:
        print("  ", step)
    print(f"   (D : M^2) is {v.result['inverse']}, (D : T) is {v.result['closure']}: "
          f"M^2 is {'not ' if not v.is_yes else ''}divisorial")

    print("\n3. The command line, with exit codes")
    for argv in (["check", str(FIXTURES / "fx-dvr.json"), "--query", "flag:DVR"],
                 ["check", str(FIXTURES / "fx-nagata.json"), "--query", "flag:valuation"],
                 ["oracle", str(FIXTURES / "fx-nreg2.json"), "--ideal", "I", "--op", "v", "--box", "5"]):
        print("  $ starforge", " ".join(a if "/" not in a else Path(a).name for a in argv))
        code = cli(argv)
        print(f"  exit {code}")


if __name__ == "__main__":
    main()
