"""Command line: ``check``, ``corpus run`` and ``oracle``."""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import fileformat as ff
from . import starops
from .corpus import run as corpus_run, summary
from .query import EXIT_BUILD, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, QueryError, lookup_ideal, run_query
from .rules import Contradiction
from .staircase import Box, BoxTooLarge, Staircase, StaircaseError, inverse, oracle, restrict, v_closure


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits 2 already; keep the contract explicit
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="starforge", description="star operations and t-local domains on a finite fragment")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="answer one query about a domain file")
    c.add_argument("file")
    c.add_argument("--query", required=True)
    c.add_argument("--box", type=int, help="oracle point cap for this run (overrides STARFORGE_BOX_CAP)")
    c.add_argument("--json", action="store_true", help="print the full report as JSON")

    r = sub.add_parser("corpus", help="fixture corpus")
    rs = r.add_subparsers(dest="corpus_cmd", required=True, parser_class=_Parser)
    run = rs.add_parser("run", help="evaluate every expectation in a directory of fixtures")
    run.add_argument("dir")
    run.add_argument("--parallel", action="store_true")

    o = sub.add_parser("oracle", help="compare a closure with the brute-force box oracle")
    o.add_argument("file")
    o.add_argument("--ideal", required=True)
    o.add_argument("--op", required=True, choices=["v", "t", "w"])
    o.add_argument("--box", type=int, required=True, help="box radius")
    return p


def _load(path: str):
    """(model, None) or (None, exit code) with the diagnostic printed."""
    try:
        df = ff.load(path)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return None, EXIT_USAGE
    except ff.SchemaError as e:
        print(f"schema error at {e.pointer}: {e}", file=sys.stderr)
        return None, EXIT_USAGE
    try:
        return ff.model(df), None
    except ff.BuildError as e:
        print(f"build error: {e}", file=sys.stderr)
        return None, EXIT_BUILD


def cmd_check(a) -> int:
    if a.box is not None:
        os.environ["STARFORGE_BOX_CAP"] = str(a.box)
    m, code = _load(a.file)
    if m is None:
        return code
    try:
        rep = run_query(m, a.query)
    except QueryError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Contradiction as e:
        print(f"internal contradiction: {e}", file=sys.stderr)
        return EXIT_BUILD
    if a.json:
        print(json.dumps(rep.to_json(), sort_keys=True, indent=2))
    else:
        v = rep.verdict
        print(f"{a.query}: {v.value.value}")
        for p in v.provenance:
            print(f"  {p.kind}: {p.rule or ''} {p.citation or ''} {' | '.join(p.trace)}".rstrip())
        for t in v.attempted:
            print(f"  attempted: {t}")
        if v.conditional_on:
            print(f"  conditional on: {', '.join(v.conditional_on)}")
        if v.result is not None and not isinstance(v.result, dict):
            print(f"  result: {v.result}")
    return rep.exit_code


def cmd_corpus(a) -> int:
    try:
        outs = corpus_run(a.dir, parallel=a.parallel)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(summary(outs))
    return EXIT_OK if all(o.ok for o in outs) else EXIT_MISMATCH


def cmd_oracle(a) -> int:
    m, code = _load(a.file)
    if m is None:
        return code
    try:
        I = lookup_ideal(m, a.ideal)
    except QueryError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if not isinstance(I, Staircase):
        print("usage error: the box oracle covers single-atom monomial ideals only", file=sys.stderr)
        return EXIT_USAGE
    G = I.group
    # the oracle works on integer boxes; rational groups are out of scope
    if G.kind.value == "RationalSubgroup":
        print("usage error: no integer box for a rational value group", file=sys.stderr)
        return EXIT_USAGE
    box = Box.radius(G.arity, a.box)
    if not all(box.contains(g) for g in inverse(I).generators):
        print(f"usage error: box radius {a.box} does not contain the generators of I^-1", file=sys.stderr)
        return EXIT_USAGE
    try:
        if a.op == "w":
            if G.kind.value != "ComponentwiseN":
                print("usage error: the w oracle needs a ComponentwiseN atom", file=sys.stderr)
                return EXIT_USAGE
            lib = starops.w_staircase(I)
            got = oracle("w_closure", [I], box)
        else:  # every staircase is finitely generated, so t agrees with v
            lib = v_closure(I)
            got = oracle("v_closure", [I], box)
        want = restrict(lib, box)
    except BoxTooLarge as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except StaircaseError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    diff = sorted(got ^ want)
    print(json.dumps({"ideal": a.ideal, "op": a.op, "box": a.box, "points": box.size,
                      "library": lib.to_json(), "agree": not diff, "mismatches": [list(p) for p in diff[:20]]},
                     sort_keys=True))
    return EXIT_OK if not diff else EXIT_MISMATCH


def main(argv: list[str] | None = None) -> int:
    a = _parser().parse_args(argv)
    if a.cmd == "check":
        return cmd_check(a)
    if a.cmd == "corpus":
        return cmd_corpus(a)
    return cmd_oracle(a)


if __name__ == "__main__":
    sys.exit(main())
