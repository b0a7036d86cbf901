"""Fixture corpus runner: evaluate every expectation, deterministically."""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from . import fileformat as ff
from .query import QueryError, matches, run_query
from .rules import Contradiction



@dataclass
class Outcome:
    fixture: str
    query: str
    expected: Any
    got: dict | None  # report JSON without timings
    ok: bool
    error: str = ""

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        got = self.got["verdict"]["value"] if self.got else self.error
        return f"{tag} {self.fixture} {self.query} expected={json.dumps(self.expected)} got={got}"

    def diff(self) -> str:
        """Both sides of a mismatch, with the provenance that produced it."""
        if self.got is None:
            return f"  expected {json.dumps(self.expected)}\n  error    {self.error}"
        v = self.got["verdict"]
        prov = "; ".join(p.get("rule") or " / ".join(p.get("trace", [])) or p["kind"] for p in v["provenance"])
        shown = v.get("result", v["value"]) if isinstance(self.expected, int) else v["value"]
        return (f"  expected {json.dumps(self.expected)}\n  got      {json.dumps(shown, sort_keys=True)}"
                f"\n  via      {prov or '; '.join(v.get('attempted', []))}")


def run_file(path: str | Path) -> list[Outcome]:
    name = Path(path).stem
    try:
        df = ff.load(path)
    except ff.SchemaError as e:
        return [Outcome(name, "(schema)", "valid", None, False, str(e))]
    try:
        m = ff.model(df)
    except ff.BuildError as e:
        return [Outcome(name, "(build)", "builds", None, False, str(e))]
    out = []
    for q in sorted(df.expect):
        want = df.expect[q]
        try:
            rep = run_query(m, q)
            js = rep.to_json(timings=False)
            ff.validate(rep.to_json(), "report")
            out.append(Outcome(df.name, q, want, js, matches(rep, want)))
        except (QueryError, Contradiction, ff.SchemaError) as e:
            out.append(Outcome(df.name, q, want, None, False, f"{type(e).__name__}: {e}"))
    return out


def fixture_paths(directory: str | Path) -> list[Path]:
    d = Path(directory)
    if not d.is_dir():
        raise FileNotFoundError(f"{d} is not a directory")
    return sorted(d.glob("*.json"))


def run(directory: str | Path, parallel: bool = False, workers: int | None = None) -> list[Outcome]:
    """All outcomes, ordered by fixture file then query, however they were computed."""
    paths = fixture_paths(directory)
    if parallel and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            chunks = list(ex.map(run_file, paths))  # map keeps submission order
    else:
        chunks = [run_file(p) for p in paths]
    return [o for chunk in chunks for o in chunk]


def summary(outcomes: list[Outcome]) -> str:
    lines = [o.line() for o in outcomes]
    bad = [o for o in outcomes if not o.ok]
    for o in bad:
        lines.append(f"MISMATCH {o.fixture} {o.query}")
        lines.append(o.diff())
    lines.append(f"{len(outcomes) - len(bad)}/{len(outcomes)} expectations passed")
    return "\n".join(lines) + "\n"
