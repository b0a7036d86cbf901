"""Shared strategies and fixture loaders."""
from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import strategies as st

from starforge import fileformat as ff
from starforge.staircase import Staircase
from starforge.values import ValueGroup

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

GROUPS = {
    "N1": ValueGroup.nn(1),
    "N2": ValueGroup.nn(2),
    "S23": ValueGroup.semigroup([2, 3]),
    "Lex1": ValueGroup.lex(1),
    "Lex2": ValueGroup.lex(2),
}


def fixture_paths() -> list[Path]:
    return sorted(FIXTURES.glob("*.json"))


def load_model(name: str):
    return ff.model(ff.load(FIXTURES / f"{name}.json"))


@pytest.fixture(scope="session")
def models():
    cache: dict = {}

    def get(name):
        if name not in cache:
            cache[name] = load_model(name)
        return cache[name]
    return get


def vectors(G: ValueGroup, lo: int = 0, hi: int = 3):
    """Small generator vectors; integral for monoid kinds, signed for LexZ."""
    if G.kind.value == "LexZ":
        lo = -2
    return st.tuples(*[st.integers(lo, hi)] * G.arity)


def staircases(G: ValueGroup, lo: int = 0, hi: int = 3, max_gens: int = 3):
    return st.lists(vectors(G, lo, hi), min_size=1, max_size=max_gens).map(lambda gs: Staircase(G, gs))


STACK_FIXTURES = ["fx-tower4", "fx-rc", "fx-zpxy", "fx-zpxr", "fx-semigroup", "fx-da", "fx-pvd-r", "fx-pvd-qbar",
                  "fx-nreg2", "fx-nreg3", "fx-dvr", "fx-lex2"]


def random_path(S, rng, integral: bool = True, lo: int = -2, hi: int = 3):
    """A monomial path of the stack ``S``; with ``integral`` it lies in D."""
    while True:
        path = []
        first = rng.randrange(S.depth)
        for i, L in enumerate(S.layers):
            n = L.group.arity if not L.is_field else 0
            if i < first:
                path.append((0,) * n)
            elif i == first and integral:
                path.append(tuple(rng.randint(0, hi) for _ in range(n)))
            else:
                path.append(tuple(rng.randint(lo, hi) for _ in range(n)))
        try:
            p = S.conform_path(path)
        except ValueError:
            continue
        if not integral or S.in_ring(p):
            return p


def random_ideal(S, rng, integral: bool = True, max_gens: int = 3, unit_rate: float = 0.0):
    gens = [random_path(S, rng, integral) for _ in range(rng.randint(1, max_gens))]
    if unit_rate and rng.random() < unit_rate:
        gens.append(S.zero_path())
    return S.generated(gens), gens


# -- acceptance bookkeeping ---------------------------------------------------------
# Tests carry ``@pytest.mark.criterion(n)``; their outcomes are collected here so
# that tests/test_acceptance.py (always run last) can report one line per criterion.

RESULTS: dict[int, list[tuple[str, bool]]] = {}


def pytest_addoption(parser):
    parser.addoption("--criterion", type=int, default=None, help="run only the tests of one acceptance criterion")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): evidence for acceptance criterion n")


def _criteria(item) -> list[int]:
    return [n for mk in item.iter_markers("criterion") for n in mk.args]


def pytest_collection_modifyitems(config, items):
    only = config.getoption("--criterion")
    if only is not None:
        keep = [it for it in items if only in _criteria(it)]
        config.hook.pytest_deselected(items=[it for it in items if it not in keep])
        items[:] = keep
        return
    items.sort(key=lambda it: it.module.__name__.endswith("test_acceptance"))  # stable: acceptance last


def pytest_runtest_makereport(item, call):
    if call.when == "call" or call.excinfo is not None:
        ok = call.excinfo is None
        for n in _criteria(item):
            RESULTS.setdefault(n, []).append((item.nodeid, ok))
