"""starforge: star operations, t-local domains and comparable elements on a
finite, exactly representable fragment of commutative algebra."""
from .classifier import archimedean, classify, comparable_prime, find_comparable, is_t_local
from .domain import DomainModel, build
from .fileformat import dumps, load, loads, model
from .query import Report, run_query
from .verdict import Provenance, Value, Verdict

__version__ = "0.1.0"

__all__ = [
    "DomainModel", "Provenance", "Report", "Value", "Verdict", "archimedean", "build", "classify",
    "comparable_prime", "dumps", "find_comparable", "is_t_local", "load", "loads", "model", "run_query",
]
