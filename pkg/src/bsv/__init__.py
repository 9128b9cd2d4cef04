"""Exact verification toolkit for Brauer-Severi surface bundle obstructions."""

__version__ = "0.1.0"

from .coeff import CoeffElement, Q, QW, DEFAULT_PRIME, field_by_name, fp_mode, omega
from .poly import Polynomial, RationalFunction, VariableContext, parse_polynomial, parse_rational
from .ideal import EMPTY, GroebnerBasis, IdealHandle, buchberger

__all__ = [
    "CoeffElement",
    "Q",
    "QW",
    "DEFAULT_PRIME",
    "field_by_name",
    "fp_mode",
    "omega",
    "Polynomial",
    "RationalFunction",
    "VariableContext",
    "parse_polynomial",
    "parse_rational",
    "EMPTY",
    "GroebnerBasis",
    "IdealHandle",
    "buchberger",
    "parse_scenario",
    "serialize_scenario",
    "run_checks",
    "emit_report",
    "build_s1s2",
    "build_pencil",
    "build_appendix",
]


def __getattr__(name):
    # scenario/catalog pull in matplotlib-adjacent modules; import lazily
    if name in ("parse_scenario", "serialize_scenario", "run_checks", "emit_report"):
        from . import scenario

        return getattr(scenario, name)
    if name in ("build_s1s2", "build_pencil", "build_appendix"):
        from . import catalog

        return getattr(catalog, name)
    raise AttributeError(name)
