"""Initialized aCM line bundles on smooth quintic surfaces.

A numerical classifier for initialized aCM line bundles ``O_X(D)`` on a
smooth quintic surface, checked against a brute-force cohomology oracle on
the Fermat quintic and its 75 lines.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .classifier import ABSENT, ClassifierInput, Verdict, classify, necessary_ranges
from .cohomology import InconsistencyError, Oracle, OracleBundle, OracleConfig
from .fermat import Configuration, Line, enumerate_lines, generic_hyperplane, incidence
from .lattice import DivisorClass, chi, intersect, k_invariant, pa, window_bound

__all__ = [
    "__version__",
    "ABSENT",
    "ClassifierInput",
    "Verdict",
    "classify",
    "necessary_ranges",
    "InconsistencyError",
    "Oracle",
    "OracleBundle",
    "OracleConfig",
    "Configuration",
    "Line",
    "enumerate_lines",
    "generic_hyperplane",
    "incidence",
    "DivisorClass",
    "chi",
    "intersect",
    "k_invariant",
    "pa",
    "window_bound",
]
