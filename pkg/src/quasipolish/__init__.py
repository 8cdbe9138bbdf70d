"""Countable quasi-Polish spaces: presented spaces, separation axioms, Borel
expressions, the locally closed derivative and extraction of the canonical
non-quasi-Polish subspaces."""
from .derivative import OrdinalValue, delta3_condition, delta3_witness, rank
from .extractors import (
    CheckFailed,
    ExtractionReport,
    InconclusiveError,
    PreconditionError,
    classify_countable,
    extract_S0,
    extract_S1,
    extract_S2,
)
from .generators import generator, omega_lt, plus_generic, s0, s1, s2, sd, union_omega_lt
from .space import FiniteSpace, PointSet, PresentedSpace, make_finite_from_subbasis
from .spacefile import load_space, parse_space

__version__ = "0.1.0"
