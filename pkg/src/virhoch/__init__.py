"""Exact cohomology of the degree-3 associative envelope of the Virasoro
conformal algebra: rewriting system, resolution, and dimension tables."""

__version__ = "0.1.0"

from .algebra import (
    AlgElem,
    check_overlap,
    nf_word,
    normal_form,
    verify_defining_relations,
)
from .anick import (
    Chain,
    chain_from_text,
    chain_to_text,
    compose_delta,
    delta_closed,
    delta_generic,
    enumerate_chains,
    grade,
    is_chain,
)
from .cochain import (
    ScalarCochain,
    closed_reduced_row,
    reduced_differential,
    reduced_differential_closed,
    reduced_row,
)
from .cohom import (
    DimTable,
    cohomology_dims,
    locate_classes,
    truncated_cohomology,
    verify_contraction,
)
from .confmod import ModElem, act_gen, act_word
from .scalars import ParamPoly, format_rational, parse_rational

__all__ = [
    "__version__",
    "AlgElem",
    "Chain",
    "DimTable",
    "ModElem",
    "ParamPoly",
    "ScalarCochain",
    "act_gen",
    "act_word",
    "chain_from_text",
    "chain_to_text",
    "check_overlap",
    "closed_reduced_row",
    "cohomology_dims",
    "compose_delta",
    "delta_closed",
    "delta_generic",
    "enumerate_chains",
    "format_rational",
    "grade",
    "is_chain",
    "locate_classes",
    "nf_word",
    "normal_form",
    "parse_rational",
    "reduced_differential",
    "reduced_differential_closed",
    "reduced_row",
    "truncated_cohomology",
    "verify_contraction",
    "verify_defining_relations",
]
