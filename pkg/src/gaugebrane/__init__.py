"""Exact computations for complexes of line bundles on P^n: hypercohomology,
Ext groups, Atiyah obstructions and holomorphic gauge fields."""

__version__ = "0.1.0"

from .cech import bott_dim, hypercohomology, line_bundle_cohomology, truncation_bound
from .complexes import (
    BraneComplex,
    ChainMap,
    cone,
    direct_sum,
    exceptional_generators,
    hom_complex,
    line_bundle,
    omega_replacement,
    random_brane,
    shift,
    twist,
    validate,
)
from .derived import ext_dim, gauge_hom_audit, hom_derived, naive_hom
from .gauge import atiyah_cocycle, canonical_gauge_field, classify_brane, first_chern, gauge_exists

__all__ = [
    "BraneComplex",
    "ChainMap",
    "atiyah_cocycle",
    "bott_dim",
    "canonical_gauge_field",
    "classify_brane",
    "cone",
    "direct_sum",
    "exceptional_generators",
    "ext_dim",
    "first_chern",
    "gauge_exists",
    "gauge_hom_audit",
    "hom_complex",
    "hom_derived",
    "hypercohomology",
    "line_bundle",
    "line_bundle_cohomology",
    "naive_hom",
    "omega_replacement",
    "random_brane",
    "shift",
    "truncation_bound",
    "twist",
    "validate",
]
