"""Computations with powerfully nilpotent finite p-groups.

Power-commutator presentations with a collector (Cython with a pure-Python
fallback), characteristic subgroups and powerful properties, rank-2
classification and counting, the ancestry tree and the catalog of groups of
order up to ``p^6``.
"""

from .catalog import CatalogEntry, build_E, build_family_A, build_family_B, catalog_for_order, fingerprint
from .group import PcGroup, Subgroup, consistency_check, group_of, quotient
from .isomorphism import BudgetExceeded, iso_search, verify_distinct, verify_lambda_square
from .presentation import PcPresentation, PresentationError
from .rank2 import Rank2Params, build_group, count_brute, count_closed, enumerate_rank2, structure_invariants

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "CatalogEntry",
    "PcGroup",
    "PcPresentation",
    "PresentationError",
    "Rank2Params",
    "Subgroup",
    "build_E",
    "build_family_A",
    "build_family_B",
    "build_group",
    "catalog_for_order",
    "consistency_check",
    "count_brute",
    "count_closed",
    "enumerate_rank2",
    "fingerprint",
    "group_of",
    "iso_search",
    "quotient",
    "structure_invariants",
    "verify_distinct",
    "verify_lambda_square",
]
