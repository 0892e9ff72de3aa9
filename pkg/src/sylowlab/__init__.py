"""Explicit SL_n(q) / PSL_n(q) toolkit.

Builds the classical groups as packed matrix sets over small finite fields,
decomposes elements against the standard Borel subgroup, multiplies subsets
exactly, and runs seeded frequency experiments on products of conjugate
unipotent Sylow subgroups.
"""

from .bruhat import BruhatForm, cell_census, cell_of, decompose, in_big_cell
from .experiments import (
    DEFAULT_GATES,
    ExperimentReport,
    Gates,
    TrialRng,
    bnp_criterion,
    bnp_exponent_check,
    coverage_prob,
    derive_seed,
    opposite_pair_prob,
    parse_gates,
    triple_product_size,
    triple_product_stats,
    verify_toffoli,
    verify_uuuv,
)
from .gf import FieldSpec, field_from_order
from .lietype import (
    LieParams,
    OrderBreakdown,
    all_families,
    asym_check,
    big_cell_fraction,
    e_lower_bound,
    order_exact,
    params_for,
)
from .matgroup import (
    EnumerationCapError,
    GroupSpec,
    Mat,
    SubgroupId,
    enumerate_group,
    enumerate_subgroup,
    group_spec,
    random_element,
)
from .setprod import (
    ElemSet,
    WorkCapError,
    growth_verify,
    inverse_set,
    iterated_product,
    product,
    ruzsa_verify,
    times_element,
)
from .suite import SuiteResult, suite_run

__version__ = "0.1.0"

__all__ = [
    "BruhatForm",
    "DEFAULT_GATES",
    "ElemSet",
    "EnumerationCapError",
    "ExperimentReport",
    "FieldSpec",
    "Gates",
    "GroupSpec",
    "LieParams",
    "Mat",
    "OrderBreakdown",
    "SubgroupId",
    "SuiteResult",
    "TrialRng",
    "WorkCapError",
    "all_families",
    "asym_check",
    "big_cell_fraction",
    "bnp_criterion",
    "bnp_exponent_check",
    "cell_census",
    "cell_of",
    "coverage_prob",
    "decompose",
    "derive_seed",
    "e_lower_bound",
    "enumerate_group",
    "enumerate_subgroup",
    "field_from_order",
    "group_spec",
    "growth_verify",
    "in_big_cell",
    "inverse_set",
    "iterated_product",
    "opposite_pair_prob",
    "order_exact",
    "params_for",
    "parse_gates",
    "product",
    "random_element",
    "ruzsa_verify",
    "suite_run",
    "times_element",
    "triple_product_size",
    "triple_product_stats",
    "verify_toffoli",
    "verify_uuuv",
]
