"""Exact q-series and eta-quotient toolkit for cubic-partition identities and congruences."""

from .congruence import (
    CongruenceFamily,
    cubic_family,
    cubic_partition_series,
    modular_inverse,
    partition_series,
    replay_section_3,
    verify_congruence_family,
    verify_theorem_1_1,
    verify_theorem_1_2,
    verify_watson,
    watson_family,
)
from .eta import (
    CertResult,
    Cusp,
    CuspOrderTable,
    EtaQuotient,
    certify_modular,
    cusp_set,
    leading_exponent,
    lift_level,
    ligozat_order,
    order_table,
    q_expansion,
    u3_order_bounds,
)
from .haupt import (
    HauptPolynomial,
    SigmaTriple,
    ValuationTable,
    coefficient_valuations,
    decompose_in_hauptmodul,
    evaluate_poly,
    newton_recurrence_check,
    rigorous_pole_bound,
    sigma_from_power_sums,
    verify_identity_rigorous,
)
from .report import VerificationReport
from .series import (
    SeriesValuation,
    TruncatedSeries,
    dilate,
    eta_product_series,
    reduce_mod,
    ring_add,
    ring_invert,
    ring_mul,
    series_valuation,
    u_p,
)

__version__ = "0.1.0"

__all__ = [
    "CertResult",
    "CongruenceFamily",
    "Cusp",
    "CuspOrderTable",
    "EtaQuotient",
    "HauptPolynomial",
    "SeriesValuation",
    "SigmaTriple",
    "TruncatedSeries",
    "ValuationTable",
    "VerificationReport",
    "certify_modular",
    "coefficient_valuations",
    "cubic_family",
    "cubic_partition_series",
    "cusp_set",
    "decompose_in_hauptmodul",
    "dilate",
    "eta_product_series",
    "evaluate_poly",
    "leading_exponent",
    "lift_level",
    "ligozat_order",
    "modular_inverse",
    "newton_recurrence_check",
    "order_table",
    "partition_series",
    "q_expansion",
    "reduce_mod",
    "replay_section_3",
    "rigorous_pole_bound",
    "ring_add",
    "ring_invert",
    "ring_mul",
    "series_valuation",
    "sigma_from_power_sums",
    "u3_order_bounds",
    "u_p",
    "verify_congruence_family",
    "verify_identity_rigorous",
    "verify_theorem_1_1",
    "verify_theorem_1_2",
    "verify_watson",
    "watson_family",
]
