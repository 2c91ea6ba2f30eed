"""Weighted log interaction analysis of elementary and aggregate compositional data
with taxicab singular value decomposition and QSR diagnostics."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .tables import (
    AggregateTable,
    ElementaryTable,
    IndicatorMatrix,
    WeightVector,
    aggregate,
    indicator_from_categorical,
    load_aggregate,
    load_elementary,
    load_indicator,
    marginals,
    weight_scheme,
)
from .interaction import (
    InteractionMatrix,
    aggregate_of_log_interactions,
    approx_aggregate_of_log_interactions,
    approx_log_interaction,
    approximation_gap,
    log_interaction,
)
from .tsvd import TaxicabAxis, TaxicabDecomposition, decompose, maximize_l1, orient_axis
from .factorization import WeightedFactorization, factorize, principal_map
from .qsr import QsrAxis, qsr, qsr_report, qsr_table
from .synth import generate_synthetic
