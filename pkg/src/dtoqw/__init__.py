"""Discrete-time open quantum walks on finite graphs with non-Markovian noise coins."""

from .channels import (
    ADC,
    NMD,
    CoinSet,
    Depol,
    build_coins,
    build_coins_adc,
    build_coins_depol,
    build_coins_nmd,
    depol_coefficients,
    kappa_nmd,
    lambda_adc,
    verify_completeness,
)
from .graph import (
    DirectedWalkGraph,
    Graph,
    complete,
    complete_bipartite,
    cycle,
    from_edge_list,
    path,
    star,
    to_walk_graph,
)
from .metrics import MetricSeries, coherence_l1, compute_series, fidelity_to_initial, probabilities
from .walk import RunConfig, WalkerState, initial_state, run, step

__version__ = "0.1.0"
