"""Probabilistic attraction-repulsion opinion dynamics on multilayer networks.

Agents hold vector opinions on every layer of a time-varying multilayer
network.  Each step a random matching pairs agents up; matched pairs that
share at least one layer attract with probability theta and repel
otherwise, then average their moved values across the layers carrying
the pair.  The package provides the update itself, graph and matching
samplers, dispersion diagnostics with pathwise drop guarantees, and a
seeded scenario runner with CSV output.
"""

from .diagnostics import (
    AttractionEstimate,
    DispersionReport,
    component_epsilon_trivial,
    consensus_error,
    dispersion_report,
    drop_bound,
    global_average,
    lyapunov_w,
    max_pairwise_distance,
    net_attraction,
)
from .dynamics import (
    ClassLaws,
    ConfigError,
    MuLaw,
    OpinionState,
    RateDraw,
    RatePolicy,
    StepTrace,
    ThetaLaw,
    draw_rate,
    step,
    update_pair,
)
from .graphs import (
    Edge,
    LayerGraph,
    MultilayerTopology,
    connected_components,
    generate_er_with_chain,
    is_connected,
    spanning_forest,
)
from .matching import (
    ActivePair,
    ActiveSet,
    Matching,
    derive_active_set,
    is_connected_collection,
    sample_matching_with_chain_edge,
    sample_uniform_matching,
)
from .runner import (
    ConservationError,
    PreflightReport,
    RunSummary,
    initial_state,
    preflight,
    run,
)
from .scenario import ScenarioConfig, builtin_names, builtin_raw, load_scenario, parse_scenario
from .streams import RunStreams

__version__ = "0.1.0"
