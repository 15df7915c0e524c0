"""Attractor search for synchronous Boolean networks by simulated quantum basin suppression."""

from .bnet import NetworkSpec, parse_network, parse_rule, tokenize, parse_expr
from .dynamics import (
    AttractorInfo,
    TransitionTable,
    basin_of,
    build_transition_table,
    eval_expr,
    find_attractors,
    transient_horizon,
    unfold_cycle,
)
from .circuit import Circuit, conditional_phase_shifter, inverse, multi_phase_on_set
from .synthesis import pprm_expansion, synthesize_evolution, synthesize_update
from .simulator import MeasurementHistogram, NoiseConfig, StateVector, run, run_noisy, sample
from .search import (
    SearchConfig,
    SearchReport,
    SuppressionPlan,
    apply_effective_suppression,
    build_suppression_circuit,
    plan_suppression,
    quantum_count,
    run_search,
)

__version__ = "0.1.0"
