"""
SirsNet Models - Chaîne exacte, champ moyen, modèles linéaires et Monte Carlo
"""

from .params import EpidemicParams, Variant, node_kernel, kernel_rows, S, I, R
from .exact_chain import (
    ChainDistribution, MarginalVector, TransitionOperator, DominationReport,
    encode_state, decode_state, decode_states, all_infected_code,
    transition_row, evolve, marginals, stationary_distribution, tv_distance,
    mixing_time, verify_linear_domination,
)
from .meanfield import (
    NodeProbs, LinearModel, ThresholdReport, FixedPointResult, FixedPointOutcome,
    Damping, Regime, UniquenessReport, PropertySuiteReport,
    step_nonlinear, step_linear, iterate_nonlinear, iterate_linear, build_linear_model,
    threshold_report, mixing_time_bound, psi, psi_jacobian, endemic_fixed_point,
    iterate_fixed_point, check_uniqueness, xi_omega_property_suite,
)
from .montecarlo import (
    SimState, Trajectory, EnsembleResult, InitialCondition,
    mc_step, run, ensemble, empirical_distribution,
)

__all__ = [
    'EpidemicParams', 'Variant', 'node_kernel', 'kernel_rows', 'S', 'I', 'R',
    'ChainDistribution', 'MarginalVector', 'TransitionOperator', 'DominationReport',
    'encode_state', 'decode_state', 'decode_states', 'all_infected_code',
    'transition_row', 'evolve', 'marginals', 'stationary_distribution', 'tv_distance',
    'mixing_time', 'verify_linear_domination',
    'NodeProbs', 'LinearModel', 'ThresholdReport', 'FixedPointResult', 'FixedPointOutcome',
    'Damping', 'Regime', 'UniquenessReport', 'PropertySuiteReport',
    'step_nonlinear', 'step_linear', 'iterate_nonlinear', 'iterate_linear', 'build_linear_model',
    'threshold_report', 'mixing_time_bound', 'psi', 'psi_jacobian', 'endemic_fixed_point',
    'iterate_fixed_point', 'check_uniqueness', 'xi_omega_property_suite',
    'SimState', 'Trajectory', 'EnsembleResult', 'InitialCondition',
    'mc_step', 'run', 'ensemble', 'empirical_distribution',
]
