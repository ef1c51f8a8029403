"""Randomized approximation of the Tutte polynomial and random-cluster partition functions."""
from .graph import (
    ComponentSummary,
    Graph,
    classify_density,
    complete_graph,
    components,
    contract,
    min_degree,
    parse_graph,
    perfect_matching,
    read_graph,
    write_graph,
)
from .exact import (
    EvalPoint,
    RCConfig,
    chromatic_eval,
    lambda_exact,
    mu_exact,
    tutte_delcon,
    tutte_statesum,
    z_exact,
)
from .sampler import (
    EstimatorRun,
    SamplerConfig,
    SamplerDomainError,
    estimate_lambda,
    estimate_q_kappa_mean,
    estimate_tutte,
    estimate_z,
    sample_gp,
)
from .generators import FamilySpec, PLGSpec, gen_family, gen_plg, molloy_reed_q, plg_asymptotics
from .diagnostics import build_gstar, matching_model_z, second_moment, superdense_convergence

__version__ = "0.1.0"
