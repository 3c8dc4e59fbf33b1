"""Restricted black-box spectral attacks on graph embedding models."""

from .attack import (
    AttackConfig,
    AttackResult,
    baseline_degree,
    baseline_random,
    enumerate_candidates,
    gf_attack,
    score_flip_rw,
    score_flip_sym,
)
from .graph import (
    DegreeProfile,
    Flip,
    Graph,
    GraphError,
    apply_flip,
    degree_profile,
    largest_connected_component,
    load_edge_list,
    load_features,
    load_labels,
    normalized_adjacency,
)
from .harness import ExperimentConfig, ExperimentReport, measure_runtime, run_experiment, split_dataset
from .spectral import (
    EigenSystem,
    decompose,
    estimate_perturbed_eigenvalues,
    exact_perturbed_spectrum,
    tail_feature_energy,
)
from .victims import evaluate_accuracy, netmf_embed, netmf_matrix, sgc_embed, train_logistic

__version__ = "0.1.0"
