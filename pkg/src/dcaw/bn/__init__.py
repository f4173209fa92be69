"""Discrete Bayesian networks: representation, validation, exact inference."""

from dcaw.bn.network import (
    BINARY_STATES,
    Cpt,
    Finding,
    Network,
    NoisyOrCpd,
    ValidationReport,
    Variable,
    expand_noisy_or,
    network_from_document,
    network_to_document,
    validate_network,
)
from dcaw.bn.inference import (
    joint_posterior,
    log_likelihood,
    min_degree_order,
    posterior,
)
from dcaw.bn.oracle import enumerate_posterior

__all__ = [
    "BINARY_STATES",
    "Cpt",
    "Finding",
    "Network",
    "NoisyOrCpd",
    "ValidationReport",
    "Variable",
    "enumerate_posterior",
    "expand_noisy_or",
    "joint_posterior",
    "log_likelihood",
    "min_degree_order",
    "network_from_document",
    "network_to_document",
    "posterior",
    "validate_network",
]
