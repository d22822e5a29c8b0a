"""Neutral-atom topology selection and layout compiler."""

from natopo._core import (
    Circuit,
    CircuitParseError,
    ExecutionMetrics,
    Instruction,
    RoutingError,
    bitwise_error,
    compile_circuit,
    compute_features,
    generate_random_circuit,
    ideal_distribution,
    interaction_weights,
    logical_depth,
    noisy_sample,
    pagerank,
    parse_json,
    parse_qasm,
    select_topology,
)
from natopo._core import __version__

__all__ = [
    "Circuit",
    "CircuitParseError",
    "ExecutionMetrics",
    "Instruction",
    "RoutingError",
    "bitwise_error",
    "compile_circuit",
    "compute_features",
    "generate_random_circuit",
    "ideal_distribution",
    "interaction_weights",
    "logical_depth",
    "noisy_sample",
    "pagerank",
    "parse_json",
    "parse_qasm",
    "select_topology",
    "__version__",
]
