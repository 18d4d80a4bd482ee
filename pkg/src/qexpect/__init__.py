"""Statevector estimation of Pauli-sum expectation values.

The package simulates the three measurement pipelines for <psi|O|psi>
where O is a real Pauli sum: per-term Hadamard tests, and a block-encoded
application of O combined with a (destructive) SWAP test against a fresh
copy of psi.  A small VQE, Gray-code / one-hot operator encodings, an
experiment runner with median/MAD statistics, a CLI, and an HTTP service
sit on top.
"""

__version__ = "0.1.0"

from .encode import (
    OneBodyMatrix,
    gray_decode_matrix,
    gray_encode,
    gray_state_vector,
    jw_encode,
    load_matrix,
    one_hot_restrict,
    one_hot_state_vector,
)
from .experiments import (
    EstimateReport,
    ExperimentSpec,
    VqeSource,
    emit_report,
    load_config,
    load_report,
    resolve_operator,
    run_experiment,
    shot_budget_hint,
    summarize,
)
from .lcu import (
    LcuBlock,
    PostSelectionError,
    ancilla_count,
    apply_w,
    build_block,
    post_select,
    synthesize_vp,
    w_circuit,
)
from .overlap import (
    LcuEstimate,
    OverlapEstimate,
    destructive_swap_test,
    estimate_htest,
    estimate_lcu,
    hadamard_test,
    swap_test,
)
from .pauli import (
    LcuForm,
    ParseError,
    PauliSum,
    PauliTerm,
    expectation_exact,
    format_pauli_sum,
    lcu_normal_form,
    load_operator,
    parse_pauli_sum,
    to_matrix,
)
from .simulator import (
    Circuit,
    Gate,
    ResourceLimitError,
    StateVector,
    inner_product,
    marginal_probability,
    new_state,
    probabilities,
    run_circuit,
    run_on_zero,
    sample,
    state_from_amplitudes,
    states_equal,
)
from .stateprep import prepare_one_hot, prepare_real_amplitudes
from .vqe import Ansatz, OptimizerConfig, VqeResult, energy, minimize, prepare_ansatz

__all__ = [
    "__version__",
    "Ansatz",
    "Circuit",
    "EstimateReport",
    "ExperimentSpec",
    "Gate",
    "LcuBlock",
    "LcuEstimate",
    "LcuForm",
    "OneBodyMatrix",
    "OptimizerConfig",
    "OverlapEstimate",
    "ParseError",
    "PauliSum",
    "PauliTerm",
    "PostSelectionError",
    "ResourceLimitError",
    "StateVector",
    "VqeResult",
    "VqeSource",
    "ancilla_count",
    "apply_w",
    "build_block",
    "destructive_swap_test",
    "emit_report",
    "energy",
    "estimate_htest",
    "estimate_lcu",
    "expectation_exact",
    "format_pauli_sum",
    "gray_decode_matrix",
    "gray_encode",
    "gray_state_vector",
    "hadamard_test",
    "inner_product",
    "jw_encode",
    "lcu_normal_form",
    "load_config",
    "load_matrix",
    "load_operator",
    "load_report",
    "marginal_probability",
    "minimize",
    "new_state",
    "one_hot_restrict",
    "one_hot_state_vector",
    "parse_pauli_sum",
    "post_select",
    "prepare_ansatz",
    "prepare_one_hot",
    "prepare_real_amplitudes",
    "probabilities",
    "resolve_operator",
    "run_circuit",
    "run_experiment",
    "run_on_zero",
    "sample",
    "shot_budget_hint",
    "state_from_amplitudes",
    "states_equal",
    "summarize",
    "swap_test",
    "synthesize_vp",
    "to_matrix",
    "w_circuit",
]
