"""Spiked tensor PCA: NSGA with matrix overparameterization plus baselines.

The heavy lifting lives in the C++ extension; this package re-exports it.
"""

from ._core import (  # noqa: F401
    DenseTensor,
    alignment,
    contract_matrix_power,
    default_eta0_even,
    effective_snr,
    flat_index,
    gradient_check_suite,
    load_tensor,
    mode1_contract,
    multi_index_from_flat,
    noise_moment_check,
    nsga_step,
    partial_trace_vector,
    rank_one_tensor,
    recovery_error,
    reward_gradient,
    run_method,
    sample_observation,
    save_tensor,
    step_schedule,
    subgaussian_tail_check,
    sym_top_eigenvector,
    tensor_inner,
)

__all__ = [
    "DenseTensor",
    "alignment",
    "contract_matrix_power",
    "default_eta0_even",
    "effective_snr",
    "flat_index",
    "gradient_check_suite",
    "load_tensor",
    "mode1_contract",
    "multi_index_from_flat",
    "noise_moment_check",
    "nsga_step",
    "partial_trace_vector",
    "rank_one_tensor",
    "recovery_error",
    "reward_gradient",
    "run_method",
    "sample_observation",
    "save_tensor",
    "step_schedule",
    "subgaussian_tail_check",
    "sym_top_eigenvector",
    "tensor_inner",
]
