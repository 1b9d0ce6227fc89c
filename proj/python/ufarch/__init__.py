"""Union-Find surface-code decoder architecture models."""

from ._ufarch import (
    CompressedFrame,
    ContractViolation,
    InvariantViolation,
    MalformedFrame,
    ParameterError,
    __version__,
    assess,
    block_exec,
    compression_sweep,
    decode,
    decode_frame,
    encode,
    lattice_info,
    logical_error_rate,
    memory_table,
    mwpm_comparison,
    predicted_logical_rate,
    resource_savings,
    sample_error,
    size_stack,
    syndrome,
)

__all__ = [
    "CompressedFrame",
    "ContractViolation",
    "InvariantViolation",
    "MalformedFrame",
    "ParameterError",
    "__version__",
    "assess",
    "block_exec",
    "compression_sweep",
    "decode",
    "decode_frame",
    "encode",
    "lattice_info",
    "logical_error_rate",
    "memory_table",
    "mwpm_comparison",
    "predicted_logical_rate",
    "resource_savings",
    "sample_error",
    "size_stack",
    "syndrome",
]
