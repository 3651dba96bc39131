"""Sparse hashmap quantum circuit simulator with dense reference engines."""

from .bitwise import BitwiseEngine, apply_qft
from .circuit import (
    Circuit,
    Instruction,
    ParseError,
    emit_builtin,
    execute,
    format_circuit,
    make_engine,
    parse,
    run,
)
from .dense import (
    DenseEngine,
    DensityEngine,
    KrausChannel,
    amp_damping,
    apply_channel,
    dpl_channel,
    flip_channel,
    kraus_amp_damping,
    kraus_depolarizing,
    kraus_flip,
)
from .gates import SparseGate, from_matrix, from_permutation, from_sparse, standard
from .state import (
    CapacityError,
    DenseState,
    DensityMatrix,
    MeasurementRecord,
    NormalizationError,
    SparseState,
    assert_normalized,
    dense_to_sparse,
    dump_lines,
    fidelity_check,
    init_dense,
    init_density,
    init_sparse,
    prune,
    sparse_to_dense,
)

__version__ = "0.1.0"

__all__ = [
    "BitwiseEngine",
    "CapacityError",
    "Circuit",
    "DenseEngine",
    "DenseState",
    "DensityEngine",
    "DensityMatrix",
    "Instruction",
    "KrausChannel",
    "MeasurementRecord",
    "NormalizationError",
    "ParseError",
    "SparseGate",
    "SparseState",
    "amp_damping",
    "apply_channel",
    "apply_qft",
    "assert_normalized",
    "dense_to_sparse",
    "dpl_channel",
    "dump_lines",
    "emit_builtin",
    "execute",
    "fidelity_check",
    "flip_channel",
    "format_circuit",
    "from_matrix",
    "from_permutation",
    "from_sparse",
    "init_dense",
    "init_density",
    "init_sparse",
    "kraus_amp_damping",
    "kraus_depolarizing",
    "kraus_flip",
    "make_engine",
    "parse",
    "prune",
    "run",
    "sparse_to_dense",
    "standard",
]
