"""
qcore - Quantum State Primitives
================================

Álgebra lineal compleja densa y primitivas de estados cuánticos sobre las que
se construyen spectra, entanglement y dilution.

Public API:
- BipartiteSplit, DensityMatrix, PureState, SchmidtForm
- tensor_product, partial_trace, hermitian_eig, schmidt_decompose
- maximally_entangled, purify
- fidelity, von_neumann_entropy, relative_entropy, trace_distance
- StateDocument + load/save helpers (formato JSON de estados)
"""
from .linalg import (
    ComplexMatrix,
    EXPLICIT_DIMENSION_CAP,
    hermitian_eig,
    hermitian_eigvals,
    random_density_matrix,
    random_hermitian,
    random_pure_vector,
    random_unitary,
    tensor_product,
)
from .measures import (
    binary_entropy,
    fidelity,
    nats_to_bits,
    relative_entropy,
    shannon_entropy,
    trace_distance,
    von_neumann_entropy,
)
from .serialization import (
    StateDocument,
    document_from_members,
    document_from_state,
    dump_document,
    load_density,
    load_document,
    parse_document,
    save_document,
)
from .states import (
    BipartiteSplit,
    DensityMatrix,
    PureState,
    SchmidtForm,
    maximally_entangled,
    partial_trace,
    purify,
    schmidt_decompose,
)

__all__ = [
    # Types
    "ComplexMatrix",
    "BipartiteSplit",
    "DensityMatrix",
    "PureState",
    "SchmidtForm",
    # Linear algebra
    "EXPLICIT_DIMENSION_CAP",
    "tensor_product",
    "hermitian_eig",
    "hermitian_eigvals",
    "partial_trace",
    "schmidt_decompose",
    "maximally_entangled",
    "purify",
    # Measures
    "fidelity",
    "von_neumann_entropy",
    "relative_entropy",
    "trace_distance",
    "shannon_entropy",
    "binary_entropy",
    "nats_to_bits",
    # Random
    "random_unitary",
    "random_hermitian",
    "random_density_matrix",
    "random_pure_vector",
    # Serialization
    "StateDocument",
    "document_from_state",
    "document_from_members",
    "parse_document",
    "dump_document",
    "load_document",
    "save_document",
    "load_density",
]
