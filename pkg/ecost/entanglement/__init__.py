"""
entanglement - Decompositions, E_F and the Cost Proxy
=====================================================

Ensembles de estados puros que mezclan a ρ, sus cq-extensions, el oráculo
de Wootters para dos qubits y el minimizador general por rotaciones de
Givens sobre unitarios de referencia.

Public API:
- Ensemble, CqExtension, ensemble_from_isometry, isometry_from_ensemble
- concurrence_two_qubit, eof_two_qubit
- eof_minimize, eof_regularized_estimate, cost_proxy_minimize
- GivensSearch + objetivos (MeanEntropyObjective, SpectralMidpointObjective)
"""
from .ensembles import (
    CqExtension,
    Ensemble,
    decomposition_rows,
    eigen_ensemble,
    ensemble_from_isometry,
    ensemble_from_rows,
    isometry_from_ensemble,
)
from .formation import (
    REGULARIZED_DIMENSION_CAP,
    EntanglementReport,
    RegularizedPoint,
    conditional_entropy_cq,
    cost_proxy_minimize,
    eof_minimize,
    eof_objective,
    eof_regularized_estimate,
)
from .objectives import DecompositionObjective, MeanEntropyObjective, SpectralMidpointObjective
from .search import GivensSearch, SearchOutcome, SearchSettings
from .wootters import concurrence_two_qubit, eof_from_concurrence, eof_two_qubit

__all__ = [
    # Ensembles
    "Ensemble",
    "CqExtension",
    "decomposition_rows",
    "ensemble_from_rows",
    "ensemble_from_isometry",
    "isometry_from_ensemble",
    "eigen_ensemble",
    # Two-qubit oracle
    "concurrence_two_qubit",
    "eof_from_concurrence",
    "eof_two_qubit",
    # Search
    "DecompositionObjective",
    "MeanEntropyObjective",
    "SpectralMidpointObjective",
    "GivensSearch",
    "SearchSettings",
    "SearchOutcome",
    # Formation
    "EntanglementReport",
    "RegularizedPoint",
    "REGULARIZED_DIMENSION_CAP",
    "eof_objective",
    "conditional_entropy_cq",
    "eof_minimize",
    "eof_regularized_estimate",
    "cost_proxy_minimize",
]
