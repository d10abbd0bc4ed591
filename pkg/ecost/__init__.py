"""
ecost - Information-Spectrum Entanglement Cost Toolkit
======================================================

Herramientas numéricas para la caracterización por espectro de información
del costo de entrelazamiento: proyecciones espectrales, tasas de nivel n,
E_F y su regularización, y simulación exacta de la dilución.

Public API:
- qcore: DensityMatrix, PureState, SchmidtForm, medidas, formato JSON
- spectra: gamma_sweep, rate_estimate, suites de las desigualdades
- entanglement: eof_minimize, eof_regularized_estimate, cost_proxy_minimize
- dilution: simulate_dilution, achievability_curve_iid, converse_bound

Usage:
    # CLI
    ecost eof --input ecost/fixtures/bell.json --bits

    # Programático
    from ecost import DensityMatrix, eof_minimize
    report = eof_minimize(rho, restarts=20, seed=0)
"""

__version__ = "0.1.0"

from .errors import (
    DimensionCapError,
    DimensionMismatchError,
    EcostError,
    InvariantViolationError,
    StateParseError,
)
from .qcore import BipartiteSplit, DensityMatrix, PureState, SchmidtForm, fidelity, load_density
from .spectra import gamma_sweep, rate_estimate
from .entanglement import Ensemble, eof_minimize, eof_regularized_estimate, cost_proxy_minimize
from .dilution import achievability_curve_iid, converse_bound, simulate_dilution

__all__ = [
    "__version__",
    # Errors
    "EcostError",
    "DimensionMismatchError",
    "InvariantViolationError",
    "DimensionCapError",
    "StateParseError",
    # States
    "BipartiteSplit",
    "DensityMatrix",
    "PureState",
    "SchmidtForm",
    "fidelity",
    "load_density",
    # Spectra
    "gamma_sweep",
    "rate_estimate",
    # Entanglement
    "Ensemble",
    "eof_minimize",
    "eof_regularized_estimate",
    "cost_proxy_minimize",
    # Dilution
    "simulate_dilution",
    "achievability_curve_iid",
    "converse_bound",
]
