"""
dilution - Entanglement Dilution Simulator
==========================================

Simulación exacta (promediada sobre resultados) del protocolo de dilución,
fidelidad cerrada, curvas de alcanzabilidad i.i.d. y la cota de converse
débil.

Public API:
- scissors_channel (orthogonal-flag | weyl-teleport), theta_unitary
- simulate_dilution → DilutionReport, dilution_fidelity_formula
- rank_for_rate, achievability_curve_iid → AchievabilityPoint
- converse_bound, converse_curve, best_converse_bound
- coding_mass_comparison
"""
from .bounds import (
    CodingMassRecord,
    best_converse_bound,
    coding_mass_comparison,
    converse_bound,
    converse_curve,
)
from .protocol import (
    AchievabilityPoint,
    DilutionReport,
    TruncationProjector,
    achievability_curve_iid,
    dilution_fidelity_formula,
    rank_for_rate,
    simulate_dilution,
    theta_unitary,
    truncation_projectors,
)
from .teleport import SCISSORS_VARIANTS, ScissorsVariant, member_theta, scissors_channel, weyl_operator

__all__ = [
    # Teleportation
    "ScissorsVariant",
    "SCISSORS_VARIANTS",
    "member_theta",
    "weyl_operator",
    "scissors_channel",
    # Protocol
    "TruncationProjector",
    "truncation_projectors",
    "theta_unitary",
    "DilutionReport",
    "simulate_dilution",
    "dilution_fidelity_formula",
    "rank_for_rate",
    "AchievabilityPoint",
    "achievability_curve_iid",
    # Bounds
    "converse_bound",
    "converse_curve",
    "best_converse_bound",
    "CodingMassRecord",
    "coding_mass_comparison",
]
