"""
spectra - Information-Spectrum Estimators
=========================================

Proyecciones espectrales, las dos desigualdades básicas como primitivas
ejecutables y estimadores de nivel n de tasas de divergencia espectral y de
entropía condicional espectral.

Public API:
- positive_part_projector, spectral_compare, lemma1_gap, lemma2_check, pi_trace
- iid_spectrum / TypeClassSpectrum (camino rápido para potencias tensoriales)
- fuentes: ExplicitSource, IidSource, IidCqSource, ExplicitCqSource
- gamma_sweep → GammaSweep, rate_estimate → RateEstimate
- cq_conditional_pi_trace (bloques de una cq-extension)
- run_lemma1_suite, run_lemma2_suite
"""
from .conditional import cq_conditional_curve, cq_conditional_pi_trace, cq_conditional_tail
from .projectors import (
    Lemma2Result,
    SpectralProjector,
    lemma1_gap,
    lemma2_check,
    pi_trace,
    positive_part_projector,
    positive_part_trace,
    spectral_compare,
)
from .sources import (
    ExplicitCqSource,
    ExplicitSource,
    IidCqSource,
    IidSource,
    SequenceSource,
    conditional_reference,
)
from .suites import LemmaDraw, SuiteResult, run_lemma1_suite, run_lemma2_suite
from .sweep import (
    GammaSweep,
    RateEstimate,
    SweepMode,
    default_gamma_grid,
    gamma_sweep,
    make_gamma_grid,
    rate_estimate,
)
from .type_classes import SpectralTail, TypeClassSpectrum, iid_spectrum, top_mass

__all__ = [
    # Projections
    "SpectralProjector",
    "positive_part_projector",
    "positive_part_trace",
    "spectral_compare",
    "lemma1_gap",
    "Lemma2Result",
    "lemma2_check",
    "pi_trace",
    # Type classes
    "TypeClassSpectrum",
    "SpectralTail",
    "iid_spectrum",
    "top_mass",
    # Sources
    "SequenceSource",
    "ExplicitSource",
    "IidSource",
    "IidCqSource",
    "ExplicitCqSource",
    "conditional_reference",
    # Sweeps
    "SweepMode",
    "GammaSweep",
    "RateEstimate",
    "default_gamma_grid",
    "make_gamma_grid",
    "gamma_sweep",
    "rate_estimate",
    # cq blocks
    "cq_conditional_tail",
    "cq_conditional_curve",
    "cq_conditional_pi_trace",
    # Suites
    "LemmaDraw",
    "SuiteResult",
    "run_lemma1_suite",
    "run_lemma2_suite",
]
