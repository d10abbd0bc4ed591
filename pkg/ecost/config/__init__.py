"""
Configuration Module
====================

Configuración de experimentos con validación Pydantic.

Usage:
    from ecost.config import ExperimentConfig
    config = ExperimentConfig.from_yaml("experiments/stein.yaml")
"""
from .schemas import (
    CommandName,
    DilutionSettings,
    ExperimentConfig,
    FixtureSettings,
    GammaGridSettings,
    LoggingSettings,
    OptimizerSettings,
    SpectralSettings,
    merge_overrides,
)

__all__ = [
    'CommandName',
    'ExperimentConfig',
    'GammaGridSettings',
    'SpectralSettings',
    'OptimizerSettings',
    'DilutionSettings',
    'FixtureSettings',
    'LoggingSettings',
    'merge_overrides',
]
