"""
Pydantic Configuration Schemas
================================

Type-safe configuration de experimentos usando Pydantic v2.

Benefits:
- Validación en load time (parámetros no finitos, n < 1, epsilon fuera de rango)
- Un solo objeto para YAML y flags del CLI
- Mejores mensajes de error (se emiten como registro "invalid_config")

Usage:
    config = ExperimentConfig.from_yaml("experiments/stein.yaml")
    config.gamma.grid()  # np.ndarray validado
"""
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..spectra.sweep import make_gamma_grid

CommandName = Literal[
    "lemma-check",
    "spectral-rate",
    "eof",
    "eof-reg",
    "dilution-sim",
    "dilution-curve",
    "converse",
    "cost-proxy",
    "fixture",
]

# Comandos que no leen un estado de entrada
INPUTLESS_COMMANDS = ("lemma-check", "fixture")


class _FiniteModel(BaseModel):
    """Base: sin campos extra, sin inf/nan."""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)


# ============================================================================
# Spectral Configuration
# ============================================================================

class GammaGridSettings(_FiniteModel):
    """Grilla γ (nats por copia)"""
    gamma_min: float = Field(
        default=-2.0,
        description="Lower end of the gamma grid"
    )
    gamma_max: float = Field(
        default=2.0,
        description="Upper end of the gamma grid"
    )
    gamma_step: float = Field(
        default=0.01,
        gt=0.0,
        description="Grid spacing"
    )

    @model_validator(mode='after')
    def validate_range(self) -> "GammaGridSettings":
        """gamma_min must be < gamma_max"""
        if self.gamma_min >= self.gamma_max:
            raise ValueError(
                f"gamma_min ({self.gamma_min}) must be < gamma_max ({self.gamma_max})"
            )
        return self

    def grid(self) -> np.ndarray:
        return make_gamma_grid(self.gamma_min, self.gamma_max, self.gamma_step)


class SpectralSettings(_FiniteModel):
    """spectral-rate: modo y referencia"""
    mode: Literal['divergence', 'conditional-entropy'] = Field(
        default='divergence',
        description="Sweep axis convention"
    )
    reference_path: Optional[str] = Field(
        default=None,
        description="JSON state file for the reference omega (None = identity)"
    )
    condition_on_b: bool = Field(
        default=False,
        description="Use I_A ⊗ rho_B as reference (conditional rates of A given B)"
    )

    @model_validator(mode='after')
    def validate_reference_choice(self) -> "SpectralSettings":
        if self.reference_path is not None and self.condition_on_b:
            raise ValueError("reference_path and condition_on_b are mutually exclusive")
        return self


# ============================================================================
# Optimizer Configuration
# ============================================================================

class OptimizerSettings(_FiniteModel):
    """Búsqueda sobre descomposiciones"""
    restarts: int = Field(
        default=20,
        ge=0,
        description="Haar-random restarts besides the spectral baseline"
    )
    members: Optional[int] = Field(
        default=None,
        ge=1,
        description="Decomposition size K (None = rank²)"
    )
    max_sweeps: int = Field(
        default=500,
        ge=1,
        description="Sweep budget per restart"
    )
    tolerance: float = Field(
        default=1e-9,
        gt=0.0,
        description="Stop when a sweep improves less than this"
    )
    workers: Optional[int] = Field(
        default=None,
        ge=1,
        description="Thread count (None = min(8, cpu))"
    )


# ============================================================================
# Dilution Configuration
# ============================================================================

class DilutionSettings(_FiniteModel):
    """dilution-sim"""
    variant: Literal['orthogonal-flag', 'weyl-teleport', 'both'] = Field(
        default='both',
        description="Scissors variant(s) to simulate"
    )
    ranks: Optional[List[int]] = Field(
        default=None,
        description="Resource ranks M (None = every feasible M)"
    )

    @field_validator('ranks')
    @classmethod
    def validate_ranks_positive(cls, v: Optional[List[int]]) -> Optional[List[int]]:
        if v is not None:
            if not v:
                raise ValueError("ranks must not be empty")
            if any(m < 1 for m in v):
                raise ValueError(f"ranks must be ≥ 1, got {v}")
        return v

    def variants(self) -> List[str]:
        if self.variant == 'both':
            return ['orthogonal-flag', 'weyl-teleport']
        return [self.variant]


# ============================================================================
# Fixture Configuration
# ============================================================================

class FixtureSettings(_FiniteModel):
    """fixture: estados de prueba"""
    kind: Literal['bell', 'werner', 'random-mixed', 'random-pure', 'product'] = Field(
        default='bell',
        description="Fixture family"
    )
    p: float = Field(
        default=1.0,
        ge=0.0,
        le=1.0,
        description="Werner singlet weight"
    )
    dim_a: int = Field(
        default=2,
        ge=1,
        le=64,
        description="Local dimension of A"
    )
    dim_b: int = Field(
        default=2,
        ge=1,
        le=64,
        description="Local dimension of B"
    )
    rank: Optional[int] = Field(
        default=None,
        ge=1,
        description="Rank for random-mixed (None = full)"
    )

    @model_validator(mode='after')
    def validate_rank(self) -> "FixtureSettings":
        if self.rank is not None and self.rank > self.dim_a * self.dim_b:
            raise ValueError(
                f"rank ({self.rank}) must be <= dim_a*dim_b ({self.dim_a * self.dim_b})"
            )
        return self


# ============================================================================
# Logging Configuration
# ============================================================================

class LoggingSettings(_FiniteModel):
    """Logging configuration (JSON structured logging)"""
    level: Literal['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'] = Field(
        default='WARNING',
        description="Log level"
    )
    json_indent: Optional[int] = Field(
        default=None,
        ge=0,
        le=4,
        description="JSON indent for pretty-print (None=compact, 2=readable)"
    )
    file: Optional[str] = Field(
        default=None,
        description="Path to log file (None=stderr). If specified, enables file rotation."
    )
    max_bytes: int = Field(
        default=10485760,  # 10 MB
        ge=1024,
        description="Maximum bytes per log file before rotation (default 10 MB)"
    )
    backup_count: int = Field(
        default=5,
        ge=0,
        description="Number of backup log files to keep"
    )


# ============================================================================
# Root Configuration
# ============================================================================

class ExperimentConfig(_FiniteModel):
    """
    Configuración raíz de una corrida.

    Se carga de YAML (opcional) y los flags del CLI pisan sus valores.
    """
    command: CommandName = Field(description="Experiment to run")
    input_path: Optional[str] = Field(
        default=None,
        description="JSON state file (qcore format)"
    )
    output_path: Optional[str] = Field(
        default=None,
        description="CSV or JSON output (None = stdout)"
    )
    seed: int = Field(
        default=0,
        ge=0,
        description="Master seed; every stochastic component derives from it"
    )
    n_values: List[int] = Field(
        default_factory=lambda: [1, 2, 4, 8, 16, 24],
        description="Levels n"
    )
    rates: List[float] = Field(
        default_factory=list,
        description="Rates in nats (dilution-curve, converse)"
    )
    epsilon: float = Field(
        default=0.05,
        gt=0.0,
        lt=0.5,
        description="Threshold for rate estimates"
    )
    units: Literal['nats', 'bits'] = Field(
        default='nats',
        description="Units of the summary on stdout"
    )
    draws: int = Field(
        default=1000,
        ge=1,
        description="Random draws per lemma suite"
    )
    gamma: GammaGridSettings = Field(default_factory=GammaGridSettings)
    spectral: SpectralSettings = Field(default_factory=SpectralSettings)
    optimizer: OptimizerSettings = Field(default_factory=OptimizerSettings)
    dilution: DilutionSettings = Field(default_factory=DilutionSettings)
    fixture: FixtureSettings = Field(default_factory=FixtureSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)

    @field_validator('n_values')
    @classmethod
    def validate_n_values(cls, v: List[int]) -> List[int]:
        """n values must be ≥ 1 and non-empty"""
        if not v:
            raise ValueError("n_values must not be empty")
        bad = [n for n in v if n < 1]
        if bad:
            raise ValueError(f"n values must be ≥ 1, got {bad}")
        return v

    @model_validator(mode='after')
    def validate_input_required(self) -> "ExperimentConfig":
        """Every command except lemma-check and fixture reads a state"""
        if self.command not in INPUTLESS_COMMANDS and not self.input_path:
            raise ValueError(f"command '{self.command}' requires input_path")
        return self

    @classmethod
    def from_yaml(
        cls, config_path: Union[str, Path], overrides: Optional[Dict[str, Any]] = None
    ) -> "ExperimentConfig":
        """
        Load and validate configuration from YAML file.

        Args:
            config_path: Path to the YAML file
            overrides: Valores que pisan los del archivo (flags del CLI);
                las secciones anidadas se mezclan clave a clave

        Returns:
            Validated ExperimentConfig instance

        Raises:
            FileNotFoundError: If config file doesn't exist
            ValidationError: If config is invalid
        """
        import yaml

        config_file = Path(config_path)
        if not config_file.exists():
            raise FileNotFoundError(f"Config file not found: {config_path}")

        with open(config_file, 'r') as f:
            config_dict = yaml.safe_load(f) or {}
        if not isinstance(config_dict, dict):
            raise ValueError(f"Config file {config_path} must contain a mapping")

        return cls(**merge_overrides(config_dict, overrides or {}))


def merge_overrides(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """Mezcla recursiva; los valores de overrides ganan."""
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_overrides(merged[key], value)
        else:
            merged[key] = value
    return merged
