"""
γ-Sweeps and Finite-n Rate Estimates
====================================

gamma_sweep evalúa f_n(γ) = Tr[{Π^n(γ) ≥ 0}Π^n(γ)] para cada n sobre una
grilla γ; rate_estimate resume cada fila en (gamma_low, midpoint, gamma_high).

Ejes:
- divergence: Π = ρ_n − e^{nγ}ω_n, f no creciente en γ
- conditional-entropy: γ_S = −γ_D, f no decreciente en γ_S

Diseño:
- Las filas (un n por fila) son independientes → parallel_map
- Orden de salida determinista (orden de n_values)
- Nunca se extrapola: cada RateEstimate es un proxy de nivel n

Usage:
    source = IidSource(DensityMatrix.diagonal([0.9, 0.1]), np.eye(2) / 2)
    sweep = gamma_sweep(source, [4, 24])
    for estimate in rate_estimate(sweep, epsilon=0.05):
        print(estimate.n, estimate.midpoint)
"""
import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, Iterator, List, Literal, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from ..errors import InvariantViolationError
from ..parallel import parallel_map
from .sources import SequenceSource

logger = logging.getLogger(__name__)

SweepMode = Literal["divergence", "conditional-entropy"]
SWEEP_MODES: Tuple[str, ...] = ("divergence", "conditional-entropy")

F_RANGE_TOL = 1e-9
MONOTONE_TOL = 1e-9

DEFAULT_GAMMA_MIN = -2.0
DEFAULT_GAMMA_MAX = 2.0
DEFAULT_GAMMA_STEP = 0.01


def default_gamma_grid() -> np.ndarray:
    """[−2, 2] nats con paso 0.01 (401 puntos)."""
    count = int(round((DEFAULT_GAMMA_MAX - DEFAULT_GAMMA_MIN) / DEFAULT_GAMMA_STEP)) + 1
    return np.linspace(DEFAULT_GAMMA_MIN, DEFAULT_GAMMA_MAX, count)


def make_gamma_grid(gamma_min: float, gamma_max: float, step: float) -> np.ndarray:
    """Grilla cerrada [gamma_min, gamma_max]; el último punto es gamma_max."""
    if step <= 0.0 or gamma_max <= gamma_min:
        raise InvariantViolationError(
            "gamma grid needs gamma_min < gamma_max and step > 0",
            gamma_min=gamma_min,
            gamma_max=gamma_max,
            step=step,
        )
    count = int(np.floor((gamma_max - gamma_min) / step + 1e-9)) + 1
    grid = gamma_min + step * np.arange(count)
    if gamma_max - grid[-1] > 1e-9 * step:
        grid = np.append(grid, gamma_max)
    return grid


@dataclass(frozen=True, eq=False)
class GammaSweep:
    """
    Tabla f_n(γ): una fila por n, una columna por γ.

    Invariantes:
    - todo f en [−1e-9, 1 + 1e-9]
    - monotonía por fila en la dirección de `mode` (ver is_monotone)
    """

    gamma_grid: np.ndarray
    n_values: Tuple[int, ...]
    f_values: np.ndarray
    mode: SweepMode

    def __post_init__(self) -> None:
        f = np.asarray(self.f_values, dtype=np.float64)
        if f.shape != (len(self.n_values), self.gamma_grid.size):
            raise InvariantViolationError(
                f"f table shape {f.shape} does not match {len(self.n_values)}x{self.gamma_grid.size}"
            )
        if not np.all(np.isfinite(f)):
            raise InvariantViolationError("f table contains non-finite values")
        lo, hi = float(np.min(f, initial=0.0)), float(np.max(f, initial=0.0))
        if lo < -F_RANGE_TOL or hi > 1.0 + F_RANGE_TOL:
            raise InvariantViolationError(
                f"f values span [{lo:.3e}, {hi:.6g}], outside [0, 1]; is the reference a PSD state?",
                min_f=lo,
                max_f=hi,
            )

    def row(self, n: int) -> np.ndarray:
        try:
            return self.f_values[self.n_values.index(n)]
        except ValueError:
            raise InvariantViolationError(f"sweep has no row for n={n}", n=n) from None

    def is_monotone(self, tol: float = MONOTONE_TOL) -> bool:
        """f no creciente (divergence) o no decreciente (conditional) por fila."""
        steps = np.diff(self.f_values, axis=1)
        if self.mode == "divergence":
            return bool(np.all(steps <= tol))
        return bool(np.all(steps >= -tol))

    def rows(self) -> Iterator[Tuple[int, float, float]]:
        """(n, γ, f) en orden de n_values y grilla."""
        for n, fs in zip(self.n_values, self.f_values):
            for g, f in zip(self.gamma_grid, fs):
                yield n, float(g), float(f)


def _validate_grid(gammas: npt.ArrayLike) -> np.ndarray:
    grid = np.asarray(gammas, dtype=np.float64).reshape(-1)
    if grid.size == 0:
        raise InvariantViolationError("gamma grid is empty")
    if not np.all(np.isfinite(grid)):
        raise InvariantViolationError("gamma grid contains non-finite values")
    if grid.size > 1 and np.any(np.diff(grid) <= 0.0):
        raise InvariantViolationError("gamma grid must be strictly increasing")
    return grid


def gamma_sweep(
    source: SequenceSource,
    n_values: Sequence[int],
    gamma_grid: Optional[npt.ArrayLike] = None,
    mode: SweepMode = "divergence",
    workers: Optional[int] = None,
) -> GammaSweep:
    """
    Evalúa f_n sobre la grilla para cada n.

    Args:
        source: Secuencia (explícita, i.i.d., cq i.i.d., cq explícita)
        n_values: Niveles n ≥ 1
        gamma_grid: Grilla estrictamente creciente (default [−2, 2] paso 0.01)
        mode: divergence | conditional-entropy (eje γ_S = −γ_D)
        workers: Threads para las filas (None = default, 1 = serial)

    Raises:
        InvariantViolationError: grilla vacía o n < 1
        DimensionCapError: n demasiado grande para el camino explícito
    """
    if mode not in SWEEP_MODES:
        raise InvariantViolationError(f"unknown sweep mode '{mode}'", mode=mode)
    grid = default_gamma_grid() if gamma_grid is None else _validate_grid(gamma_grid)
    ns = tuple(int(n) for n in n_values)
    if not ns:
        raise InvariantViolationError("n_values is empty")
    if any(n < 1 for n in ns):
        raise InvariantViolationError("n values must be ≥ 1", n_values=list(ns))

    axis = grid if mode == "divergence" else -grid

    def evaluate(n: int) -> np.ndarray:
        return np.asarray(source.divergence_curve(n, axis), dtype=np.float64)

    table = np.vstack(parallel_map(evaluate, ns, workers))

    logger.info(
        f"📐 Sweep {source.kind} listo ({len(ns)} filas × {grid.size} γ)",
        extra={
            "component": "spectra",
            "event": "sweep_completed",
            "source": source.kind,
            "mode": mode,
            "n_values": list(ns),
            "grid_size": int(grid.size),
        },
    )
    return GammaSweep(grid, ns, table, mode)


@dataclass(frozen=True)
class RateEstimate:
    """
    Proxy de nivel n para D̄/D̲ (o S̄/S̲ en modo conditional).

    gamma_low ≤ midpoint ≤ gamma_high. Un flag *_open indica que f no cruzó
    el umbral dentro de la grilla y el extremo es el borde de la grilla.
    """

    n: int
    gamma_low: float
    gamma_high: float
    midpoint: float
    epsilon: float
    mode: SweepMode
    low_open: bool = False
    high_open: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def crossing_midpoint(grid: np.ndarray, g: np.ndarray) -> float:
    """γ donde una curva no creciente g cruza 1/2 (interpolación lineal)."""
    below = np.flatnonzero(g <= 0.5)
    if below.size == 0:
        return float(grid[-1])
    j = int(below[0])
    if j == 0:
        return float(grid[0])
    g0, g1 = float(g[j - 1]), float(g[j])
    t = (g0 - 0.5) / (g0 - g1) if g0 > g1 else 0.0
    return float(grid[j - 1] + t * (grid[j] - grid[j - 1]))


def estimate_row(
    grid: np.ndarray, f: np.ndarray, n: int, epsilon: float, mode: SweepMode
) -> RateEstimate:
    """RateEstimate de una fila; la fila se lleva a forma no creciente."""
    g = f if mode == "divergence" else 1.0 - f

    above = np.flatnonzero(g < 1.0 - epsilon)
    if above.size == 0:
        gamma_low, low_open = float(grid[-1]), False
    elif above[0] == 0:
        gamma_low, low_open = float(grid[0]), True
    else:
        gamma_low, low_open = float(grid[above[0] - 1]), False

    settled = np.flatnonzero(g <= epsilon)
    if settled.size == 0:
        gamma_high, high_open = float(grid[-1]), True
    else:
        gamma_high, high_open = float(grid[settled[0]]), False

    midpoint = min(max(crossing_midpoint(grid, g), gamma_low), gamma_high)
    return RateEstimate(
        n=n,
        gamma_low=gamma_low,
        gamma_high=gamma_high,
        midpoint=midpoint,
        epsilon=epsilon,
        mode=mode,
        low_open=low_open,
        high_open=high_open,
    )


def rate_estimate(sweep: GammaSweep, epsilon: float = 0.05) -> List[RateEstimate]:
    """
    Un RateEstimate por fila del sweep.

    Raises:
        InvariantViolationError: Si epsilon no está en (0, 1/2)
    """
    if not 0.0 < epsilon < 0.5:
        raise InvariantViolationError(
            f"epsilon must lie in (0, 0.5), got {epsilon}", epsilon=epsilon
        )
    return [
        estimate_row(sweep.gamma_grid, fs, n, epsilon, sweep.mode)
        for n, fs in zip(sweep.n_values, sweep.f_values)
    ]


__all__ = [
    "SweepMode",
    "SWEEP_MODES",
    "GammaSweep",
    "RateEstimate",
    "default_gamma_grid",
    "make_gamma_grid",
    "gamma_sweep",
    "rate_estimate",
    "estimate_row",
    "crossing_midpoint",
]
