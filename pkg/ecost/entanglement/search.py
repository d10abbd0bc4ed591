"""
Givens Search over Reference Unitaries
======================================

Búsqueda local sin derivadas sobre las filas de una descomposición. Cada
paso rota un par de filas (j, k) con

    ψ̃_j ← cos θ ψ̃_j + e^{iφ} sin θ ψ̃_k
    ψ̃_k ← −e^{−iφ} sin θ ψ̃_j + cos θ ψ̃_k

que equivale a multiplicar el unitario de referencia por una rotación de
Givens; la mezcla Σ ψ̃ψ̃† no cambia.

Diseño:
- Line search acotada (Brent, scipy) en θ para φ ∈ {0, π/2}, luego en φ
- Sweep = todos los pares; convergencia cuando la mejora del sweep < tolerance
- Suma corriente de términos por miembro (solo se recalculan dos por paso)
- Sin estado compartido: cada run es dueño de sus filas (restarts en threads)
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from .objectives import DecompositionObjective

logger = logging.getLogger(__name__)

ROW_NORM_FLOOR = 1e-15
_PHASES = (0.0, math.pi / 2.0)


@dataclass(frozen=True)
class SearchSettings:
    """Presupuesto por restart."""

    max_sweeps: int = 500
    tolerance: float = 1e-9
    line_tolerance: float = 1e-7


@dataclass(frozen=True, eq=False)
class SearchOutcome:
    rows: np.ndarray
    value: float
    sweeps: int
    converged: bool


def rotate_pair(
    vj: np.ndarray, vk: np.ndarray, theta: float, phi: float
) -> Tuple[np.ndarray, np.ndarray]:
    c, s = math.cos(theta), math.sin(theta)
    phase = complex(math.cos(phi), math.sin(phi))
    return c * vj + phase * s * vk, -phase.conjugate() * s * vj + c * vk


class GivensSearch:
    """
    Minimiza un DecompositionObjective rotando pares de filas.

    Usage:
        search = GivensSearch(MeanEntropyObjective(split))
        outcome = search.run(rows0)
        outcome.value, outcome.converged
    """

    def __init__(self, objective: DecompositionObjective, settings: Optional[SearchSettings] = None):
        self.objective = objective
        self.settings = settings or SearchSettings()

    def _line_min(self, fn: Callable[[float], float], lo: float, hi: float) -> Tuple[float, float]:
        result = minimize_scalar(
            fn, bounds=(lo, hi), method="bounded", options={"xatol": self.settings.line_tolerance}
        )
        return float(result.x), float(result.fun)

    def _optimize_pair(
        self, vj: np.ndarray, vk: np.ndarray, base: np.ndarray, current: float
    ) -> Optional[Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, float]]:
        term = self.objective.member_term
        total = self.objective.total

        def value(theta: float, phi: float) -> float:
            a, b = rotate_pair(vj, vk, theta, phi)
            return total(base + term(a) + term(b))

        best_theta, best_phi, best = 0.0, 0.0, current
        for phi in _PHASES:
            theta, fun = self._line_min(lambda t: value(t, phi), -math.pi / 2.0, math.pi / 2.0)
            if fun < best:
                best_theta, best_phi, best = theta, phi, fun
        if best_theta != 0.0:
            phi, fun = self._line_min(lambda f: value(best_theta, f), -math.pi, math.pi)
            if fun < best:
                best_phi, best = phi, fun

        if not best < current:
            return None
        a, b = rotate_pair(vj, vk, best_theta, best_phi)
        return a, b, term(a), term(b), best

    def run(self, rows: np.ndarray) -> SearchOutcome:
        """
        Corre sweeps hasta converger o agotar max_sweeps.

        Args:
            rows: Filas iniciales (K × d), se copian
        """
        rows = np.array(rows, dtype=np.complex128, copy=True)
        k = rows.shape[0]
        terms: List[np.ndarray] = [self.objective.member_term(r) for r in rows]
        accumulated = sum(terms, self.objective.zero())
        value = self.objective.total(accumulated)

        sweeps = 0
        converged = k < 2
        while not converged and sweeps < self.settings.max_sweeps:
            start = value
            for j in range(k - 1):
                for m in range(j + 1, k):
                    if (
                        np.linalg.norm(rows[j]) < ROW_NORM_FLOOR
                        and np.linalg.norm(rows[m]) < ROW_NORM_FLOOR
                    ):
                        continue
                    base = accumulated - terms[j] - terms[m]
                    step = self._optimize_pair(rows[j], rows[m], base, value)
                    if step is None:
                        continue
                    rows[j], rows[m], terms[j], terms[m], value = step
                    accumulated = base + terms[j] + terms[m]
            # resuma desde cero para no acumular drift
            accumulated = sum(terms, self.objective.zero())
            value = self.objective.total(accumulated)
            sweeps += 1
            converged = start - value < self.settings.tolerance

        return SearchOutcome(rows=rows, value=value, sweeps=sweeps, converged=converged)


__all__ = ["SearchSettings", "SearchOutcome", "GivensSearch", "rotate_pair"]
