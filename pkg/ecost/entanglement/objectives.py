"""
Decomposition Objectives
========================

Objetivos sobre las filas ψ̃_i de una descomposición (peso p_i = ‖ψ̃_i‖²).

Cada objetivo es aditivo por miembro antes de un paso final:

    valor = total(Σ_i member_term(ψ̃_i))

así el buscador mantiene la suma corriente y, al rotar dos filas, solo
recalcula los dos términos tocados.

Objetivos:
- MeanEntropyObjective: Σ p_i S(ρ_A^i)  (E_F)
- SpectralMidpointObjective: midpoint de la curva condicional de nivel n
  de la cq-extension inducida (proxy de S̄(A|R))
"""
import math
from abc import ABC, abstractmethod

import numpy as np
import numpy.typing as npt
from scipy.special import entr, xlogy

from ..qcore.states import BipartiteSplit
from ..spectra.sweep import crossing_midpoint


class DecompositionObjective(ABC):
    """Objetivo aditivo por miembro sobre filas no normalizadas."""

    def __init__(self, split: BipartiteSplit):
        self.split = split

    def singular_squares(self, row: np.ndarray) -> np.ndarray:
        """σ_k² de la fila vista como matriz d_a × d_b (suman p)."""
        m = row.reshape(self.split.dim_a, self.split.dim_b)
        if min(m.shape) == 1:
            return np.array([float(np.vdot(row, row).real)])
        if min(m.shape) == 2:
            # Gram 2×2: autovalores por traza y determinante
            g = m @ m.conj().T if m.shape[0] == 2 else m.conj().T @ m
            tr = float(g[0, 0].real + g[1, 1].real)
            det = float((g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]).real)
            disc = math.sqrt(max(tr * tr - 4.0 * det, 0.0))
            large = (tr + disc) / 2.0
            small = max(det / large, 0.0) if large > 0.0 else 0.0
            return np.array([large, small])
        s = np.linalg.svd(m, compute_uv=False)
        return s * s

    @abstractmethod
    def member_term(self, row: np.ndarray) -> np.ndarray:
        """Contribución de un miembro."""

    @abstractmethod
    def total(self, accumulated: np.ndarray) -> float:
        """Valor del objetivo a partir de la suma de contribuciones."""

    def zero(self) -> np.ndarray:
        return np.zeros(())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.split.dim_a}x{self.split.dim_b})"


class MeanEntropyObjective(DecompositionObjective):
    """p·S(φ) = −Σ σ² ln σ² + p ln p."""

    def member_term(self, row: np.ndarray) -> np.ndarray:
        s2 = self.singular_squares(row)
        p = float(s2.sum())
        return np.asarray(float(np.sum(entr(s2))) + float(xlogy(p, p)))

    def total(self, accumulated: np.ndarray) -> float:
        return max(float(accumulated), 0.0)


class SpectralMidpointObjective(DecompositionObjective):
    """
    Midpoint (cruce de 1/2) de f(γ) = Σ_i Σ_x max(0, p_i λ^i_x − p_i e^{−nγ}).

    La grilla está en el eje de entropía condicional (nats por copia); n fija
    la escala e^{−nγ} del estado de nivel n.
    """

    def __init__(self, split: BipartiteSplit, gamma_grid: npt.ArrayLike, n: int):
        super().__init__(split)
        self.gamma_grid = np.asarray(gamma_grid, dtype=np.float64)
        self.n = n
        self._scale = np.exp(-n * self.gamma_grid)

    def zero(self) -> np.ndarray:
        return np.zeros(self.gamma_grid.size)

    def member_term(self, row: np.ndarray) -> np.ndarray:
        s2 = self.singular_squares(row)
        p = float(s2.sum())
        return np.clip(s2[:, None] - p * self._scale[None, :], 0.0, None).sum(axis=0)

    def curve(self, accumulated: np.ndarray) -> np.ndarray:
        return np.clip(accumulated, 0.0, 1.0)

    def total(self, accumulated: np.ndarray) -> float:
        return crossing_midpoint(self.gamma_grid, 1.0 - self.curve(accumulated))


__all__ = [
    "DecompositionObjective",
    "MeanEntropyObjective",
    "SpectralMidpointObjective",
]
