"""
Entropic and Distance Measures
==============================

Todas las cantidades entrópicas en nats (convención e^{nγ}); el reporte en
bits es una conversión de presentación (nats_to_bits).
"""
import math
from typing import Union

import numpy as np
import numpy.typing as npt
from scipy.special import entr, xlogy

from ..errors import DimensionMismatchError
from .linalg import ComplexMatrix, hermitize, psd_sqrt, rank_threshold
from .states import DensityMatrix

SUPPORT_TOL = 1e-12


def nats_to_bits(value: float) -> float:
    return value / math.log(2.0)


def shannon_entropy(probabilities: npt.ArrayLike) -> float:
    """H(p) en nats, con 0·ln 0 = 0."""
    p = np.clip(np.asarray(probabilities, dtype=np.float64), 0.0, None)
    return float(np.sum(entr(p)))


def binary_entropy(p: float) -> float:
    return shannon_entropy([p, 1.0 - p])


def _require_same_dimension(rho: DensityMatrix, sigma: Union[DensityMatrix, ComplexMatrix]) -> None:
    other = sigma.dimension if isinstance(sigma, DensityMatrix) else sigma.shape[0]
    if rho.dimension != other:
        raise DimensionMismatchError(
            f"state dimensions differ: {rho.dimension} vs {other}",
            left=rho.dimension,
            right=other,
        )


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S(ρ) = -Tr ρ ln ρ (nats)."""
    return shannon_entropy(rho.eigenvalues)


def relative_entropy(rho: DensityMatrix, omega: DensityMatrix) -> float:
    """
    S(ρ‖ω) = Tr ρ(ln ρ - ln ω) en nats.

    Returns:
        +inf si supp(ρ) ⊄ supp(ω) (soporte a tolerancia 1e-12 relativa)
    """
    _require_same_dimension(rho, omega)

    w_omega = omega.eigenvalues
    v_omega = omega.eigenvectors
    support = w_omega > rank_threshold(w_omega)

    # ⟨v_j|ρ|v_j⟩ en la base propia de ω
    weights = np.real(np.einsum("ij,ik,kj->j", v_omega.conj(), rho.matrix, v_omega))

    leak = float(np.sum(weights[~support]))
    if leak > SUPPORT_TOL:
        return math.inf

    cross = float(np.sum(xlogy(weights[support], w_omega[support])))
    value = -von_neumann_entropy(rho) - cross
    return max(value, 0.0)


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """
    F(ρ,σ) = Tr √(√ρ σ √ρ).

    sigma puede ser subnormalizada. Autovalores negativos de √ρσ√ρ se
    recortan a cero (drift PSD).
    """
    _require_same_dimension(rho, sigma)
    root = psd_sqrt(rho.matrix)
    inner = hermitize(root @ sigma.matrix @ root)
    w = np.linalg.eigvalsh(inner)
    w = np.where(w > rank_threshold(w), w, 0.0)
    value = float(np.sum(np.sqrt(w)))
    return min(max(value, 0.0), 1.0)


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """½‖ρ − σ‖₁."""
    _require_same_dimension(rho, sigma)
    w = np.linalg.eigvalsh(hermitize(rho.matrix - sigma.matrix))
    return 0.5 * float(np.sum(np.abs(w)))


__all__ = [
    "nats_to_bits",
    "shannon_entropy",
    "binary_entropy",
    "von_neumann_entropy",
    "relative_entropy",
    "fidelity",
    "trace_distance",
]
