"""
Two-qubit closed forms (concurrence, E_F).

Oráculo independiente: nunca se usa dentro del minimizador general.
"""
import math

import numpy as np

from ..errors import DimensionMismatchError
from ..qcore.linalg import hermitize, psd_sqrt
from ..qcore.measures import binary_entropy
from ..qcore.states import DensityMatrix

_SIGMA_YY = np.kron(
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
)


def _require_two_qubits(rho: DensityMatrix) -> None:
    split = rho.split
    if rho.dimension != 4 or (split is not None and (split.dim_a, split.dim_b) != (2, 2)):
        raise DimensionMismatchError(
            "concurrence needs a two-qubit state with a 2x2 split",
            dimension=rho.dimension,
            split=None if split is None else [split.dim_a, split.dim_b],
        )


def concurrence_two_qubit(rho: DensityMatrix) -> float:
    """
    C = max(0, μ₁ − μ₂ − μ₃ − μ₄), μ_i² autovalores de √ρ ρ̃ √ρ
    con ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y).
    """
    _require_two_qubits(rho)
    m = np.asarray(rho.matrix)
    flipped = _SIGMA_YY @ m.conj() @ _SIGMA_YY
    root = psd_sqrt(m)
    w = np.linalg.eigvalsh(hermitize(root @ flipped @ root))
    mu = np.sort(np.sqrt(np.clip(w, 0.0, None)))[::-1]
    return float(min(max(mu[0] - mu[1] - mu[2] - mu[3], 0.0), 1.0))


def eof_from_concurrence(c: float) -> float:
    """h((1 + √(1 − C²)) / 2) en nats."""
    c = min(max(c, 0.0), 1.0)
    return binary_entropy((1.0 + math.sqrt(1.0 - c * c)) / 2.0)


def eof_two_qubit(rho: DensityMatrix) -> float:
    return eof_from_concurrence(concurrence_two_qubit(rho))


__all__ = ["concurrence_two_qubit", "eof_two_qubit", "eof_from_concurrence"]
