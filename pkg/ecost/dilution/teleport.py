"""
Scissors Teleportation
======================

Canal promediado sobre resultados (nunca muestreado) que lleva el factor A′
de un miembro |φ⟩_AA′ a Bob a través de un recurso de rango M.

Variantes:
- orthogonal-flag: medición {Q, I − Q} en A′ antes de la teleportación
  ideal de dimensión M; la falla se mapea a |0⟩⟨0|_A ⊗ |⊥⟩⟨⊥|_B
- weyl-teleport: teleportación generalizada de dimensión M del bloque
  retenido (medición de Bell en A′C contra Φ_ab = (I ⊗ X^a Z^b)|Ψ_M⟩,
  corrección de Bob (X^a Z^b)^T); la falla conserva el estado condicional
  de A y marca ⊥ en Bob

Ambas variantes comparten la rama de éxito, así que F_sim coincide.

La salida vive en A ⊗ (B ⊕ ⊥), con ⊥ en el índice d_b de Bob.
"""
from typing import Literal, Optional, Tuple

import numpy as np
import scipy.linalg

from ..errors import DimensionMismatchError, InvariantViolationError
from ..qcore.linalg import ComplexMatrix, hermitize, pad_operator_b
from ..qcore.states import BipartiteSplit, DensityMatrix, SchmidtForm

ScissorsVariant = Literal["orthogonal-flag", "weyl-teleport"]
SCISSORS_VARIANTS: Tuple[ScissorsVariant, ...] = ("orthogonal-flag", "weyl-teleport")


def require_rank(m: int, split: BipartiteSplit) -> None:
    """1 ≤ M ≤ min(d_a, d_b)."""
    limit = min(split.dim_a, split.dim_b)
    if not 1 <= m <= limit:
        raise DimensionMismatchError(
            f"resource rank {m} outside [1, {limit}]", m=m, dim_a=split.dim_a, dim_b=split.dim_b
        )


def require_variant(variant: str) -> None:
    if variant not in SCISSORS_VARIANTS:
        raise InvariantViolationError(
            f"unknown scissors variant '{variant}'", variant=variant, known=list(SCISSORS_VARIANTS)
        )


def member_theta(member: SchmidtForm) -> ComplexMatrix:
    """
    Θ_j (d_b × d_b): lleva la base de Schmidt de B del miembro a la base
    canónica en orden de coeficientes. Θ_j = B_j†, con B_j la base de
    Schmidt completada a unitario.
    """
    basis = np.asarray(member.basis_b)
    d_b = member.split.dim_b
    if basis.shape[1] < d_b:
        complement = scipy.linalg.null_space(basis.conj().T)
        basis = np.hstack([basis, complement])
    return basis.conj().T


def weyl_operator(a: int, b: int, m: int) -> ComplexMatrix:
    """X^a Z^b en dimensión M."""
    shift = np.roll(np.eye(m, dtype=np.complex128), a, axis=0)
    phase = np.diag(np.exp(2j * np.pi * b * np.arange(m) / m))
    return shift @ phase


def _embed(success: ComplexMatrix, d_b: int) -> ComplexMatrix:
    out = np.zeros((success.shape[0], d_b), dtype=np.complex128)
    out[:, : success.shape[1]] = success
    return out


def _weyl_success(kept: ComplexMatrix, m: int) -> ComplexMatrix:
    """Σ_ab de los estados de Bob ya corregidos, como densidad sobre A ⊗ C^M."""
    resource = np.eye(m, dtype=np.complex128) / np.sqrt(m)
    total = np.zeros((kept.shape[0] * m, kept.shape[0] * m), dtype=np.complex128)
    for a in range(m):
        for b in range(m):
            w = weyl_operator(a, b, m)
            bell = w.T / np.sqrt(m)
            # ⟨Φ_ab|_A′C (|S⟩_AA′ ⊗ |Ψ_M⟩_CB)
            post = np.einsum("ax,xy,yb->ab", kept, bell.conj(), resource)
            corrected = post @ w
            vec = corrected.reshape(-1)
            total += np.outer(vec, vec.conj())
    return total


def scissors_channel(
    member: SchmidtForm,
    m: int,
    variant: ScissorsVariant = "orthogonal-flag",
    theta_block: Optional[ComplexMatrix] = None,
) -> DensityMatrix:
    """
    Θ → teleportación de rango M → Θ† de Bob, para un miembro.

    Args:
        member: Forma de Schmidt de |φ⟩_AB (B es el A′ de Alice antes de enviar)
        m: Rango del recurso maximalmente entrelazado
        variant: orthogonal-flag | weyl-teleport
        theta_block: Θ del miembro (default: member_theta(member))

    Returns:
        DensityMatrix sobre A ⊗ (B ⊕ ⊥), split (d_a, d_b + 1)

    Raises:
        DimensionMismatchError: M fuera de [1, min(d_a, d_b)]
    """
    split = member.split
    require_rank(m, split)
    require_variant(variant)
    d_a, d_b = split.dim_a, split.dim_b
    theta = member_theta(member) if theta_block is None else np.asarray(theta_block)

    amplitudes = member.state().amplitudes.reshape(d_a, d_b)
    rotated = amplitudes @ theta.T
    kept = rotated[:, :m]
    dropped = rotated[:, m:]

    if variant == "orthogonal-flag":
        vec = (_embed(kept, d_b) @ theta.conj()).reshape(-1)
        success = np.outer(vec, vec.conj())
        failure_a = np.zeros((d_a, d_a), dtype=np.complex128)
        failure_a[0, 0] = 1.0 - member.top_mass(m)
    else:
        averaged = _weyl_success(kept, m)
        # C^M → B embebido y Θ† de Bob sobre el factor B
        lift = _embed(np.eye(m, dtype=np.complex128), d_b).T
        bob = theta.conj().T @ lift
        op = np.kron(np.eye(d_a, dtype=np.complex128), bob)
        success = op @ averaged @ op.conj().T
        failure_a = dropped @ dropped.conj().T

    flag = np.zeros((d_b + 1, d_b + 1), dtype=np.complex128)
    flag[d_b, d_b] = 1.0
    out = pad_operator_b(success, d_a, d_b) + np.kron(failure_a, flag)
    return DensityMatrix.trusted(hermitize(out), BipartiteSplit(d_a, d_b + 1))


__all__ = [
    "ScissorsVariant",
    "SCISSORS_VARIANTS",
    "require_rank",
    "require_variant",
    "member_theta",
    "weyl_operator",
    "scissors_channel",
]
