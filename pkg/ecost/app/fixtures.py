"""
Fixture generation.

Familias:
- bell: |Φ+⟩⟨Φ+| en 2×2 (reducidos I/2)
- werner: p |Ψ−⟩⟨Ψ−| + (1 − p) I/4 (p = 1 da el singlete puro)
- random-mixed: Ginibre de rango `rank` sobre d_a × d_b
- random-pure / product: vectores Haar (product = |a⟩⊗|b⟩)

Todas las familias aleatorias salen de default_rng(seed): misma semilla,
mismo archivo.
"""
import math

import numpy as np

from ..config.schemas import FixtureSettings
from ..errors import InvariantViolationError
from ..qcore.linalg import random_density_matrix, random_pure_vector
from ..qcore.serialization import StateDocument, document_from_state
from ..qcore.states import BipartiteSplit, DensityMatrix, PureState, maximally_entangled

QUBIT_PAIR = BipartiteSplit(2, 2)


def bell_state() -> DensityMatrix:
    return DensityMatrix.from_pure(maximally_entangled(2, QUBIT_PAIR))


def werner_state(p: float) -> DensityMatrix:
    """
    Raises:
        InvariantViolationError: p ∉ [0, 1]
    """
    if not (math.isfinite(p) and 0.0 <= p <= 1.0):
        raise InvariantViolationError(f"Werner weight p must be in [0, 1], got {p}", p=p)
    singlet = np.array([0.0, 1.0, -1.0, 0.0], dtype=np.complex128) / math.sqrt(2.0)
    matrix = p * np.outer(singlet, singlet.conj()) + (1.0 - p) * np.eye(4) / 4.0
    return DensityMatrix(matrix, QUBIT_PAIR)


def generate_fixture(settings: FixtureSettings, seed: int = 0) -> StateDocument:
    """
    Genera el documento JSON de un fixture.

    Returns:
        StateDocument que pasa las validaciones de qcore al releerse
    """
    rng = np.random.default_rng(seed)
    split = BipartiteSplit(settings.dim_a, settings.dim_b)

    if settings.kind == "bell":
        return document_from_state(bell_state())
    if settings.kind == "werner":
        return document_from_state(werner_state(settings.p))
    if settings.kind == "random-mixed":
        matrix = random_density_matrix(split.dimension, rng, settings.rank)
        return document_from_state(DensityMatrix(matrix, split))
    if settings.kind == "random-pure":
        return document_from_state(PureState(random_pure_vector(split.dimension, rng), split))
    # product
    a = random_pure_vector(settings.dim_a, rng)
    b = random_pure_vector(settings.dim_b, rng)
    return document_from_state(PureState(np.kron(a, b), split))


__all__ = ["generate_fixture", "bell_state", "werner_state"]
