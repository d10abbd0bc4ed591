"""
Spectral Projections
====================

{A ≥ 0}: proyector sobre el autoespacio de autovalores no negativos.
{A ≥ B} := {A − B ≥ 0}.

Convención de ceros: autovalores ≥ −1e-12·‖A‖ cuentan como no negativos
({A ≥ 0} = Σ_{λ_i ≥ 0} π_i), así Π(γ) = 0 produce la identidad.

Incluye las dos desigualdades básicas como primitivas ejecutables:
- lemma1_gap: Tr[{A≥B}(A−B)] ≥ Tr[P(A−B)] para todo 0 ≤ P ≤ I
- lemma2_check: Tr[{ρ ≥ e^{nγ}ω} ω] ≤ e^{−nγ}
"""
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np
import numpy.typing as npt

from ..errors import DimensionMismatchError, InvariantViolationError
from ..qcore.linalg import (
    ComplexMatrix,
    as_square,
    hermitian_eig,
    hermitian_eigvals,
    is_hermitian,
    require_same_shape,
)
from ..qcore.states import DensityMatrix

ZERO_EIGENVALUE_TOL = 1e-12
IDEMPOTENT_TOL = 1e-9
UNIT_INTERVAL_TOL = 1e-10

Operator = Union[DensityMatrix, npt.ArrayLike]


def as_operator(op: Operator) -> ComplexMatrix:
    if isinstance(op, DensityMatrix):
        return np.asarray(op.matrix)
    return as_square(op)


@dataclass(frozen=True, eq=False)
class SpectralProjector:
    """Proyector ortogonal (idempotente y Hermitiano)."""

    matrix: ComplexMatrix
    source_dimension: int

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=np.complex128)
        if not is_hermitian(m):
            raise InvariantViolationError("projector is not Hermitian")
        deviation = float(np.max(np.abs(m @ m - m), initial=0.0))
        if deviation > IDEMPOTENT_TOL:
            raise InvariantViolationError(
                f"projector is not idempotent (‖P² − P‖ = {deviation:.3e})",
                deviation=deviation,
            )

    @property
    def rank(self) -> int:
        return int(round(float(np.trace(self.matrix).real)))

    def expectation(self, op: Operator) -> float:
        """Tr[P·op]."""
        return float(np.real(np.trace(self.matrix @ as_operator(op))))


def _nonnegative_mask(w: np.ndarray) -> np.ndarray:
    scale = float(np.max(np.abs(w), initial=0.0))
    return w >= -ZERO_EIGENVALUE_TOL * scale


def positive_part_projector(a: Operator) -> SpectralProjector:
    """
    {A ≥ 0}.

    Raises:
        InvariantViolationError: Si A no es Hermitiana
    """
    m = as_operator(a)
    w, v = hermitian_eig(m)
    cols = v[:, _nonnegative_mask(w)]
    return SpectralProjector(cols @ cols.conj().T, m.shape[0])


def positive_part_trace(a: Operator) -> float:
    """Tr[{A ≥ 0}A] calculado solo con autovalores."""
    w = hermitian_eigvals(as_operator(a))
    return float(np.sum(w[_nonnegative_mask(w)]))


def spectral_compare(a: Operator, b: Operator) -> SpectralProjector:
    """{A ≥ B} = {A − B ≥ 0}."""
    ma, mb = as_operator(a), as_operator(b)
    require_same_shape(ma, mb)
    return positive_part_projector(ma - mb)


def lemma1_gap(a: Operator, b: Operator, p: Operator) -> float:
    """
    Tr[{A≥B}(A−B)] − Tr[P(A−B)].

    Contrato: resultado ≥ −1e-9 para todo 0 ≤ P ≤ I.

    Raises:
        InvariantViolationError: Si P no está en [0, I]
        DimensionMismatchError: Si las dimensiones difieren
    """
    ma, mb, mp = as_operator(a), as_operator(b), as_operator(p)
    require_same_shape(ma, mb)
    require_same_shape(ma, mp)
    wp = hermitian_eigvals(mp)
    if wp[-1] < -UNIT_INTERVAL_TOL or wp[0] > 1.0 + UNIT_INTERVAL_TOL:
        raise InvariantViolationError(
            f"P spectrum [{wp[-1]:.3e}, {wp[0]:.3e}] is outside [0, 1]",
            min_eigenvalue=float(wp[-1]),
            max_eigenvalue=float(wp[0]),
        )
    diff = ma - mb
    return positive_part_trace(diff) - float(np.real(np.trace(mp @ diff)))


class Lemma2Result(NamedTuple):
    value: float
    bound: float

    @property
    def margin(self) -> float:
        return self.bound - self.value


def lemma2_check(rho: DensityMatrix, omega: Operator, n: int, gamma: float) -> Lemma2Result:
    """
    value = Tr[{ρ ≥ e^{nγ}ω} ω], bound = e^{−nγ}.

    rho es el estado al nivel n (el caller arma ρ^⊗n si corresponde); omega
    solo necesita ser Hermitiano.
    """
    mo = as_operator(omega)
    if mo.shape[0] != rho.dimension:
        raise DimensionMismatchError(
            f"omega dimension {mo.shape[0]} does not match rho {rho.dimension}",
            rho=rho.dimension,
            omega=mo.shape[0],
        )
    projector = spectral_compare(rho.matrix, math.exp(n * gamma) * mo)
    return Lemma2Result(projector.expectation(mo), math.exp(-n * gamma))


def pi_trace(rho: Operator, omega: Operator, n: int, gamma: float) -> float:
    """
    f = Tr[{Π(γ) ≥ 0}Π(γ)] con Π(γ) = ρ − e^{nγ}ω.

    rho es el estado al nivel n; el resultado está en [0, 1] si ω es un estado.
    """
    mr, mo = as_operator(rho), as_operator(omega)
    require_same_shape(mr, mo)
    return positive_part_trace(mr - math.exp(n * gamma) * mo)


__all__ = [
    "SpectralProjector",
    "positive_part_projector",
    "positive_part_trace",
    "spectral_compare",
    "lemma1_gap",
    "Lemma2Result",
    "lemma2_check",
    "pi_trace",
]
