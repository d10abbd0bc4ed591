"""
Sequence Sources
================

Una "sequence-spec" entrega, para cada n, la curva f_n(γ) en el eje de
divergencia (Π = ρ_n − e^{nγ}ω_n). El sweep se encarga del cambio de eje
para el modo conditional-entropy.

Fuentes:
- ExplicitSource: lista explícita de estados (y referencias) por n
- IidSource: ρ^⊗n contra ω^⊗n (ω = I si no se da → tasas de entropía)
- IidCqSource: potencia tensorial de una cq-extension (por bloques)
- ExplicitCqSource: lista explícita de cq-extensions por n

Camino de evaluación:
- pares conmutantes i.i.d. → clases de tipo (cualquier n)
- resto → Kronecker explícito con cap de dimensión 4096
"""
import logging
import math
from abc import ABC, abstractmethod
from functools import lru_cache
from typing import TYPE_CHECKING, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from ..errors import DimensionMismatchError, InvariantViolationError
from ..logging import log_sweep_progress
from ..qcore.linalg import (
    EXPLICIT_DIMENSION_CAP,
    ComplexMatrix,
    check_explicit_dimension,
    hermitize,
    operator_power,
    require_hermitian,
)
from ..qcore.states import DensityMatrix
from .conditional import cq_conditional_tail
from .projectors import Operator, as_operator, positive_part_trace
from .type_classes import SpectralTail, commuting_pair_tail

if TYPE_CHECKING:
    from ..entanglement.ensembles import CqExtension

logger = logging.getLogger(__name__)

COMMUTATION_TOL = 1e-10

# Constante irracional para diagonalizar ρ + c·ω simultáneamente
_MIXING = math.pi


def joint_spectra(rho: ComplexMatrix, omega: ComplexMatrix) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """
    Espectros (r_x, w_x) en una base común si ρ y ω conmutan.

    Returns:
        None si no conmutan, si la diagonalización simultánea falla a 1e-10
        o si ω tiene autovalores negativos
    """
    if np.max(np.abs(rho @ omega - omega @ rho), initial=0.0) > COMMUTATION_TOL:
        return None
    _, v = scipy.linalg.eigh(hermitize(rho + _MIXING * omega))
    r = v.conj().T @ rho @ v
    w = v.conj().T @ omega @ v
    for m in (r, w):
        off = m - np.diag(np.diag(m))
        if np.max(np.abs(off), initial=0.0) > COMMUTATION_TOL:
            return None
    r_diag, w_diag = np.real(np.diag(r)).copy(), np.real(np.diag(w)).copy()
    if np.min(w_diag) < -COMMUTATION_TOL:
        # el camino log-space requiere ω ≥ 0
        return None
    return r_diag, w_diag


def explicit_curve(rho: ComplexMatrix, omega: ComplexMatrix, n: int, gammas: np.ndarray) -> np.ndarray:
    """f_n(γ) por autodescomposición de Π(γ) en cada punto de la grilla."""
    return np.array(
        [positive_part_trace(rho - math.exp(n * g) * omega) for g in gammas]
    )


def conditional_reference(rho: DensityMatrix) -> ComplexMatrix:
    """I_A ⊗ ρ_B: referencia de S(A|B) (tasas condicionales de una fuente bipartita)."""
    split = rho.require_split()
    rho_b = rho.partial_trace("B").matrix
    return np.kron(np.eye(split.dim_a, dtype=np.complex128), rho_b)


class SequenceSource(ABC):
    """Secuencia de pares (ρ_n, ω_n) evaluable por n."""

    @property
    @abstractmethod
    def kind(self) -> str:
        """Nombre corto para logs (explicit, iid, iid-cq, explicit-cq)."""

    @abstractmethod
    def divergence_curve(self, n: int, gammas: np.ndarray) -> np.ndarray:
        """f_n sobre γ en el eje de divergencia."""

    def state(self, n: int) -> DensityMatrix:
        """Estado explícito de nivel n (si la fuente lo puede construir)."""
        raise InvariantViolationError(
            f"{self.kind} source has no explicit state at level {n}", kind=self.kind, n=n
        )


class ExplicitSource(SequenceSource):
    """Lista explícita: states[n-1] es ρ_n, references[n-1] es ω_n (default I)."""

    def __init__(self, states: Sequence[DensityMatrix], references: Optional[Sequence[Operator]] = None):
        if not states:
            raise InvariantViolationError("explicit source needs at least one state")
        if references is not None and len(references) != len(states):
            raise DimensionMismatchError(
                "references must match states one to one",
                states=len(states),
                references=len(references),
            )
        self._states = list(states)
        self._references = None if references is None else [as_operator(r) for r in references]
        for r in self._references or []:
            require_hermitian(r)

    @property
    def kind(self) -> str:
        return "explicit"

    def state(self, n: int) -> DensityMatrix:
        if not 1 <= n <= len(self._states):
            raise InvariantViolationError(
                f"explicit sequence has no element n={n}", n=n, length=len(self._states)
            )
        return self._states[n - 1]

    def reference(self, n: int) -> ComplexMatrix:
        rho = self.state(n)
        if self._references is None:
            return np.eye(rho.dimension, dtype=np.complex128)
        omega = self._references[n - 1]
        if omega.shape[0] != rho.dimension:
            raise DimensionMismatchError(
                f"reference {n} has dimension {omega.shape[0]}, state has {rho.dimension}",
                n=n,
            )
        return omega

    def divergence_curve(self, n: int, gammas: np.ndarray) -> np.ndarray:
        rho = self.state(n).matrix
        omega = self.reference(n)
        joint = joint_spectra(rho, omega)
        if joint is not None:
            log_sweep_progress(logger, n, gammas.size, "divergence", "explicit-commuting")
            return commuting_pair_tail(joint[0], joint[1], 1).evaluate(n * gammas)
        log_sweep_progress(logger, n, gammas.size, "divergence", "explicit")
        return explicit_curve(rho, omega, n, gammas)


class IidSource(SequenceSource):
    """
    Fuente i.i.d.: ρ_n = ρ^⊗n, ω_n = ω^⊗n.

    omega=None usa la identidad: en modo conditional-entropy el sweep da las
    tasas de entropía espectral de ρ.
    """

    def __init__(self, rho: DensityMatrix, omega: Optional[Operator] = None, cap: int = EXPLICIT_DIMENSION_CAP):
        self.rho = rho
        if omega is None:
            self.omega = np.eye(rho.dimension, dtype=np.complex128)
        else:
            self.omega = as_operator(omega)
            require_hermitian(self.omega)
        if self.omega.shape[0] != rho.dimension:
            raise DimensionMismatchError(
                f"omega dimension {self.omega.shape[0]} does not match rho {rho.dimension}",
                rho=rho.dimension,
                omega=self.omega.shape[0],
            )
        self.cap = cap
        self.joint = joint_spectra(np.asarray(rho.matrix), self.omega)
        self._tail = lru_cache(maxsize=64)(self._build_tail)

    @property
    def kind(self) -> str:
        return "iid"

    @property
    def commuting(self) -> bool:
        return self.joint is not None

    def _build_tail(self, n: int) -> SpectralTail:
        assert self.joint is not None
        return commuting_pair_tail(self.joint[0], self.joint[1], n)

    def state(self, n: int) -> DensityMatrix:
        return self.rho.tensor_power(n, cap=self.cap)

    def divergence_curve(self, n: int, gammas: np.ndarray) -> np.ndarray:
        if self.joint is not None:
            log_sweep_progress(logger, n, gammas.size, "divergence", "type-class")
            return self._tail(n).evaluate(n * gammas)

        check_explicit_dimension(self.rho.dimension ** n, cap=self.cap, n=n)
        log_sweep_progress(logger, n, gammas.size, "divergence", "explicit")
        rho_n = self.state(n).matrix
        if self.rho.split is not None:
            s = self.rho.split
            omega_n = operator_power(self.omega, n, s.dim_a, s.dim_b)
        else:
            omega_n = self.omega
            for _ in range(n - 1):
                omega_n = np.kron(omega_n, self.omega)
        return explicit_curve(np.asarray(rho_n), omega_n, n, gammas)


class IidCqSource(SequenceSource):
    """Potencia tensorial de una cq-extension contra ϱ_R ⊗ I_A."""

    def __init__(self, cq: "CqExtension"):
        self.cq = cq

    @property
    def kind(self) -> str:
        return "iid-cq"

    def divergence_curve(self, n: int, gammas: np.ndarray) -> np.ndarray:
        log_sweep_progress(logger, n, gammas.size, "divergence", "cq-blockwise-iid")
        tail = cq_conditional_tail(self.cq.probabilities, self.cq.member_spectra(), n, iid=True)
        return tail.evaluate(n * gammas)


class ExplicitCqSource(SequenceSource):
    """extensions[n-1] es la cq-extension del estado de nivel n."""

    def __init__(self, extensions: Sequence["CqExtension"]):
        if not extensions:
            raise InvariantViolationError("explicit cq source needs at least one extension")
        self.extensions = list(extensions)

    @property
    def kind(self) -> str:
        return "explicit-cq"

    def extension(self, n: int) -> "CqExtension":
        if not 1 <= n <= len(self.extensions):
            raise InvariantViolationError(
                f"explicit cq sequence has no element n={n}", n=n, length=len(self.extensions)
            )
        return self.extensions[n - 1]

    def state(self, n: int) -> DensityMatrix:
        return self.extension(n).marginal()

    def divergence_curve(self, n: int, gammas: np.ndarray) -> np.ndarray:
        cq = self.extension(n)
        log_sweep_progress(logger, n, gammas.size, "divergence", "cq-blockwise")
        tail = cq_conditional_tail(cq.probabilities, cq.member_spectra(), n, iid=False)
        return tail.evaluate(n * gammas)


__all__ = [
    "SequenceSource",
    "ExplicitSource",
    "IidSource",
    "IidCqSource",
    "ExplicitCqSource",
    "conditional_reference",
    "joint_spectra",
    "explicit_curve",
]
