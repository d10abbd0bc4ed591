"""
Quantum State Types
===================

Tipos inmutables de estado: BipartiteSplit, DensityMatrix, PureState, SchmidtForm.

Diseño:
- Dataclasses frozen; la validación corre en __post_init__
- Las matrices se copian y se marcan read-only (seguras entre threads)
- `trusted(...)` construye sin validar: para resultados internos cuyos
  invariantes ya están garantizados por construcción (potencias tensoriales
  grandes, mezclas de ensembles ya validados)

Usage:
    split = BipartiteSplit(2, 2)
    bell = maximally_entangled(2, split)
    rho = bell.density()
    rho_a = partial_trace(rho, keep="A")   # I/2
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Literal, Optional, Tuple

import numpy as np
import numpy.typing as npt
import scipy.linalg

from ..errors import DimensionMismatchError, InvariantViolationError
from .linalg import (
    HERMITIAN_TOL,
    ComplexMatrix,
    RealVector,
    check_explicit_dimension,
    hermitian_eig,
    is_hermitian,
    ket_power,
    numerical_rank,
    operator_power,
    partial_trace_matrix,
)

Subsystem = Literal["A", "B"]

TRACE_TOL = 1e-10
PSD_TOL = 1e-10
NORM_TOL = 1e-10
SCHMIDT_SUM_TOL = 1e-9


def _frozen_array(a: npt.ArrayLike, dtype: type = np.complex128) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class BipartiteSplit:
    """Factorización ℋ = ℋ_A ⊗ ℋ_B."""

    dim_a: int
    dim_b: int

    def __post_init__(self) -> None:
        if self.dim_a < 1 or self.dim_b < 1:
            raise InvariantViolationError(
                f"split dimensions must be positive, got {self.dim_a}x{self.dim_b}",
                dim_a=self.dim_a,
                dim_b=self.dim_b,
            )

    @property
    def dimension(self) -> int:
        return self.dim_a * self.dim_b

    def local(self, keep: Subsystem) -> int:
        return self.dim_a if keep == "A" else self.dim_b

    def require(self, dimension: int) -> None:
        """Raises DimensionMismatchError si dim_a·dim_b != dimension."""
        if dimension != self.dimension:
            raise DimensionMismatchError(
                f"dimension {dimension} does not match split {self.dim_a}x{self.dim_b}",
                dimension=dimension,
                dim_a=self.dim_a,
                dim_b=self.dim_b,
            )

    def power(self, n: int) -> "BipartiteSplit":
        return BipartiteSplit(self.dim_a ** n, self.dim_b ** n)

    def combine(self, other: "BipartiteSplit") -> "BipartiteSplit":
        return BipartiteSplit(self.dim_a * other.dim_a, self.dim_b * other.dim_b)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    Operador densidad Hermitiano PSD.

    Invariantes:
    - Hermitiana dentro de 1e-10
    - autovalor mínimo ≥ -1e-10
    - traza 1 dentro de 1e-10 (o en [0, 1] si subnormalized)
    """

    matrix: ComplexMatrix
    split: Optional[BipartiteSplit] = None
    subnormalized: bool = False

    def __post_init__(self) -> None:
        m = _frozen_array(self.matrix)
        object.__setattr__(self, "matrix", m)

        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(
                f"density matrix must be square, got shape {m.shape}", shape=list(m.shape)
            )
        if self.split is not None:
            self.split.require(m.shape[0])
        if not is_hermitian(m, HERMITIAN_TOL):
            raise InvariantViolationError(
                "density matrix is not Hermitian", tolerance=HERMITIAN_TOL
            )

        trace = float(np.trace(m).real)
        if self.subnormalized:
            if trace < -TRACE_TOL or trace > 1.0 + TRACE_TOL:
                raise InvariantViolationError(
                    f"subnormalized trace {trace:.12g} outside [0, 1]", trace=trace
                )
        elif abs(trace - 1.0) > TRACE_TOL:
            raise InvariantViolationError(
                f"trace {trace:.12g} differs from 1", trace=trace, tolerance=TRACE_TOL
            )

        min_eig = float(self.eigenvalues[-1])
        if min_eig < -PSD_TOL:
            raise InvariantViolationError(
                f"density matrix is not PSD (min eigenvalue {min_eig:.3e})",
                min_eigenvalue=min_eig,
            )

    @classmethod
    def trusted(
        cls,
        matrix: ComplexMatrix,
        split: Optional[BipartiteSplit] = None,
        subnormalized: bool = False,
    ) -> "DensityMatrix":
        """Construye sin validar (invariantes garantizados por el caller)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "matrix", _frozen_array(matrix))
        object.__setattr__(obj, "split", split)
        object.__setattr__(obj, "subnormalized", subnormalized)
        return obj

    @classmethod
    def from_pure(cls, psi: "PureState") -> "DensityMatrix":
        v = psi.amplitudes
        return cls.trusted(np.outer(v, v.conj()), psi.split)

    @classmethod
    def maximally_mixed(cls, d: int, split: Optional[BipartiteSplit] = None) -> "DensityMatrix":
        return cls.trusted(np.eye(d, dtype=np.complex128) / d, split)

    @classmethod
    def diagonal(cls, probabilities: npt.ArrayLike, split: Optional[BipartiteSplit] = None) -> "DensityMatrix":
        return cls(np.diag(np.asarray(probabilities, dtype=np.complex128)), split)

    @property
    def dimension(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @cached_property
    def _spectral(self) -> Tuple[RealVector, ComplexMatrix]:
        return hermitian_eig(self.matrix)

    @property
    def eigenvalues(self) -> RealVector:
        """Espectro no creciente."""
        return self._spectral[0]

    @property
    def eigenvectors(self) -> ComplexMatrix:
        return self._spectral[1]

    @property
    def rank(self) -> int:
        """Rango numérico a tolerancia 1e-12 relativa."""
        return numerical_rank(self.eigenvalues)

    @property
    def is_pure(self) -> bool:
        return self.rank == 1

    def require_split(self) -> BipartiteSplit:
        if self.split is None:
            raise DimensionMismatchError(
                "operation requires a bipartite split", dimension=self.dimension
            )
        return self.split

    def partial_trace(self, keep: Subsystem = "A") -> "DensityMatrix":
        split = self.require_split()
        reduced = partial_trace_matrix(self.matrix, split.dim_a, split.dim_b, keep)
        return DensityMatrix.trusted(reduced, None, self.subnormalized)

    def tensor(self, other: "DensityMatrix") -> "DensityMatrix":
        """ρ ⊗ σ (Kronecker directo, sin split)."""
        m = np.kron(self.matrix, other.matrix)
        return DensityMatrix.trusted(m, None, self.subnormalized or other.subnormalized)

    def tensor_power(self, n: int, cap: Optional[int] = None) -> "DensityMatrix":
        """ρ^⊗n con split (d_a^n, d_b^n) y factores A primero."""
        if n < 1:
            raise InvariantViolationError(f"n must be ≥ 1, got {n}", n=n)
        kwargs = {} if cap is None else {"cap": cap}
        check_explicit_dimension(self.dimension ** n, n=n, **kwargs)
        if n == 1:
            return self
        if self.split is None:
            m = self.matrix
            for _ in range(n - 1):
                m = np.kron(m, self.matrix)
            return DensityMatrix.trusted(m, None, self.subnormalized)
        s = self.split
        return DensityMatrix.trusted(
            operator_power(self.matrix, n, s.dim_a, s.dim_b), s.power(n), self.subnormalized
        )


@dataclass(frozen=True, eq=False)
class PureState:
    """Vector de estado normalizado (norma 1 dentro de 1e-10)."""

    amplitudes: np.ndarray
    split: Optional[BipartiteSplit] = None

    def __post_init__(self) -> None:
        v = _frozen_array(self.amplitudes)
        object.__setattr__(self, "amplitudes", v)
        if v.ndim != 1:
            raise DimensionMismatchError(
                f"amplitudes must be a vector, got shape {v.shape}", shape=list(v.shape)
            )
        if self.split is not None:
            self.split.require(v.shape[0])
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > NORM_TOL:
            raise InvariantViolationError(
                f"state norm {norm:.12g} differs from 1", norm=norm, tolerance=NORM_TOL
            )

    @classmethod
    def trusted(cls, amplitudes: np.ndarray, split: Optional[BipartiteSplit] = None) -> "PureState":
        obj = object.__new__(cls)
        object.__setattr__(obj, "amplitudes", _frozen_array(amplitudes))
        object.__setattr__(obj, "split", split)
        return obj

    @classmethod
    def normalized(cls, amplitudes: npt.ArrayLike, split: Optional[BipartiteSplit] = None) -> "PureState":
        v = np.asarray(amplitudes, dtype=np.complex128)
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            raise InvariantViolationError("cannot normalize the zero vector")
        return cls(v / norm, split)

    @property
    def dimension(self) -> int:
        return int(self.amplitudes.shape[0])

    def density(self) -> DensityMatrix:
        return DensityMatrix.from_pure(self)

    def require_split(self) -> BipartiteSplit:
        if self.split is None:
            raise DimensionMismatchError(
                "operation requires a bipartite split", dimension=self.dimension
            )
        return self.split

    def tensor_power(self, n: int) -> "PureState":
        """|ψ⟩^⊗n con split (d_a^n, d_b^n)."""
        if n < 1:
            raise InvariantViolationError(f"n must be ≥ 1, got {n}", n=n)
        check_explicit_dimension(self.dimension ** n, n=n)
        if n == 1:
            return self
        s = self.require_split()
        return PureState.trusted(ket_power(self.amplitudes, n, s.dim_a, s.dim_b), s.power(n))


@dataclass(frozen=True, eq=False)
class SchmidtForm:
    """
    Forma de Schmidt Σ_k √λ_k |a_k⟩⊗|b_k⟩.

    Invariantes:
    - coefficients ≥ 0, suman 1 dentro de 1e-9, orden no creciente
    - basis_a (d_a × r) y basis_b (d_b × r) con columnas ortonormales
    """

    coefficients: RealVector
    basis_a: ComplexMatrix
    basis_b: ComplexMatrix
    split: BipartiteSplit

    def __post_init__(self) -> None:
        c = _frozen_array(self.coefficients, dtype=np.float64)
        object.__setattr__(self, "coefficients", c)
        object.__setattr__(self, "basis_a", _frozen_array(self.basis_a))
        object.__setattr__(self, "basis_b", _frozen_array(self.basis_b))

        r = c.shape[0]
        if self.basis_a.shape[1] != r or self.basis_b.shape[1] != r:
            raise DimensionMismatchError(
                "Schmidt bases do not match coefficient count",
                coefficients=r,
                basis_a=list(self.basis_a.shape),
                basis_b=list(self.basis_b.shape),
            )
        if np.any(c < -1e-12):
            raise InvariantViolationError("negative Schmidt coefficient")
        if abs(float(c.sum()) - 1.0) > SCHMIDT_SUM_TOL:
            raise InvariantViolationError(
                f"Schmidt coefficients sum to {c.sum():.12g}", total=float(c.sum())
            )
        if np.any(np.diff(c) > 1e-12):
            raise InvariantViolationError("Schmidt coefficients are not non-increasing")

    @property
    def size(self) -> int:
        return int(self.coefficients.shape[0])

    @property
    def rank(self) -> int:
        return numerical_rank(self.coefficients)

    def top_mass(self, m: int) -> float:
        """q = Σ_{j≤M} λ_j."""
        return float(np.sum(self.coefficients[: max(m, 0)]))

    def truncation_matrix(self, m: int) -> ComplexMatrix:
        """Q_A: proyector sobre los M primeros vectores de Schmidt de A."""
        cols = self.basis_a[:, :m]
        return cols @ cols.conj().T

    def truncated_vector(self, m: int) -> np.ndarray:
        """(Q⊗I)|φ⟩ (no normalizado)."""
        root = np.sqrt(np.clip(self.coefficients[:m], 0.0, None))
        mat = (self.basis_a[:, :m] * root) @ self.basis_b[:, :m].T
        return mat.reshape(-1)

    def state(self) -> PureState:
        """Reconstruye Σ_k √λ_k |a_k⟩⊗|b_k⟩."""
        return PureState.trusted(self.truncated_vector(self.size), self.split)


# ============================================================================
# Operations
# ============================================================================

def partial_trace(
    rho: DensityMatrix, split: Optional[BipartiteSplit] = None, keep: Subsystem = "A"
) -> DensityMatrix:
    """
    Estado reducido sobre `keep`.

    Raises:
        DimensionMismatchError: Si el split no coincide con la dimensión de rho
    """
    s = split or rho.require_split()
    s.require(rho.dimension)
    reduced = partial_trace_matrix(rho.matrix, s.dim_a, s.dim_b, keep)
    return DensityMatrix.trusted(reduced, None, rho.subnormalized)


def schmidt_decompose(psi: PureState, split: Optional[BipartiteSplit] = None) -> SchmidtForm:
    """
    Descomposición de Schmidt vía SVD de la matriz (d_a × d_b) de amplitudes.

    Coeficientes no crecientes (orden de la SVD). La fase de cada par se fija
    dejando real positiva la mayor componente de |a_k⟩, así Q_A y Θ son
    reproducibles.
    """
    s = split or psi.require_split()
    s.require(psi.dimension)

    mat = psi.amplitudes.reshape(s.dim_a, s.dim_b)
    u, sv, vh = scipy.linalg.svd(mat, full_matrices=False)
    basis_a = u.copy()
    basis_b = vh.T.copy()

    for k in range(basis_a.shape[1]):
        idx = int(np.argmax(np.abs(basis_a[:, k])))
        pivot = basis_a[idx, k]
        if abs(pivot) > 0.0:
            phase = pivot / abs(pivot)
            basis_a[:, k] *= np.conj(phase)
            basis_b[:, k] *= phase

    coefficients = sv ** 2
    total = float(coefficients.sum())
    if total > 0.0:
        coefficients = coefficients / total
    return SchmidtForm(coefficients, basis_a, basis_b, s)


def maximally_entangled(m: int, split: BipartiteSplit) -> PureState:
    """
    |Ψ^M⟩ = Σ_{k<M} |k⟩|k⟩ / √M.

    Raises:
        DimensionMismatchError: Si M excede alguna dimensión local
    """
    if m < 1 or m > min(split.dim_a, split.dim_b):
        raise DimensionMismatchError(
            f"Schmidt rank {m} exceeds local dimensions {split.dim_a}x{split.dim_b}",
            m=m,
            dim_a=split.dim_a,
            dim_b=split.dim_b,
        )
    amps = np.zeros(split.dimension, dtype=np.complex128)
    for k in range(m):
        amps[k * split.dim_b + k] = 1.0 / np.sqrt(m)
    return PureState.trusted(amps, split)


def purify(rho: DensityMatrix) -> PureState:
    """
    Purificación canónica Σ_k √λ_k |v_k⟩⊗|k⟩_ref.

    La referencia tiene dimensión rank(rho) (tolerancia 1e-12); el split del
    resultado es (dim(rho), rank).
    """
    w = rho.eigenvalues
    v = rho.eigenvectors
    r = max(numerical_rank(w), 1)
    mat = v[:, :r] * np.sqrt(np.clip(w[:r], 0.0, None))
    amps = mat.reshape(-1)
    amps = amps / np.linalg.norm(amps)
    return PureState.trusted(amps, BipartiteSplit(rho.dimension, r))


__all__ = [
    "Subsystem",
    "BipartiteSplit",
    "DensityMatrix",
    "PureState",
    "SchmidtForm",
    "partial_trace",
    "schmidt_decompose",
    "maximally_entangled",
    "purify",
]
