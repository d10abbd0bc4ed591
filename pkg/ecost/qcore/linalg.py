"""
Dense Complex Linear Algebra
============================

Primitivas sobre matrices complejas densas (numpy complex128).

Convenciones:
- ComplexMatrix = np.ndarray 2D complejo, row-major
- Tolerancia de rango/soporte: 1e-12 relativa al autovalor de mayor módulo
- Autovalores siempre en orden no creciente
"""
from typing import Optional, Tuple

import numpy as np
import numpy.typing as npt
import scipy.linalg
from scipy.stats import unitary_group

from ..errors import DimensionCapError, DimensionMismatchError, InvariantViolationError

ComplexMatrix = npt.NDArray[np.complex128]
RealVector = npt.NDArray[np.float64]

HERMITIAN_TOL = 1e-10
RANK_TOL = 1e-12

# Dimensión máxima para construcciones explícitas (Kronecker, ρ^⊗n)
EXPLICIT_DIMENSION_CAP = 4096


def as_matrix(a: npt.ArrayLike) -> ComplexMatrix:
    """Convierte a matriz compleja 2D; rechaza otras formas."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatchError(
            f"expected a 2D matrix, got shape {m.shape}", shape=list(m.shape)
        )
    return m


def as_square(a: npt.ArrayLike) -> ComplexMatrix:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(
            f"expected a square matrix, got shape {m.shape}", shape=list(m.shape)
        )
    return m


def require_same_shape(a: ComplexMatrix, b: ComplexMatrix) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"operand shapes differ: {a.shape} vs {b.shape}",
            left=list(a.shape),
            right=list(b.shape),
        )


def is_hermitian(a: ComplexMatrix, tol: float = HERMITIAN_TOL) -> bool:
    if a.shape[0] != a.shape[1]:
        return False
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol)


def require_hermitian(a: ComplexMatrix, tol: float = HERMITIAN_TOL) -> None:
    if not is_hermitian(a, tol):
        deviation = float(np.max(np.abs(a - a.conj().T), initial=0.0))
        raise InvariantViolationError(
            f"matrix is not Hermitian (max |A - A†| = {deviation:.3e})",
            deviation=deviation,
            tolerance=tol,
        )


def hermitize(a: ComplexMatrix) -> ComplexMatrix:
    return 0.5 * (a + a.conj().T)


def tensor_product(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexMatrix:
    """Producto de Kronecker estándar; las dimensiones se multiplican."""
    return np.kron(as_matrix(a), as_matrix(b))


def hermitian_eig(a: npt.ArrayLike) -> Tuple[RealVector, ComplexMatrix]:
    """
    Descomposición espectral de una matriz Hermitiana.

    Returns:
        (eigenvalues no crecientes, eigenvectors como columnas ortonormales)

    Raises:
        InvariantViolationError: Si A no es Hermitiana dentro de 1e-10
    """
    m = as_square(a)
    require_hermitian(m)
    w, v = scipy.linalg.eigh(hermitize(m))
    return w[::-1].copy(), v[:, ::-1].copy()


def hermitian_eigvals(a: npt.ArrayLike) -> RealVector:
    """Autovalores (no crecientes) sin autovectores."""
    m = as_square(a)
    require_hermitian(m)
    w = scipy.linalg.eigvalsh(hermitize(m))
    return w[::-1].copy()


def rank_threshold(eigenvalues: RealVector) -> float:
    scale = float(np.max(np.abs(eigenvalues), initial=0.0))
    return RANK_TOL * scale


def numerical_rank(eigenvalues: RealVector) -> int:
    if eigenvalues.size == 0:
        return 0
    return int(np.count_nonzero(eigenvalues > rank_threshold(eigenvalues)))


def psd_sqrt(a: ComplexMatrix) -> ComplexMatrix:
    """Raíz cuadrada PSD; autovalores bajo la tolerancia de rango cuentan como 0."""
    w, v = scipy.linalg.eigh(hermitize(a))
    w = np.where(w > rank_threshold(w), w, 0.0)
    root = np.sqrt(w)
    return (v * root) @ v.conj().T


def partial_trace_matrix(
    m: ComplexMatrix, dim_a: int, dim_b: int, keep: str = "A"
) -> ComplexMatrix:
    """Traza parcial de un operador sobre A⊗B, conservando `keep`."""
    if m.shape != (dim_a * dim_b, dim_a * dim_b):
        raise DimensionMismatchError(
            f"operator shape {m.shape} does not match split {dim_a}x{dim_b}",
            shape=list(m.shape),
            dim_a=dim_a,
            dim_b=dim_b,
        )
    t = m.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise InvariantViolationError(f"unknown subsystem '{keep}'", keep=keep)


def interleaved_power_permutation(n: int, dim_a: int, dim_b: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """
    Permutación de ejes que lleva (A1 B1 A2 B2 ...) a (A1..An B1..Bn).

    Returns:
        (shape intercalada, orden de ejes para transpose)
    """
    shape = tuple([dim_a, dim_b] * n)
    order = tuple(range(0, 2 * n, 2)) + tuple(range(1, 2 * n, 2))
    return shape, order


def ket_power(amplitudes: np.ndarray, n: int, dim_a: int, dim_b: int) -> np.ndarray:
    """|ψ⟩^⊗n con factores reordenados como A^n ⊗ B^n."""
    vec = amplitudes
    for _ in range(n - 1):
        vec = np.kron(vec, amplitudes)
    shape, order = interleaved_power_permutation(n, dim_a, dim_b)
    return vec.reshape(shape).transpose(order).reshape(-1)


def operator_power(m: ComplexMatrix, n: int, dim_a: int, dim_b: int) -> ComplexMatrix:
    """ρ^⊗n con factores reordenados como A^n ⊗ B^n (ket y bra)."""
    total = m
    for _ in range(n - 1):
        total = np.kron(total, m)
    shape, order = interleaved_power_permutation(n, dim_a, dim_b)
    full_order = order + tuple(2 * n + k for k in order)
    d = total.shape[0]
    return total.reshape(shape + shape).transpose(full_order).reshape(d, d)


def pad_operator_b(m: ComplexMatrix, dim_a: int, dim_b: int, extra: int = 1) -> ComplexMatrix:
    """Embebe un operador de A⊗B en A⊗(B ⊕ C^extra) con ceros."""
    t = m.reshape(dim_a, dim_b, dim_a, dim_b)
    padded = np.zeros((dim_a, dim_b + extra, dim_a, dim_b + extra), dtype=np.complex128)
    padded[:, :dim_b, :, :dim_b] = t
    d = dim_a * (dim_b + extra)
    return padded.reshape(d, d)


# ============================================================================
# Random generators (seeded)
# ============================================================================

def random_unitary(d: int, rng: np.random.Generator) -> ComplexMatrix:
    """Unitario Haar-aleatorio."""
    if d == 1:
        phase = np.exp(2j * np.pi * rng.random())
        return np.array([[phase]], dtype=np.complex128)
    return np.asarray(unitary_group.rvs(d, random_state=rng), dtype=np.complex128)


def random_hermitian(d: int, rng: np.random.Generator, scale: float = 1.0) -> ComplexMatrix:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * hermitize(g)


def random_density_matrix(
    d: int, rng: np.random.Generator, rank: Optional[int] = None
) -> ComplexMatrix:
    """Matriz densidad Ginibre de rango `rank` (default: rango completo)."""
    k = d if rank is None else rank
    if not 1 <= k <= d:
        raise InvariantViolationError(f"rank must be in [1, {d}], got {k}", rank=k, dimension=d)
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_pure_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def check_explicit_dimension(dimension: int, cap: int = EXPLICIT_DIMENSION_CAP, **context: object) -> None:
    if dimension > cap:
        raise DimensionCapError(
            f"explicit dimension {dimension} exceeds cap {cap}",
            dimension=dimension,
            cap=cap,
            **context,
        )
