"""
Ensembles and cq-Extensions
===========================

Ensemble: {p_i, |φ^i⟩} con split común. CqExtension: el mismo ensemble con
un registro de flags ortonormal R,

    ϱ_RAB = Σ_i p_i |i⟩⟨i|_R ⊗ |φ^i⟩⟨φ^i|_AB

Correspondencia con unitarios (purificación canónica):

    ψ̃_i = Σ_k U_ik √λ_k |e_k⟩        (filas de la descomposición)
    p_i  = ‖ψ̃_i‖²,  |φ^i⟩ = ψ̃_i / √p_i

Todo ensemble de K miembros que mezcla a ρ sale de algún U (K×K); el
optimizador de entanglement busca sobre estas filas.

Usage:
    rho = DensityMatrix(...)
    ens = ensemble_from_isometry(rho, random_unitary(8, rng), 8)
    u = isometry_from_ensemble(ens)          # vuelta
    cq = CqExtension(ens)
    cq.assemble_ra()                          # Σ p_i |i⟩⟨i| ⊗ ρ_A^i
"""
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
import scipy.linalg

from ..errors import DimensionMismatchError, InvariantViolationError
from ..qcore.linalg import (
    ComplexMatrix,
    check_explicit_dimension,
    hermitize,
    numerical_rank,
    partial_trace_matrix,
)
from ..qcore.measures import shannon_entropy
from ..qcore.serialization import StateDocument, document_from_members
from ..qcore.states import BipartiteSplit, DensityMatrix, PureState, SchmidtForm, schmidt_decompose

PROBABILITY_TOL = 1e-9
UNITARY_TOL = 1e-9

# Miembros con peso ≤ DROP_WEIGHT se descartan al construir desde filas
DROP_WEIGHT = 1e-14


@dataclass(frozen=True, eq=False)
class Ensemble:
    """
    Descomposición {p_i, |φ^i⟩} de un estado bipartito.

    Invariantes:
    - p_i ≥ 0, Σ p_i = 1 dentro de 1e-9
    - todos los miembros tienen dimensión split.dimension
    """

    probabilities: np.ndarray
    members: Tuple[PureState, ...]
    split: BipartiteSplit

    def __post_init__(self) -> None:
        p = np.array(self.probabilities, dtype=np.float64, copy=True)
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "members", tuple(self.members))

        if p.ndim != 1 or p.size != len(self.members) or p.size == 0:
            raise DimensionMismatchError(
                "ensemble needs one probability per member",
                probabilities=int(p.size),
                members=len(self.members),
            )
        if np.any(p < -PROBABILITY_TOL) or abs(float(p.sum()) - 1.0) > PROBABILITY_TOL:
            raise InvariantViolationError(
                f"ensemble probabilities sum to {p.sum():.12g}", total=float(p.sum())
            )
        for i, member in enumerate(self.members):
            if member.dimension != self.split.dimension:
                raise DimensionMismatchError(
                    f"member {i} has dimension {member.dimension}, split needs {self.split.dimension}",
                    member=i,
                )

    @classmethod
    def trusted(
        cls, probabilities: np.ndarray, members: Sequence[PureState], split: BipartiteSplit
    ) -> "Ensemble":
        obj = object.__new__(cls)
        p = np.array(probabilities, dtype=np.float64, copy=True)
        p.setflags(write=False)
        object.__setattr__(obj, "probabilities", p)
        object.__setattr__(obj, "members", tuple(members))
        object.__setattr__(obj, "split", split)
        return obj

    @classmethod
    def single(cls, psi: PureState) -> "Ensemble":
        """Ensemble trivial de un miembro (R de dimensión 1)."""
        return cls(np.ones(1), (psi,), psi.require_split())

    @property
    def size(self) -> int:
        return int(self.probabilities.size)

    @cached_property
    def vectors(self) -> ComplexMatrix:
        """Miembros como filas (K × d)."""
        return np.stack([m.amplitudes for m in self.members])

    def weighted_rows(self) -> ComplexMatrix:
        """Filas √p_i |φ^i⟩ (forma no normalizada)."""
        return self.vectors * np.sqrt(np.clip(self.probabilities, 0.0, None))[:, None]

    def mixture(self) -> DensityMatrix:
        """Σ p_i |φ^i⟩⟨φ^i| = W^T W*, W = filas ponderadas."""
        w = self.weighted_rows()
        return DensityMatrix.trusted(hermitize(w.T @ w.conj()), self.split)

    @cached_property
    def _schmidt(self) -> Tuple[SchmidtForm, ...]:
        return tuple(schmidt_decompose(m, self.split) for m in self.members)

    def member_schmidt(self) -> List[SchmidtForm]:
        return list(self._schmidt)

    def member_spectra(self) -> List[np.ndarray]:
        """Espectro de ρ_A^i (coeficientes de Schmidt) por miembro."""
        return [s.coefficients for s in self._schmidt]

    def member_entropies(self) -> np.ndarray:
        return np.array([shannon_entropy(s) for s in self.member_spectra()])

    def tensor(self, other: "Ensemble") -> "Ensemble":
        """Ensemble producto con orden (A A′, B B′)."""
        a1, b1 = self.split.dim_a, self.split.dim_b
        a2, b2 = other.split.dim_a, other.split.dim_b
        split = self.split.combine(other.split)
        probs = np.outer(self.probabilities, other.probabilities).reshape(-1)
        members = []
        for u in self.members:
            for v in other.members:
                t = np.multiply.outer(
                    u.amplitudes.reshape(a1, b1), v.amplitudes.reshape(a2, b2)
                )
                members.append(PureState.trusted(t.transpose(0, 2, 1, 3).reshape(-1), split))
        return Ensemble.trusted(probs, members, split)

    def to_document(self) -> StateDocument:
        return document_from_members(self.probabilities, self.members, self.split)

    @classmethod
    def from_document(cls, document: StateDocument) -> "Ensemble":
        split = document.split
        if split is None:
            raise DimensionMismatchError("ensemble documents need dims [d_a, d_b]", dims=document.dims)
        probs, members = document.members()
        return cls(probs, tuple(members), split)


@dataclass(frozen=True, eq=False)
class CqExtension:
    """
    ϱ_RAB = Σ p_i |i⟩⟨i| ⊗ |φ^i⟩⟨φ^i| con flags ortonormales.

    flag_dimension = cantidad de miembros. Las matrices ensambladas existen
    solo como oráculo; spectra trabaja por bloques.
    """

    ensemble: Ensemble

    @property
    def flag_dimension(self) -> int:
        return self.ensemble.size

    @property
    def probabilities(self) -> np.ndarray:
        return self.ensemble.probabilities

    @property
    def split(self) -> BipartiteSplit:
        return self.ensemble.split

    def member_spectra(self) -> List[np.ndarray]:
        return self.ensemble.member_spectra()

    def member_reduced(self) -> List[ComplexMatrix]:
        """ρ_A^i por miembro."""
        s = self.split
        return [
            partial_trace_matrix(np.outer(m.amplitudes, m.amplitudes.conj()), s.dim_a, s.dim_b, "A")
            for m in self.ensemble.members
        ]

    def _block_diagonal(self, blocks: Sequence[ComplexMatrix]) -> ComplexMatrix:
        weighted = [p * b for p, b in zip(self.probabilities, blocks)]
        return scipy.linalg.block_diag(*weighted).astype(np.complex128)

    def assemble(self) -> DensityMatrix:
        """ϱ_RAB sobre R ⊗ (AB), split (K, d_a·d_b)."""
        k, d = self.flag_dimension, self.split.dimension
        check_explicit_dimension(k * d, component="cq_extension")
        blocks = [np.outer(m.amplitudes, m.amplitudes.conj()) for m in self.ensemble.members]
        return DensityMatrix.trusted(self._block_diagonal(blocks), BipartiteSplit(k, d))

    def assemble_ra(self) -> DensityMatrix:
        """ϱ_RA = Σ p_i |i⟩⟨i| ⊗ ρ_A^i, split (K, d_a)."""
        k = self.flag_dimension
        check_explicit_dimension(k * self.split.dim_a, component="cq_extension")
        return DensityMatrix.trusted(
            self._block_diagonal(self.member_reduced()), BipartiteSplit(k, self.split.dim_a)
        )

    def flag_state(self) -> DensityMatrix:
        """ϱ_R = diag(p)."""
        return DensityMatrix.trusted(np.diag(self.probabilities.astype(np.complex128)))

    def reference_ra(self) -> ComplexMatrix:
        """ϱ_R ⊗ I_A."""
        return np.kron(
            np.diag(self.probabilities).astype(np.complex128),
            np.eye(self.split.dim_a, dtype=np.complex128),
        )

    def marginal(self) -> DensityMatrix:
        """Tr_R ϱ_RAB = mezcla del ensemble."""
        return self.ensemble.mixture()


# ============================================================================
# Unitary ↔ ensemble correspondence
# ============================================================================

def _canonical_factor(rho: DensityMatrix) -> Tuple[ComplexMatrix, int]:
    """(√λ_k e_k^T como filas, rango) de la purificación canónica."""
    w = rho.eigenvalues
    v = rho.eigenvectors
    r = max(numerical_rank(w), 1)
    return (v[:, :r] * np.sqrt(np.clip(w[:r], 0.0, None))).T, r


def _require_unitary(unitary: npt.ArrayLike, k: int) -> ComplexMatrix:
    u = np.asarray(unitary, dtype=np.complex128)
    if u.shape != (k, k):
        raise DimensionMismatchError(
            f"unitary shape {u.shape} does not match member_count {k}", shape=list(u.shape), k=k
        )
    deviation = float(np.max(np.abs(u.conj().T @ u - np.eye(k)), initial=0.0))
    if deviation > UNITARY_TOL:
        raise InvariantViolationError(
            f"reference operator is not unitary (deviation {deviation:.3e})", deviation=deviation
        )
    return u


def decomposition_rows(rho: DensityMatrix, unitary: npt.ArrayLike) -> ComplexMatrix:
    """
    Filas ψ̃_i = Σ_k U_ik √λ_k e_k (K × d).

    Raises:
        InvariantViolationError: Si K < rank(rho) o U no es unitario
    """
    factor, r = _canonical_factor(rho)
    u = np.asarray(unitary, dtype=np.complex128)
    k = u.shape[0] if u.ndim == 2 else 0
    if k < r:
        raise InvariantViolationError(
            f"member_count {k} is below rank {r}", member_count=k, rank=r
        )
    u = _require_unitary(u, k)
    return u[:, :r] @ factor


def ensemble_from_rows(rows: ComplexMatrix, split: BipartiteSplit) -> Ensemble:
    """Ensemble de filas no normalizadas; descarta pesos ≤ 1e-14."""
    weights = np.real(np.einsum("ij,ij->i", rows.conj(), rows))
    keep = np.flatnonzero(weights > DROP_WEIGHT)
    if keep.size == 0:
        raise InvariantViolationError("decomposition has no member with positive weight")
    p = weights[keep]
    members = [
        PureState.trusted(rows[i] / np.sqrt(weights[i]), split) for i in keep
    ]
    return Ensemble.trusted(p / p.sum(), members, split)


def ensemble_from_isometry(rho: DensityMatrix, unitary: npt.ArrayLike, member_count: int) -> Ensemble:
    """
    Ensemble de tamaño member_count inducido por U sobre la purificación canónica.

    rho puro → un solo miembro (el vector de rho) sin importar U.

    Raises:
        InvariantViolationError: member_count < rank(rho) o U no unitario
    """
    split = rho.require_split()
    r = max(rho.rank, 1)
    if member_count < r:
        raise InvariantViolationError(
            f"member_count {member_count} is below rank {r}", member_count=member_count, rank=r
        )
    u = _require_unitary(unitary, member_count)
    if r == 1:
        return Ensemble.single(PureState.trusted(rho.eigenvectors[:, 0], split))
    return ensemble_from_rows(decomposition_rows(rho, u), split)


def isometry_from_ensemble(
    ensemble: Ensemble,
    member_count: Optional[int] = None,
    reference: Optional[DensityMatrix] = None,
) -> ComplexMatrix:
    """
    Unitario U (K×K) con ensemble_from_isometry(mezcla, U, K) == ensemble.

    V_ik = ⟨e_k|ψ̃_i⟩/√λ_k tiene columnas ortonormales; se rellena con filas
    cero hasta K y se completa con una base del complemento ortogonal.

    reference fija la base propia (default: la mezcla del ensemble); pasar el
    mismo estado que luego recibe decomposition_rows evita ambigüedades en
    autoespacios degenerados.

    Raises:
        InvariantViolationError: Si K < tamaño del ensemble o K < rango
    """
    rho = ensemble.mixture() if reference is None else reference
    _, r = _canonical_factor(rho)
    k = ensemble.size if member_count is None else member_count
    if k < ensemble.size or k < r:
        raise InvariantViolationError(
            f"member_count {k} cannot host {ensemble.size} members of a rank-{r} state",
            member_count=k,
            members=ensemble.size,
            rank=r,
        )
    w = rho.eigenvalues[:r]
    e = rho.eigenvectors[:, :r]
    v = np.zeros((k, r), dtype=np.complex128)
    v[: ensemble.size] = (ensemble.weighted_rows() @ e.conj()) / np.sqrt(w)
    if r == k:
        return v
    complement = scipy.linalg.null_space(v.conj().T)
    return np.hstack([v, complement])


def eigen_ensemble(rho: DensityMatrix) -> Ensemble:
    """Descomposición espectral (baseline del optimizador)."""
    r = max(rho.rank, 1)
    return ensemble_from_isometry(rho, np.eye(r), r)


__all__ = [
    "Ensemble",
    "CqExtension",
    "decomposition_rows",
    "ensemble_from_rows",
    "ensemble_from_isometry",
    "isometry_from_ensemble",
    "eigen_ensemble",
]
