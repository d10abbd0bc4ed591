"""
Type-Class Spectra of Tensor Powers
===================================

Espectro de ρ^⊗n sin construir matrices: cada composición (c_1..c_k) de n
sobre los k autovalores distintos aporta el producto Π λ_j^{c_j} con
multiplicidad multinomial n!/Π c_j! · Π m_j^{c_j} (m_j = degeneración base).

Diseño:
- Productos en log-space (0.1^30 no hace underflow en la acumulación)
- Multiplicidades como int de Python (d^n exacto para cualquier n)
- Merge de autovalores base a tolerancia relativa 1e-12
- SpectralTail: espectro ponderado ordenado que evalúa toda una grilla γ
  con una sola pasada de sumas acumuladas
"""
import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterator, List, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from scipy.special import gammaln

from ..errors import DimensionCapError, InvariantViolationError

MERGE_TOL = 1e-12
PROBABILITY_TOL = 1e-9

# Cap de composiciones enumeradas (C(n+k-1, k-1))
COMPOSITION_CAP = 2_000_000


def _safe_log(values: np.ndarray) -> np.ndarray:
    out = np.full(values.shape, -np.inf)
    positive = values > 0.0
    out[positive] = np.log(values[positive])
    return out


def merge_base_values(values: npt.ArrayLike, tol: float = MERGE_TOL) -> Tuple[np.ndarray, List[int]]:
    """
    Agrupa autovalores base iguales a tolerancia relativa.

    Returns:
        (valores distintos no crecientes, degeneración de cada uno)
    """
    v = np.sort(np.clip(np.asarray(values, dtype=np.float64), 0.0, None))[::-1]
    distinct: List[float] = []
    counts: List[int] = []
    for x in v:
        if distinct and abs(distinct[-1] - x) <= tol * max(distinct[-1], x):
            counts[-1] += 1
        else:
            distinct.append(float(x))
            counts.append(1)
    return np.asarray(distinct), counts


def composition_count(n: int, k: int) -> int:
    return math.comb(n + k - 1, k - 1)


def compositions(n: int, k: int) -> Iterator[Tuple[int, ...]]:
    """Composiciones de n en k partes ≥ 0 (orden de combinations_with_replacement)."""
    for combo in combinations_with_replacement(range(k), n):
        counts = Counter(combo)
        yield tuple(counts.get(j, 0) for j in range(k))


def composition_matrix(n: int, k: int) -> np.ndarray:
    """Todas las composiciones como matriz (T × k) de enteros."""
    total = composition_count(n, k)
    if total > COMPOSITION_CAP:
        raise DimensionCapError(
            f"{total} type classes exceed cap {COMPOSITION_CAP}",
            n=n,
            symbols=k,
            cap=COMPOSITION_CAP,
        )
    return np.array(list(compositions(n, k)), dtype=np.int64).reshape(total, k)


def multinomial(n: int, counts: Sequence[int]) -> int:
    result = 1
    remaining = n
    for c in counts:
        result *= math.comb(remaining, c)
        remaining -= c
    return result


def log_multinomials(n: int, counts: np.ndarray) -> np.ndarray:
    return gammaln(n + 1) - np.sum(gammaln(counts + 1), axis=1)


def weighted_log_sum(counts: np.ndarray, logs: np.ndarray) -> np.ndarray:
    """Σ_j c_j·log_j con 0·(−∞) = 0."""
    finite = np.isfinite(logs)
    out = counts[:, finite] @ logs[finite] if np.any(finite) else np.zeros(counts.shape[0])
    out = np.asarray(out, dtype=np.float64)
    if not np.all(finite):
        dead = counts[:, ~finite].sum(axis=1) > 0
        out[dead] = -np.inf
    return out


@dataclass(frozen=True, eq=False)
class TypeClassSpectrum:
    """
    Espectro de ρ^⊗n agrupado por tipo.

    Invariantes:
    - Σ multiplicity·value = 1 dentro de 1e-9
    - Σ multiplicities = d^n
    """

    distinct_values: np.ndarray
    multiplicities: Tuple[int, ...]
    log_values: np.ndarray
    n: int
    base_dimension: int

    def __post_init__(self) -> None:
        total_count = sum(self.multiplicities)
        if total_count != self.base_dimension ** self.n:
            raise InvariantViolationError(
                f"multiplicities sum to {total_count}, expected {self.base_dimension}^{self.n}",
            )
        mass = self.total_mass
        if abs(mass - 1.0) > PROBABILITY_TOL:
            raise InvariantViolationError(f"type-class mass {mass:.12g} differs from 1", mass=mass)

    @property
    def weights(self) -> np.ndarray:
        """Multiplicidades como float (para álgebra vectorizada)."""
        return np.array([float(m) for m in self.multiplicities])

    @property
    def total_mass(self) -> float:
        log_mass = np.log(self.weights) + self.log_values
        return float(np.sum(np.exp(log_mass)))

    def top_mass(self, m: int) -> float:
        """Σ de los M mayores autovalores de ρ^⊗n (contando multiplicidad)."""
        return top_mass(self.log_values, self.weights, m)

    def as_dict(self) -> dict:
        return {float(v): int(c) for v, c in zip(self.distinct_values, self.multiplicities)}


def iid_spectrum(eigenvalues: npt.ArrayLike, n: int) -> TypeClassSpectrum:
    """
    Espectro de ρ^⊗n por clases de tipo.

    La cantidad de valores es C(n+k−1, k−1) para k autovalores base distintos
    (merge a 1e-12 relativo). Ordenado por valor no creciente.

    Raises:
        InvariantViolationError: Si eigenvalues no es un vector de probabilidad
    """
    p = np.asarray(eigenvalues, dtype=np.float64)
    if n < 1:
        raise InvariantViolationError(f"n must be ≥ 1, got {n}", n=n)
    if np.any(p < -PROBABILITY_TOL) or abs(float(p.sum()) - 1.0) > PROBABILITY_TOL:
        raise InvariantViolationError(
            "eigenvalues must form a probability vector", total=float(p.sum())
        )

    base, degeneracy = merge_base_values(p)
    counts = composition_matrix(n, base.size)
    logs = weighted_log_sum(counts, _safe_log(base))

    multiplicities = [
        multinomial(n, row) * math.prod(degeneracy[j] ** int(c) for j, c in enumerate(row))
        for row in counts.tolist()
    ]

    order = np.argsort(-logs, kind="stable")
    logs = logs[order]
    return TypeClassSpectrum(
        distinct_values=np.exp(logs),
        multiplicities=tuple(multiplicities[i] for i in order),
        log_values=logs,
        n=n,
        base_dimension=p.size,
    )


def top_mass(log_values: np.ndarray, weights: np.ndarray, m: float) -> float:
    """
    Masa de los M mayores valores de un espectro con multiplicidades.

    log_values no necesita estar ordenado.
    """
    if m <= 0:
        return 0.0
    order = np.argsort(-log_values, kind="stable")
    lv = log_values[order]
    w = weights[order]
    cumulative = np.cumsum(w)
    full = int(np.searchsorted(cumulative, float(m), side="right"))
    mass = float(np.sum(np.exp(np.log(w[:full]) + lv[:full]))) if full else 0.0
    if full < lv.size:
        taken = cumulative[full - 1] if full else 0.0
        remainder = float(m) - float(taken)
        if remainder > 0.0:
            mass += remainder * float(np.exp(lv[full]))
    return min(mass, 1.0)


def tensor_log_spectra(parts: Sequence[Tuple[np.ndarray, np.ndarray]]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Espectro del producto tensorial de espectros (log_values, weights).

    Returns:
        (log_values, weights) del producto, aplanados
    """
    logs = np.zeros(1)
    weights = np.ones(1)
    for part_logs, part_weights in parts:
        logs = np.add.outer(logs, part_logs).reshape(-1)
        weights = np.multiply.outer(weights, part_weights).reshape(-1)
    return logs, weights


@dataclass(frozen=True, eq=False)
class SpectralTail:
    """
    Espectro ponderado para evaluar f(t) = Σ_{key ≥ t} mass − e^t·Σ_{key ≥ t} reference.

    Cubre todos los caminos rápidos:
    - par conmutante (ρ, ω):  key = ln r − ln w, mass = m·r, reference = m·w
    - entropía (ω = I):       key = ln λ,        mass = m·λ, reference = m
    - bloques cq:             key = ln λ,        mass = p·m·λ, reference = p·m

    con t = nγ en el eje de divergencia.
    """

    keys: np.ndarray
    cumulative_mass: np.ndarray
    cumulative_reference: np.ndarray

    @classmethod
    def from_terms(
        cls, keys: np.ndarray, mass: np.ndarray, reference: np.ndarray
    ) -> "SpectralTail":
        keys = np.asarray(keys, dtype=np.float64)
        mass = np.asarray(mass, dtype=np.float64)
        reference = np.asarray(reference, dtype=np.float64)
        live = ~np.isnan(keys) & ((mass > 0.0) | (reference > 0.0))
        keys, mass, reference = keys[live], mass[live], reference[live]
        order = np.argsort(-keys, kind="stable")
        return cls(
            keys=keys[order],
            cumulative_mass=np.concatenate([[0.0], np.cumsum(mass[order])]),
            cumulative_reference=np.concatenate([[0.0], np.cumsum(reference[order])]),
        )

    @classmethod
    def entropy(cls, log_values: np.ndarray, weights: np.ndarray) -> "SpectralTail":
        """Cola de ρ contra la identidad."""
        return cls.from_terms(log_values, weights * np.exp(log_values), weights)

    def evaluate(self, thresholds: npt.ArrayLike) -> np.ndarray:
        """f(t) para cada t (eje de divergencia, t = nγ)."""
        t = np.asarray(thresholds, dtype=np.float64)
        idx = np.searchsorted(-self.keys, -t, side="right")
        with np.errstate(over="ignore", invalid="ignore"):
            ref = self.cumulative_reference[idx]
            scaled = np.where(ref > 0.0, np.exp(t) * ref, 0.0)
        return np.clip(self.cumulative_mass[idx] - scaled, 0.0, None)


def commuting_pair_tail(
    rho_eigs: npt.ArrayLike, omega_eigs: npt.ArrayLike, n: int
) -> SpectralTail:
    """
    Cola conjunta de (ρ^⊗n, ω^⊗n) para un par diagonal en base común.

    Los símbolos base son los pares (r_x, w_x); pares repetidos se agrupan.
    """
    r = np.clip(np.asarray(rho_eigs, dtype=np.float64), 0.0, None)
    w = np.clip(np.asarray(omega_eigs, dtype=np.float64), 0.0, None)

    symbols: List[Tuple[float, float]] = []
    degeneracy: List[int] = []
    for pair in sorted(zip(r.tolist(), w.tolist()), reverse=True):
        if symbols and all(
            abs(a - b) <= MERGE_TOL * max(a, b, 1e-300) for a, b in zip(symbols[-1], pair)
        ):
            degeneracy[-1] += 1
        else:
            symbols.append(pair)
            degeneracy.append(1)

    base_r = _safe_log(np.array([s[0] for s in symbols]))
    base_w = _safe_log(np.array([s[1] for s in symbols]))
    counts = composition_matrix(n, len(symbols))
    log_mult = log_multinomials(n, counts) + counts @ np.log(np.asarray(degeneracy, dtype=np.float64))
    log_r = weighted_log_sum(counts, base_r)
    log_w = weighted_log_sum(counts, base_w)

    with np.errstate(invalid="ignore"):
        keys = log_r - log_w
    return SpectralTail.from_terms(keys, np.exp(log_mult + log_r), np.exp(log_mult + log_w))


__all__ = [
    "TypeClassSpectrum",
    "SpectralTail",
    "iid_spectrum",
    "commuting_pair_tail",
    "merge_base_values",
    "compositions",
    "composition_count",
    "multinomial",
    "top_mass",
    "tensor_log_spectra",
]
