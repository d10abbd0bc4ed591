"""
Dilution Protocol
=================

Simulación exacta del protocolo de dilución de la lemma de codificación:

    1. Alice prepara ϱ_RAA′ (flag R clásico) y aplica Θ sobre RA′
    2. Teleporta A′ a Bob con un recurso de rango M (efecto tijera)
    3. Envía R por canal clásico (copia perfecta del índice)
    4. Bob aplica Θ† sobre RB

Fidelidad cerrada de la lemma de fidelidad:

    F² = Σ_i p_i Σ_{j≤M} λ_j^i

y curva de alcanzabilidad i.i.d. por clases de tipo (sin matrices
explícitas), con M_n = ⌈e^{nR}⌉.

Usage:
    report = simulate_dilution(ensemble, m=2, variant="weyl-teleport")
    report.f2_sim, report.f2_formula

    points = achievability_curve_iid(psi, rates=[0.4], n_values=[4, 8, 16])
"""
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import scipy.linalg

from ..errors import InvariantViolationError
from ..parallel import parallel_map
from ..qcore.linalg import ComplexMatrix, pad_operator_b
from ..qcore.measures import fidelity, nats_to_bits
from ..qcore.states import BipartiteSplit, DensityMatrix, PureState
from ..spectra.projectors import SpectralProjector
from ..spectra.type_classes import (
    composition_matrix,
    iid_spectrum,
    log_multinomials,
    tensor_log_spectra,
    top_mass,
)
from ..entanglement.ensembles import Ensemble
from .teleport import ScissorsVariant, member_theta, require_rank, require_variant, scissors_channel

logger = logging.getLogger(__name__)

# Guarda relativa para ⌈e^{nR}⌉ frente a overshoot de punto flotante
RANK_GUARD = 1e-12


@dataclass(frozen=True, eq=False)
class TruncationProjector:
    """Q_A^{M,i}: proyector sobre los M primeros vectores de Schmidt de A del miembro i."""

    member_index: int
    matrix: SpectralProjector
    rank: int


def truncation_projectors(ensemble: Ensemble, m: int) -> List[TruncationProjector]:
    """
    Un Q_A por miembro; rango exactamente M (empates según el orden de qcore).

    Raises:
        DimensionMismatchError: M fuera de [1, min(d_a, d_b)]
    """
    require_rank(m, ensemble.split)
    return [
        TruncationProjector(i, SpectralProjector(form.truncation_matrix(m), ensemble.split.dim_a), m)
        for i, form in enumerate(ensemble.member_schmidt())
    ]


def theta_unitary(ensemble: Ensemble) -> ComplexMatrix:
    """
    Θ_RA′ = Σ_j |j⟩⟨j|_R ⊗ Θ_j, con Θ_j la rotación de la base de Schmidt
    de B del miembro j a la base canónica.

    Returns:
        Matriz (K·d_b × K·d_b), unitaria dentro de 1e-9
    """
    blocks = [member_theta(form) for form in ensemble.member_schmidt()]
    return scipy.linalg.block_diag(*blocks).astype(np.complex128)


def dilution_fidelity_formula(ensemble: Ensemble, m: int) -> float:
    """F = √(Σ_i p_i Σ_{j≤M} λ_j^i)."""
    require_rank(m, ensemble.split)
    masses = np.array([form.top_mass(m) for form in ensemble.member_schmidt()])
    value = float(np.dot(ensemble.probabilities, masses))
    return math.sqrt(min(max(value, 0.0), 1.0))


@dataclass(frozen=True)
class DilutionReport:
    """
    Resultado de una simulación.

    lower_bound = (Σ p_i q_i)², upper_bound = Σ p_i q_i; fidelity_flagged es
    la fidelidad con el registro R conservado.
    """

    m_rank: int
    n: int
    rate_nats: float
    fidelity_sim: float
    fidelity_formula: float
    lower_bound: float
    upper_bound: float
    variant: str
    fidelity_flagged: float

    @property
    def f2_sim(self) -> float:
        return self.fidelity_sim ** 2

    @property
    def f2_formula(self) -> float:
        return self.fidelity_formula ** 2

    @property
    def within_bounds(self) -> bool:
        return self.lower_bound - 1e-9 <= self.f2_sim <= self.upper_bound + 1e-9

    def to_row(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "rate_nats": self.rate_nats,
            "rate_bits": nats_to_bits(self.rate_nats),
            "m_rank": self.m_rank,
            "f2_sim": self.f2_sim,
            "f2_formula": self.f2_formula,
            "f2_lower": self.lower_bound,
            "f2_upper": self.upper_bound,
            "variant": self.variant,
            "f2_flagged": self.fidelity_flagged ** 2,
        }


def simulate_dilution(
    ensemble: Ensemble, m: int, variant: ScissorsVariant = "orthogonal-flag", n: int = 1
) -> DilutionReport:
    """
    Corre Θ → tijeras → envío de R → Θ† y compara contra la mezcla del ensemble.

    Args:
        ensemble: Descomposición del estado objetivo (de nivel n si n > 1)
        m: Rango del recurso
        variant: orthogonal-flag | weyl-teleport
        n: Copias que representa el ensemble (solo fija rate = ln M / n)

    Raises:
        DimensionMismatchError: M fuera de rango
        InvariantViolationError: variante desconocida o salida no es un estado
    """
    split = ensemble.split
    require_rank(m, split)
    require_variant(variant)
    if n < 1:
        raise InvariantViolationError(f"n must be ≥ 1, got {n}", n=n)
    d_a, d_b = split.dim_a, split.dim_b

    forms = ensemble.member_schmidt()
    outputs = [scissors_channel(form, m, variant, member_theta(form)) for form in forms]
    p = ensemble.probabilities
    averaged = sum((p_i * out.matrix for p_i, out in zip(p, outputs)), np.zeros_like(outputs[0].matrix))
    extended = BipartiteSplit(d_a, d_b + 1)
    output = DensityMatrix(averaged, extended)

    target = DensityMatrix.trusted(pad_operator_b(ensemble.mixture().matrix, d_a, d_b), extended)
    f_sim = fidelity(target, output)

    flagged = 0.0
    for p_i, member, out in zip(p, ensemble.members, outputs):
        vec = pad_operator_b(np.outer(member.amplitudes, member.amplitudes.conj()), d_a, d_b)
        flagged += p_i * fidelity(DensityMatrix.trusted(vec, extended), out)

    q = np.array([form.top_mass(m) for form in forms])
    mass = float(np.dot(p, q))
    report = DilutionReport(
        m_rank=m,
        n=n,
        rate_nats=math.log(m) / n,
        fidelity_sim=f_sim,
        fidelity_formula=dilution_fidelity_formula(ensemble, m),
        lower_bound=mass ** 2,
        upper_bound=mass,
        variant=variant,
        fidelity_flagged=min(flagged, 1.0),
    )
    logger.debug(
        f"✂️ Dilución M={m} ({variant}): F²={report.f2_sim:.6f}",
        extra={
            "component": "dilution",
            "event": "dilution_simulated",
            "m_rank": m,
            "variant": variant,
            "f2_sim": report.f2_sim,
            "f2_formula": report.f2_formula,
        },
    )
    return report


# ============================================================================
# i.i.d. achievability
# ============================================================================

def rank_for_rate(n: int, rate_nats: float, max_rank: Optional[int] = None) -> int:
    """
    M_n = ⌈e^{nR}⌉, saturado en max_rank.

    La guarda relativa 1e-12 evita que e^{ln M} = M(1 + ε) suba a M + 1.
    """
    exponent = n * rate_nats
    if max_rank is not None and exponent >= math.log(max_rank) - RANK_GUARD:
        return max_rank
    if exponent > 700.0:
        raise InvariantViolationError(
            f"rank e^{exponent:.1f} is not representable; pass max_rank", exponent=exponent
        )
    m = max(1, math.ceil(math.exp(exponent) * (1.0 - RANK_GUARD)))
    return m if max_rank is None else min(m, max_rank)


@dataclass(frozen=True)
class AchievabilityPoint:
    """f2 es la fidelidad cerrada Σ p_seq q_seq; la curva no simula el canal."""

    n: int
    rate_nats: float
    m_rank: int
    f2: float

    def to_row(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "rate_nats": self.rate_nats,
            "rate_bits": nats_to_bits(self.rate_nats),
            "m_rank": self.m_rank,
            "f2_formula": self.f2,
        }


def _member_type_blocks(ensemble: Ensemble, n: int) -> List[tuple]:
    """(peso del bloque, log_values, weights) por tipo de secuencia de miembros."""
    p = ensemble.probabilities
    live = [i for i in range(p.size) if p[i] > 0.0]
    spectra = ensemble.member_spectra()
    counts = composition_matrix(n, len(live))
    block_logs = log_multinomials(n, counts) + counts @ np.log(p[live])

    cache: Dict[tuple, tuple] = {}
    blocks = []
    for row, block_log in zip(counts.tolist(), block_logs):
        parts = []
        for i, c in enumerate(row):
            if c == 0:
                continue
            if (i, c) not in cache:
                spec = iid_spectrum(spectra[live[i]], c)
                cache[(i, c)] = (spec.log_values, spec.weights)
            parts.append(cache[(i, c)])
        logs, weights = tensor_log_spectra(parts)
        blocks.append((math.exp(block_log), logs, weights))
    return blocks


def achievability_curve_iid(
    base: Union[Ensemble, PureState],
    rates_nats: Sequence[float],
    n_values: Sequence[int],
    workers: Optional[int] = None,
) -> List[AchievabilityPoint]:
    """
    F²(n, R) = Σ_seq p_seq Σ de los ⌈e^{nR}⌉ mayores valores de Schmidt de
    la secuencia producto, por clases de tipo.

    Args:
        base: Ensemble de una copia (o estado puro)
        rates_nats: Tasas R en nats
        n_values: Niveles n ≥ 1

    Returns:
        Puntos ordenados por (n, R) en el orden de entrada

    Raises:
        InvariantViolationError: grilla de tasas o de n vacía, n < 1
    """
    ensemble = Ensemble.single(base) if isinstance(base, PureState) else base
    rates = [float(r) for r in rates_nats]
    if not rates:
        raise InvariantViolationError("rate grid is empty")
    if not n_values:
        raise InvariantViolationError("n grid is empty")
    if any(not math.isfinite(r) for r in rates):
        raise InvariantViolationError("rates must be finite", rates=rates)
    bad = [n for n in n_values if n < 1]
    if bad:
        raise InvariantViolationError(f"n values must be ≥ 1, got {bad}", n_values=list(n_values))

    local = min(ensemble.split.dim_a, ensemble.split.dim_b)

    def evaluate(n: int) -> List[AchievabilityPoint]:
        blocks = _member_type_blocks(ensemble, n)
        max_rank = local ** n
        points = []
        for rate in rates:
            m = rank_for_rate(n, rate, max_rank)
            f2 = sum(weight * top_mass(logs, w, m) for weight, logs, w in blocks)
            points.append(AchievabilityPoint(n, rate, m, min(max(f2, 0.0), 1.0)))
        return points

    rows = parallel_map(evaluate, list(n_values), workers)
    points = [point for row in rows for point in row]
    logger.info(
        f"✂️ Curva de alcanzabilidad: {len(points)} puntos",
        extra={
            "component": "dilution",
            "event": "achievability_completed",
            "n_values": list(n_values),
            "rates": rates,
        },
    )
    return points


__all__ = [
    "TruncationProjector",
    "truncation_projectors",
    "theta_unitary",
    "DilutionReport",
    "simulate_dilution",
    "dilution_fidelity_formula",
    "rank_for_rate",
    "AchievabilityPoint",
    "achievability_curve_iid",
    "RANK_GUARD",
]
