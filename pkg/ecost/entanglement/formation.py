"""
Entanglement of Formation and the Finite-n Cost Proxy
=====================================================

- eof_objective / conditional_entropy_cq: Σ p_i S(ρ_A^i) y su forma como
  entropía condicional S(ϱ_RA) − S(ϱ_R) de la cq-extension
- eof_minimize: min sobre descomposiciones de tamaño K (default rank²) con
  GivensSearch desde el baseline espectral, un warm start opcional y
  restarts Haar-aleatorios
- eof_regularized_estimate: E_F(ρ^⊗n)/n para n ≤ n_max
- cost_proxy_minimize: min sobre cq-extensions del estado de nivel n del
  midpoint condicional (proxy de nivel n de S̄(A|R))

Determinismo: la semilla del restart i sale de SeedSequence(seed).spawn(restarts)[i];
el resultado no depende del orden en que corren los threads.
"""
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np
import numpy.typing as npt

from ..errors import DimensionCapError, InvariantViolationError
from ..logging import log_optimizer_restart
from ..parallel import parallel_map
from ..qcore.linalg import check_explicit_dimension, random_unitary
from ..qcore.measures import nats_to_bits, von_neumann_entropy
from ..qcore.states import DensityMatrix
from ..spectra.conditional import cq_conditional_curve
from ..spectra.sources import ExplicitSource, IidSource, SequenceSource
from ..spectra.sweep import GammaSweep, RateEstimate, default_gamma_grid, estimate_row
from .ensembles import (
    CqExtension,
    Ensemble,
    decomposition_rows,
    eigen_ensemble,
    ensemble_from_rows,
    isometry_from_ensemble,
)
from .objectives import DecompositionObjective, MeanEntropyObjective, SpectralMidpointObjective
from .search import GivensSearch, SearchOutcome, SearchSettings

logger = logging.getLogger(__name__)

# (d_a·d_b)^n máximo para las búsquedas sobre ρ^⊗n
REGULARIZED_DIMENSION_CAP = 256


@dataclass(frozen=True, eq=False)
class EntanglementReport:
    """
    Resultado de una minimización sobre descomposiciones.

    witness_copies > 1: el testigo efectivo es ensemble^⊗witness_copies
    (camino i.i.d. del proxy).
    """

    value_nats: float
    ensemble: Ensemble
    restarts_used: int
    converged: bool
    member_count: int
    sweeps: int = 0
    witness_copies: int = 1
    rate_estimate: Optional[RateEstimate] = None

    @property
    def value_bits(self) -> float:
        return nats_to_bits(self.value_nats)

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "value_nats": self.value_nats,
            "value_bits": self.value_bits,
            "member_count": self.member_count,
            "restarts_used": self.restarts_used,
            "converged": self.converged,
            "sweeps": self.sweeps,
            "witness_copies": self.witness_copies,
            "witness": self.ensemble.to_document().model_dump(exclude_none=True),
        }
        if self.rate_estimate is not None:
            payload["rate_estimate"] = self.rate_estimate.to_dict()
        return payload


def eof_objective(ensemble: Ensemble) -> float:
    """Σ p_i S(tr_B |φ^i⟩⟨φ^i|) en nats."""
    return float(np.dot(ensemble.probabilities, ensemble.member_entropies()))


def conditional_entropy_cq(cq: CqExtension) -> float:
    """S(ϱ_RA) − S(ϱ_R) sobre las matrices ensambladas."""
    return von_neumann_entropy(cq.assemble_ra()) - von_neumann_entropy(cq.flag_state())


# ============================================================================
# Search driver (compartido por E_F y el proxy)
# ============================================================================

@dataclass(frozen=True)
class _Start:
    label: int  # -2 baseline, -1 warm start, i ≥ 0 restart i
    rows: np.ndarray


def _haar_starts(rho: DensityMatrix, member_count: int, restarts: int, seed: int) -> List[_Start]:
    children = np.random.SeedSequence(seed).spawn(restarts) if restarts > 0 else []
    starts = []
    for i, child in enumerate(children):
        u = random_unitary(member_count, np.random.default_rng(child))
        starts.append(_Start(i, decomposition_rows(rho, u)))
    return starts


def _padded_rows(rho: DensityMatrix, ensemble: Ensemble, member_count: int) -> np.ndarray:
    return decomposition_rows(rho, isometry_from_ensemble(ensemble, member_count, reference=rho))


def _search(
    rho: DensityMatrix,
    objective: DecompositionObjective,
    member_count: int,
    restarts: int,
    seed: int,
    settings: Optional[SearchSettings],
    warm_start: Optional[Ensemble],
    workers: Optional[int],
) -> EntanglementReport:
    split = rho.require_split()
    r = max(rho.rank, 1)
    if member_count < r:
        raise InvariantViolationError(
            f"member_count {member_count} is below rank {r}", member_count=member_count, rank=r
        )

    baseline = eigen_ensemble(rho)
    starts = [_Start(-2, _padded_rows(rho, baseline, member_count))]

    # Un warm start más grande que K solo compite como candidato directo
    warm_candidate: Optional[Ensemble] = None
    if warm_start is not None:
        if warm_start.size <= member_count:
            starts.append(_Start(-1, _padded_rows(rho, warm_start, member_count)))
        else:
            warm_candidate = warm_start
    starts.extend(_haar_starts(rho, member_count, restarts, seed))

    search = GivensSearch(objective, settings)

    def run(start: _Start) -> SearchOutcome:
        outcome = search.run(start.rows)
        log_optimizer_restart(logger, start.label, outcome.value, outcome.sweeps, outcome.converged)
        return outcome

    outcomes = parallel_map(run, starts, workers)
    best_index = int(np.argmin([o.value for o in outcomes]))
    best = outcomes[best_index]
    witness = ensemble_from_rows(best.rows, split)
    value = best.value
    size = member_count

    if warm_candidate is not None:
        warm_value = _evaluate(objective, warm_candidate)
        if warm_value < value:
            witness, value, size = warm_candidate, warm_value, warm_candidate.size

    return EntanglementReport(
        value_nats=value,
        ensemble=witness,
        restarts_used=restarts,
        converged=best.converged,
        member_count=size,
        sweeps=best.sweeps,
    )


def _evaluate(objective: DecompositionObjective, ensemble: Ensemble) -> float:
    rows = ensemble.weighted_rows()
    return objective.total(sum((objective.member_term(r) for r in rows), objective.zero()))


# ============================================================================
# E_F
# ============================================================================

def eof_minimize(
    rho: DensityMatrix,
    member_count: Optional[int] = None,
    restarts: int = 20,
    seed: int = 0,
    settings: Optional[SearchSettings] = None,
    warm_start: Optional[Ensemble] = None,
    workers: Optional[int] = None,
) -> EntanglementReport:
    """
    E_F(ρ) por búsqueda local con restarts.

    Args:
        rho: Estado bipartito (requiere split)
        member_count: Tamaño de la descomposición (default rank²)
        restarts: Restarts Haar-aleatorios además del baseline espectral
        seed: Semilla maestra
        settings: Presupuesto por restart
        warm_start: Ensemble de ρ para arrancar (candidato adicional)
        workers: Threads para los restarts

    Returns:
        EntanglementReport; el valor nunca supera eof_objective del baseline

    Raises:
        InvariantViolationError: member_count < rank(rho)
    """
    split = rho.require_split()
    r = max(rho.rank, 1)
    k = r * r if member_count is None else member_count

    if k < r:
        raise InvariantViolationError(f"member_count {k} is below rank {r}", member_count=k, rank=r)
    if r == 1:
        psi = eigen_ensemble(rho)
        return EntanglementReport(
            value_nats=eof_objective(psi),
            ensemble=psi,
            restarts_used=0,
            converged=True,
            member_count=1,
        )

    report = _search(rho, MeanEntropyObjective(split), k, restarts, seed, settings, warm_start, workers)
    logger.info(
        f"🔗 E_F = {report.value_nats:.6f} nats (K={k}, restarts={restarts})",
        extra={
            "component": "entanglement",
            "event": "eof_completed",
            "value_nats": report.value_nats,
            "member_count": k,
            "restarts": restarts,
            "converged": report.converged,
        },
    )
    return report


@dataclass(frozen=True, eq=False)
class RegularizedPoint:
    n: int
    value_nats: float
    per_copy_nats: float
    running_infimum: float
    report: EntanglementReport

    def to_row(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "value_nats": self.value_nats,
            "per_copy_nats": self.per_copy_nats,
            "running_infimum_nats": self.running_infimum,
            "member_count": self.report.member_count,
            "converged": self.report.converged,
        }


def eof_regularized_estimate(
    rho: DensityMatrix,
    n_max: int,
    member_count: Optional[int] = None,
    restarts: int = 20,
    seed: int = 0,
    settings: Optional[SearchSettings] = None,
    workers: Optional[int] = None,
) -> List[RegularizedPoint]:
    """
    E_F(ρ^⊗n)/n para n = 1..n_max.

    El nivel n arranca desde (testigo n−1) ⊗ (testigo 1), así
    E_F(ρ^⊗n) ≤ E_F(ρ^⊗(n−1)) + E_F(ρ) se cumple por construcción.

    Args:
        member_count: K del nivel 1 (default rank²); el nivel n usa rank(ρ^⊗n)

    Raises:
        DimensionCapError: (d_a·d_b)^n_max > 256
    """
    split = rho.require_split()
    if n_max < 1:
        raise InvariantViolationError(f"n_max must be ≥ 1, got {n_max}", n_max=n_max)
    total = split.dimension ** n_max
    if total > REGULARIZED_DIMENSION_CAP:
        raise DimensionCapError(
            f"(d_a·d_b)^n = {total} exceeds cap {REGULARIZED_DIMENSION_CAP}",
            dimension=total,
            cap=REGULARIZED_DIMENSION_CAP,
            n_max=n_max,
        )

    points: List[RegularizedPoint] = []
    first: Optional[EntanglementReport] = None
    previous: Optional[EntanglementReport] = None
    infimum = math.inf
    for n in range(1, n_max + 1):
        rho_n = rho.tensor_power(n)
        if n == 1:
            report = eof_minimize(rho_n, member_count, restarts, seed, settings, workers=workers)
            first = report
        else:
            assert first is not None and previous is not None
            warm = previous.ensemble.tensor(first.ensemble)
            report = eof_minimize(
                rho_n,
                max(rho_n.rank, 1),
                restarts,
                seed + n,
                settings,
                warm_start=warm,
                workers=workers,
            )
        previous = report
        per_copy = report.value_nats / n
        infimum = min(infimum, per_copy)
        points.append(RegularizedPoint(n, report.value_nats, per_copy, infimum, report))
    return points


# ============================================================================
# Finite-n cost proxy
# ============================================================================

def _single_row_estimate(grid: np.ndarray, curve: np.ndarray, n: int, epsilon: float) -> RateEstimate:
    sweep = GammaSweep(grid, (n,), np.clip(curve, 0.0, 1.0)[None, :], "conditional-entropy")
    return estimate_row(sweep.gamma_grid, sweep.f_values[0], n, epsilon, sweep.mode)


def cost_proxy_minimize(
    source: SequenceSource,
    n: int,
    member_count: Optional[int] = None,
    restarts: int = 20,
    seed: int = 0,
    settings: Optional[SearchSettings] = None,
    gamma_grid: Optional[npt.ArrayLike] = None,
    epsilon: float = 0.05,
    workers: Optional[int] = None,
) -> EntanglementReport:
    """
    Min sobre cq-extensions del estado de nivel n del midpoint condicional.

    Caminos:
    - IidSource con ρ puro: la única descomposición de ψ^⊗n es ψ^⊗n misma;
      la curva sale del espectro por clases de tipo (cualquier n)
    - resto: ρ_n explícito (dimensión ≤ 256) y GivensSearch con
      SpectralMidpointObjective

    Raises:
        DimensionCapError: ρ_n explícito excede 256
    """
    if n < 1:
        raise InvariantViolationError(f"n must be ≥ 1, got {n}", n=n)
    grid = default_gamma_grid() if gamma_grid is None else np.asarray(gamma_grid, dtype=np.float64)

    if isinstance(source, IidSource) and source.rho.is_pure:
        base = eigen_ensemble(source.rho)
        curve = cq_conditional_curve(CqExtension(base), n, grid, iid=True)
        estimate = _single_row_estimate(grid, curve, n, epsilon)
        return EntanglementReport(
            value_nats=estimate.midpoint,
            ensemble=base,
            restarts_used=0,
            converged=True,
            member_count=1,
            witness_copies=n,
            rate_estimate=estimate,
        )

    if not isinstance(source, (IidSource, ExplicitSource)):
        raise InvariantViolationError(
            f"cost proxy needs an explicit level-n state, got a {source.kind} source",
            kind=source.kind,
        )
    if isinstance(source, IidSource):
        check_explicit_dimension(source.rho.dimension ** n, cap=REGULARIZED_DIMENSION_CAP, n=n)
    rho_n = source.state(n)
    split = rho_n.require_split()
    check_explicit_dimension(rho_n.dimension, cap=REGULARIZED_DIMENSION_CAP, n=n)

    objective = SpectralMidpointObjective(split, grid, n)
    r = max(rho_n.rank, 1)
    if r == 1:
        witness = eigen_ensemble(rho_n)
        report = EntanglementReport(
            value_nats=_evaluate(objective, witness),
            ensemble=witness,
            restarts_used=0,
            converged=True,
            member_count=1,
        )
    else:
        k = r * r if member_count is None else member_count
        report = _search(rho_n, objective, k, restarts, seed, settings, None, workers)

    rows = report.ensemble.weighted_rows()
    curve = objective.curve(sum((objective.member_term(row) for row in rows), objective.zero()))
    estimate = _single_row_estimate(grid, curve, n, epsilon)
    logger.info(
        f"🔗 Proxy de costo n={n}: {report.value_nats:.6f} nats",
        extra={
            "component": "entanglement",
            "event": "cost_proxy_completed",
            "n": n,
            "value_nats": report.value_nats,
            "member_count": report.member_count,
        },
    )
    return EntanglementReport(
        value_nats=report.value_nats,
        ensemble=report.ensemble,
        restarts_used=report.restarts_used,
        converged=report.converged,
        member_count=report.member_count,
        sweeps=report.sweeps,
        rate_estimate=estimate,
    )


__all__ = [
    "EntanglementReport",
    "RegularizedPoint",
    "REGULARIZED_DIMENSION_CAP",
    "eof_objective",
    "conditional_entropy_cq",
    "eof_minimize",
    "eof_regularized_estimate",
    "cost_proxy_minimize",
]
