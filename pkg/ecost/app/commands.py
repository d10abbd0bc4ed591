"""
Experiment Handlers
===================

Un handler por comando: recibe el ExperimentConfig validado y devuelve un
ExperimentResult (tabla + resumen JSON, o un documento de estado para
`fixture`). Ningún handler escribe archivos; eso es trabajo de writers.

Reglas comunes:
- Toda columna *_nats lleva su gemela *_bits (= nats / ln 2)
- Toda la aleatoriedad sale de config.seed
- El resumen no lleva tiempos (la salida debe ser idéntica byte a byte)
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config.schemas import ExperimentConfig
from ..dilution import (
    achievability_curve_iid,
    best_converse_bound,
    simulate_dilution,
)
from ..entanglement import (
    REGULARIZED_DIMENSION_CAP,
    CqExtension,
    Ensemble,
    SearchSettings,
    cost_proxy_minimize,
    eigen_ensemble,
    eof_minimize,
    eof_objective,
    eof_regularized_estimate,
    eof_two_qubit,
)
from ..qcore.measures import nats_to_bits
from ..qcore.serialization import StateDocument, load_density, load_document
from ..qcore.states import DensityMatrix
from ..spectra import (
    IidSource,
    conditional_reference,
    gamma_sweep,
    rate_estimate,
    run_lemma1_suite,
    run_lemma2_suite,
)
from .fixtures import generate_fixture
from .registry import ExperimentRegistry

logger = logging.getLogger(__name__)

LEMMA2_DEFAULT_N = (1, 2, 3)
EOF_REG_DEFAULT_N_MAX = 2
# Offsets (nats) alrededor de la entropía del ensemble cuando no hay --rates
DEFAULT_RATE_OFFSETS = (-0.1, 0.1)


@dataclass
class ExperimentResult:
    """Tabla de filas + resumen; `document` solo para fixture."""

    table: List[Dict[str, Any]] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    document: Optional[StateDocument] = None
    passed: bool = True


def with_bits(row: Dict[str, Any]) -> Dict[str, Any]:
    """Inserta `<x>_bits` a continuación de cada `<x>_nats`."""
    out: Dict[str, Any] = {}
    for key, value in row.items():
        out[key] = value
        if key.endswith("_nats") and isinstance(value, (int, float)) and not isinstance(value, bool):
            out[key[: -len("_nats")] + "_bits"] = nats_to_bits(float(value))
    return out


def _explicit(config: ExperimentConfig, name: str) -> bool:
    return name in config.model_fields_set


def _search_settings(config: ExperimentConfig) -> SearchSettings:
    return SearchSettings(
        max_sweeps=config.optimizer.max_sweeps, tolerance=config.optimizer.tolerance
    )


def _load_ensemble(path: str) -> Tuple[DensityMatrix, Ensemble]:
    """Documento ensemble → ese ensemble; cualquier otro → descomposición espectral."""
    document = load_document(path)
    if document.kind == "ensemble":
        ensemble = Ensemble.from_document(document)
        return ensemble.mixture(), ensemble
    rho = load_density(path)
    return rho, eigen_ensemble(rho)


def _default_rates(config: ExperimentConfig, ensemble: Ensemble) -> List[float]:
    if config.rates:
        return list(config.rates)
    entropy = eof_objective(ensemble)
    return [entropy + offset for offset in DEFAULT_RATE_OFFSETS]


def _headline(config: ExperimentConfig, value_nats: float) -> Dict[str, Any]:
    value = nats_to_bits(value_nats) if config.units == "bits" else value_nats
    return {"value": value, "units": config.units}


# ============================================================================
# Handlers
# ============================================================================

def run_lemma_check(config: ExperimentConfig) -> ExperimentResult:
    """Suites aleatorias de las dos desigualdades básicas."""
    n_values = tuple(config.n_values) if _explicit(config, "n_values") else LEMMA2_DEFAULT_N
    workers = config.optimizer.workers
    suites = [
        run_lemma1_suite(config.draws, config.seed, workers=workers),
        run_lemma2_suite(config.draws, config.seed, n_values=n_values, workers=workers),
    ]
    table = [record.to_dict() for suite in suites for record in suite.records]
    summary = {
        "command": config.command,
        "seed": config.seed,
        "draws": config.draws,
        "suites": [
            {
                "suite": suite.suite,
                "passed": suite.passed,
                "failures": suite.failures,
                "min_margin": suite.min_margin,
            }
            for suite in suites
        ],
    }
    return ExperimentResult(table, summary, passed=all(s.passed for s in suites))


def run_spectral_rate(config: ExperimentConfig) -> ExperimentResult:
    """γ-sweep i.i.d. y estimaciones de tasa por n."""
    assert config.input_path is not None
    rho = load_density(config.input_path)
    spectral = config.spectral
    omega: Optional[Any] = None
    if spectral.reference_path is not None:
        omega = load_density(spectral.reference_path)
    elif spectral.condition_on_b:
        omega = conditional_reference(rho)

    source = IidSource(rho, omega)
    sweep = gamma_sweep(
        source, config.n_values, config.gamma.grid(), spectral.mode, config.optimizer.workers
    )
    estimates = rate_estimate(sweep, config.epsilon)
    table = [
        with_bits(
            {
                "n": e.n,
                "gamma_low_nats": e.gamma_low,
                "gamma_high_nats": e.gamma_high,
                "midpoint_nats": e.midpoint,
                "epsilon": e.epsilon,
                "mode": e.mode,
                "low_open": e.low_open,
                "high_open": e.high_open,
            }
        )
        for e in estimates
    ]
    summary = {
        "command": config.command,
        "mode": spectral.mode,
        "monotone": sweep.is_monotone(),
        "estimates": [e.to_dict() for e in estimates],
        "curve": [{"n": n, "gamma": g, "f": f} for n, g, f in sweep.rows()],
    }
    return ExperimentResult(table, summary)


def run_eof(config: ExperimentConfig) -> ExperimentResult:
    """E_F por búsqueda con restarts (+ oráculo de Wootters en dos qubits)."""
    assert config.input_path is not None
    rho = load_density(config.input_path)
    report = eof_minimize(
        rho,
        config.optimizer.members,
        config.optimizer.restarts,
        config.seed,
        _search_settings(config),
        workers=config.optimizer.workers,
    )
    row: Dict[str, Any] = {
        "value_nats": report.value_nats,
        "member_count": report.member_count,
        "restarts": report.restarts_used,
        "converged": report.converged,
        "sweeps": report.sweeps,
    }
    if rho.dimension == 4 and (rho.split is None or (rho.split.dim_a, rho.split.dim_b) == (2, 2)):
        row["wootters_nats"] = eof_two_qubit(rho)
    summary = {"command": config.command, **_headline(config, report.value_nats), "report": report.to_dict()}
    return ExperimentResult([with_bits(row)], summary)


def run_eof_reg(config: ExperimentConfig) -> ExperimentResult:
    """E_F(ρ^⊗n)/n para n ≤ n_max."""
    assert config.input_path is not None
    rho = load_density(config.input_path)
    n_max = max(config.n_values) if _explicit(config, "n_values") else EOF_REG_DEFAULT_N_MAX
    points = eof_regularized_estimate(
        rho,
        n_max,
        config.optimizer.members,
        config.optimizer.restarts,
        config.seed,
        _search_settings(config),
        config.optimizer.workers,
    )
    table = [with_bits(point.to_row()) for point in points]
    summary = {
        "command": config.command,
        "n_max": n_max,
        **_headline(config, points[-1].running_infimum),
    }
    return ExperimentResult(table, summary)


def _variants(config: ExperimentConfig) -> List[str]:
    return config.dilution.variants()


def run_dilution_sim(config: ExperimentConfig) -> ExperimentResult:
    """Simulación exacta para cada (variante, M)."""
    assert config.input_path is not None
    _, ensemble = _load_ensemble(config.input_path)
    split = ensemble.split
    ranks = config.dilution.ranks or list(range(1, min(split.dim_a, split.dim_b) + 1))
    reports = [
        simulate_dilution(ensemble, m, variant)  # type: ignore[arg-type]
        for variant in _variants(config)
        for m in ranks
    ]
    table = [with_bits(r.to_row()) for r in reports]
    summary = {
        "command": config.command,
        "members": ensemble.size,
        "within_bounds": all(r.within_bounds for r in reports),
    }
    return ExperimentResult(table, summary)


def run_dilution_curve(config: ExperimentConfig) -> ExperimentResult:
    """F²(n, R) i.i.d. por clases de tipo."""
    assert config.input_path is not None
    _, ensemble = _load_ensemble(config.input_path)
    rates = _default_rates(config, ensemble)
    points = achievability_curve_iid(ensemble, rates, config.n_values, config.optimizer.workers)
    table = [point.to_row() for point in points]
    summary = {
        "command": config.command,
        "entropy_nats": eof_objective(ensemble),
        "entropy_bits": nats_to_bits(eof_objective(ensemble)),
        "rates_nats": rates,
    }
    return ExperimentResult(table, summary)


def run_converse(config: ExperimentConfig) -> ExperimentResult:
    """
    Cota de converse débil minimizada sobre la grilla γ, junto al F² alcanzable.

    La cota se evalúa en la tasa realizada ln(M)/n del protocolo con M = ⌈e^{nR}⌉.
    """
    assert config.input_path is not None
    _, ensemble = _load_ensemble(config.input_path)
    cq = CqExtension(ensemble)
    grid = config.gamma.grid()
    rates = _default_rates(config, ensemble)
    points = achievability_curve_iid(ensemble, rates, config.n_values, config.optimizer.workers)
    table = []
    for point in points:
        realized = float(np.log(point.m_rank)) / point.n
        gamma_star, bound = best_converse_bound(cq, realized, point.n, grid, iid=True)
        table.append(
            with_bits(
                {
                    "n": point.n,
                    "rate_nats": point.rate_nats,
                    "realized_rate_nats": realized,
                    "m_rank": point.m_rank,
                    "gamma_star_nats": gamma_star,
                    "bound": bound,
                    "f2_achievable": point.f2,
                }
            )
        )
    summary = {
        "command": config.command,
        "consistent": all(row["bound"] >= row["f2_achievable"] - 1e-9 for row in table),
    }
    return ExperimentResult(table, summary)


def _proxy_levels(config: ExperimentConfig, rho: DensityMatrix) -> Sequence[int]:
    if _explicit(config, "n_values") or rho.is_pure:
        return config.n_values
    return [n for n in config.n_values if rho.dimension ** n <= REGULARIZED_DIMENSION_CAP] or [1]


def run_cost_proxy(config: ExperimentConfig) -> ExperimentResult:
    """Min sobre cq-extensions del midpoint condicional, por n."""
    assert config.input_path is not None
    rho = load_density(config.input_path)
    source = IidSource(rho)
    reports = [
        (
            n,
            cost_proxy_minimize(
                source,
                n,
                config.optimizer.members,
                config.optimizer.restarts,
                config.seed,
                _search_settings(config),
                config.gamma.grid(),
                config.epsilon,
                config.optimizer.workers,
            ),
        )
        for n in _proxy_levels(config, rho)
    ]
    table = []
    for n, report in reports:
        estimate = report.rate_estimate
        assert estimate is not None
        table.append(
            with_bits(
                {
                    "n": n,
                    "midpoint_nats": estimate.midpoint,
                    "gamma_low_nats": estimate.gamma_low,
                    "gamma_high_nats": estimate.gamma_high,
                    "member_count": report.member_count,
                    "witness_copies": report.witness_copies,
                    "converged": report.converged,
                }
            )
        )
    summary = {"command": config.command, **_headline(config, reports[-1][1].value_nats)}
    return ExperimentResult(table, summary)


def run_fixture(config: ExperimentConfig) -> ExperimentResult:
    document = generate_fixture(config.fixture, config.seed)
    return ExperimentResult(summary={"command": config.command, "kind": config.fixture.kind}, document=document)


def build_registry() -> ExperimentRegistry:
    """Registry con todos los experimentos del CLI."""
    registry = ExperimentRegistry()
    registry.register("lemma-check", run_lemma_check, "Random-draw suites for the two projection inequalities")
    registry.register("spectral-rate", run_spectral_rate, "Gamma sweep and level-n rate estimates of an i.i.d. source")
    registry.register("eof", run_eof, "Entanglement of formation by restarted local search")
    registry.register("eof-reg", run_eof_reg, "E_F of tensor powers per copy")
    registry.register("dilution-sim", run_dilution_sim, "Exact dilution protocol simulation per variant and rank")
    registry.register("dilution-curve", run_dilution_curve, "i.i.d. achievability curve F^2(n, R)")
    registry.register("converse", run_converse, "Weak-converse bound against achievable fidelity")
    registry.register("cost-proxy", run_cost_proxy, "Level-n cost proxy over cq-extensions")
    registry.register("fixture", run_fixture, "Generate a JSON state fixture")
    return registry


__all__ = ["ExperimentResult", "with_bits", "build_registry"]
