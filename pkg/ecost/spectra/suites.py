"""
Random-Draw Suites for the Spectral Inequalities
================================================

Suites sembradas para las dos desigualdades de proyección espectral:
- lemma1: Tr[{A≥B}(A−B)] − Tr[P(A−B)] ≥ −1e-9 con A, B Hermitianas y 0 ≤ P ≤ I
- lemma2: Tr[{ρ^⊗n ≥ e^{nγ}ω^⊗n} ω^⊗n] ≤ e^{−nγ} + 1e-9

Cada draw usa su propio Generator derivado de SeedSequence(seed).spawn, así
el resultado no depende del orden en que los threads ejecuten los draws.
"""
import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import InvariantViolationError
from ..parallel import parallel_map
from ..qcore.linalg import random_density_matrix, random_hermitian, random_unitary
from ..qcore.states import DensityMatrix
from .projectors import lemma1_gap, lemma2_check

logger = logging.getLogger(__name__)

CONTRACT_TOL = 1e-9


@dataclass(frozen=True)
class LemmaDraw:
    """
    Registro de un draw.

    lemma1: value = gap, bound = 0, margin = gap (n = 1 y gamma = 0 no aplican).
    lemma2: value = Tr[{…}ω], bound = e^{−nγ}, margin = bound − value.
    """

    suite: str
    draw: int
    dimension: int
    n: int
    gamma: float
    value: float
    bound: float
    margin: float
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    seed: int
    records: Tuple[LemmaDraw, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def min_margin(self) -> float:
        return min((r.margin for r in self.records), default=float("inf"))

    @property
    def failures(self) -> int:
        return sum(1 for r in self.records if not r.passed)


def _draw_generators(seed: int, draws: int) -> List[np.random.Generator]:
    if draws < 1:
        raise InvariantViolationError(f"draws must be ≥ 1, got {draws}", draws=draws)
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(draws)]


def _log_suite(result: SuiteResult) -> None:
    extra = {
        "component": "spectra",
        "event": "suite_completed",
        "suite": result.suite,
        "seed": result.seed,
        "draws": len(result.records),
        "failures": result.failures,
        "min_margin": result.min_margin,
    }
    if result.passed:
        logger.info(f"✅ Suite {result.suite}: {len(result.records)} draws OK", extra=extra)
    else:
        logger.warning(f"❌ Suite {result.suite}: {result.failures} violaciones", extra=extra)


def lemma1_draw(index: int, rng: np.random.Generator, max_dimension: int) -> LemmaDraw:
    d = int(rng.integers(1, max_dimension + 1))
    a = random_hermitian(d, rng)
    b = random_hermitian(d, rng)
    v = random_unitary(d, rng)
    p = (v * rng.random(d)) @ v.conj().T
    gap = lemma1_gap(a, b, p)
    return LemmaDraw(
        suite="lemma1",
        draw=index,
        dimension=d,
        n=1,
        gamma=0.0,
        value=gap,
        bound=0.0,
        margin=gap,
        passed=gap >= -CONTRACT_TOL,
    )


def lemma2_draw(
    index: int, rng: np.random.Generator, n_values: Sequence[int], max_dimension: int
) -> LemmaDraw:
    d = int(rng.integers(1, max_dimension + 1))
    n = int(rng.choice(np.asarray(n_values)))
    gamma = float(rng.uniform(-1.0, 1.0))
    rho = DensityMatrix(random_density_matrix(d, rng))
    omega = random_density_matrix(d, rng) * float(rng.uniform(0.5, 2.0))

    omega_n = omega
    for _ in range(n - 1):
        omega_n = np.kron(omega_n, omega)
    result = lemma2_check(rho.tensor_power(n), omega_n, n, gamma)
    return LemmaDraw(
        suite="lemma2",
        draw=index,
        dimension=d ** n,
        n=n,
        gamma=gamma,
        value=result.value,
        bound=result.bound,
        margin=result.margin,
        passed=result.margin >= -CONTRACT_TOL,
    )


def run_lemma1_suite(
    draws: int = 1000, seed: int = 0, max_dimension: int = 16, workers: Optional[int] = None
) -> SuiteResult:
    """Draws aleatorios (A, B, P) con d ≤ max_dimension."""
    rngs = _draw_generators(seed, draws)
    records = parallel_map(
        lambda item: lemma1_draw(item[0], item[1], max_dimension), list(enumerate(rngs)), workers
    )
    result = SuiteResult("lemma1", seed, tuple(records))
    _log_suite(result)
    return result


def run_lemma2_suite(
    draws: int = 1000,
    seed: int = 0,
    n_values: Sequence[int] = (1, 2, 3),
    max_dimension: int = 4,
    workers: Optional[int] = None,
) -> SuiteResult:
    """Draws aleatorios (ρ, ω ≥ 0, n, γ ∈ [−1, 1])."""
    if not n_values or any(n < 1 for n in n_values):
        raise InvariantViolationError("n_values must be non-empty and ≥ 1", n_values=list(n_values))
    rngs = _draw_generators(seed, draws)
    records = parallel_map(
        lambda item: lemma2_draw(item[0], item[1], n_values, max_dimension),
        list(enumerate(rngs)),
        workers,
    )
    result = SuiteResult("lemma2", seed, tuple(records))
    _log_suite(result)
    return result


__all__ = [
    "LemmaDraw",
    "SuiteResult",
    "lemma1_draw",
    "lemma2_draw",
    "run_lemma1_suite",
    "run_lemma2_suite",
]
