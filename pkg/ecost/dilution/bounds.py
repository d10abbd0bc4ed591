"""
Weak-converse bound and coding-mass comparison.

Para cualquier protocolo de dilución con (1/n) ln M ≤ R y cualquier γ:

    F_n² ≤ Tr[{Π(γ) ≥ 0} Π(γ)] + e^{−n(γ − R)}

con Π(γ) el operador diferencia de (ϱ_RA, ϱ_R ⊗ I_A) en el eje de entropía
condicional. El evaluador toma la cq-extension que pase el caller.
"""
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import numpy.typing as npt

from ..errors import InvariantViolationError
from ..spectra.conditional import cq_conditional_curve, cq_conditional_pi_trace
from ..spectra.sweep import default_gamma_grid
from ..entanglement.ensembles import CqExtension, Ensemble
from .protocol import rank_for_rate

logger = logging.getLogger(__name__)


def _decay(n: int, gammas: np.ndarray, rate_nats: float) -> np.ndarray:
    with np.errstate(over="ignore"):
        return np.exp(-n * (gammas - rate_nats))


def converse_bound(
    cq: CqExtension, gamma: float, rate_nats: float, n: int, iid: bool = False
) -> float:
    """
    f_n(γ) + e^{−n(γ − R)}.

    Args:
        cq: cq-extension del estado objetivo (de una copia si iid)
        gamma: γ en nats por copia
        rate_nats: R
        n: nivel
        iid: True para evaluar la potencia n de cq por bloques de tipo
    """
    if n < 1:
        raise InvariantViolationError(f"n must be ≥ 1, got {n}", n=n)
    decay = float(_decay(n, np.array([gamma]), rate_nats)[0])
    return cq_conditional_pi_trace(cq, gamma, n, iid) + decay


def converse_curve(
    cq: CqExtension,
    gammas: npt.ArrayLike,
    rate_nats: float,
    n: int,
    iid: bool = False,
) -> np.ndarray:
    """converse_bound sobre toda una grilla γ (una sola pasada espectral)."""
    if n < 1:
        raise InvariantViolationError(f"n must be ≥ 1, got {n}", n=n)
    grid = np.asarray(gammas, dtype=np.float64)
    if grid.size == 0:
        raise InvariantViolationError("gamma grid is empty")
    f = cq_conditional_curve(cq, n, grid, iid)
    f = np.where(np.isfinite(f), f, 0.0)
    return f + _decay(n, grid, rate_nats)


def best_converse_bound(
    cq: CqExtension,
    rate_nats: float,
    n: int,
    gammas: Optional[npt.ArrayLike] = None,
    iid: bool = False,
) -> Tuple[float, float]:
    """
    Elige γ en la grilla que minimiza la cota.

    Returns:
        (γ*, cota en γ*)
    """
    grid = default_gamma_grid() if gammas is None else np.asarray(gammas, dtype=np.float64)
    curve = converse_curve(cq, grid, rate_nats, n, iid)
    best = int(np.argmin(curve))
    return float(grid[best]), float(curve[best])


@dataclass(frozen=True)
class CodingMassRecord:
    """
    Masa truncada q_i (M = ⌈e^{nα}⌉) contra la masa del proyector espectral
    {ρ_A^i ≥ e^{−nα}}; el rango del proyector es ≤ e^{nα} ≤ M.
    """

    member: int
    m_rank: int
    truncated_mass: float
    projector_mass: float
    projector_rank: int

    def to_row(self) -> Dict[str, Any]:
        return {
            "member": self.member,
            "m_rank": self.m_rank,
            "truncated_mass": self.truncated_mass,
            "projector_mass": self.projector_mass,
            "projector_rank": self.projector_rank,
        }


def coding_mass_comparison(ensemble: Ensemble, alpha: float, n: int = 1) -> List[CodingMassRecord]:
    """
    Compara por miembro la truncación de la lemma de codificación con la
    proyección espectral a umbral e^{−nα}.

    Raises:
        InvariantViolationError: α no finito o n < 1
    """
    if n < 1 or not math.isfinite(alpha):
        raise InvariantViolationError("need finite alpha and n ≥ 1", alpha=alpha, n=n)
    local = min(ensemble.split.dim_a, ensemble.split.dim_b)
    threshold = math.exp(-n * alpha)
    m = rank_for_rate(n, alpha, local)

    records = []
    for i, spectrum in enumerate(ensemble.member_spectra()):
        kept = spectrum >= threshold
        records.append(
            CodingMassRecord(
                member=i,
                m_rank=m,
                truncated_mass=float(np.sum(spectrum[:m])),
                projector_mass=float(np.sum(spectrum[kept])),
                projector_rank=int(np.count_nonzero(kept)),
            )
        )
    return records


__all__ = [
    "converse_bound",
    "converse_curve",
    "best_converse_bound",
    "CodingMassRecord",
    "coding_mass_comparison",
]
