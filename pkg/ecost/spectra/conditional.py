"""
Blockwise Conditional Spectra of cq-Extensions
==============================================

Para ϱ_RA = Σ_i p_i |i⟩⟨i| ⊗ ρ_A^i contra ω = ϱ_R ⊗ I_A el operador
diferencia es block-diagonal:

    Π(γ) = Σ_i p_i |i⟩⟨i| ⊗ (ρ_A^i − e^{−nγ} I_A)

así que f_n(γ) = Σ_i p_i Σ_x max(0, λ^i_x − e^{−nγ}) sin armar la matriz
R⊗A. γ está en el eje de entropía condicional (γ_S = −γ_D).

Con iid=True se evalúa ϱ^⊗n: las secuencias de flags se agrupan por tipo de
miembro (multinomial) y cada bloque es el producto tensorial de espectros
de tipo de los miembros.
"""
import math
from typing import TYPE_CHECKING, Dict, List, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from .type_classes import (
    SpectralTail,
    composition_matrix,
    iid_spectrum,
    log_multinomials,
    tensor_log_spectra,
)

if TYPE_CHECKING:
    from ..entanglement.ensembles import CqExtension


def _member_logs(spectrum: np.ndarray) -> np.ndarray:
    s = np.clip(np.asarray(spectrum, dtype=np.float64), 0.0, None)
    out = np.full(s.shape, -np.inf)
    out[s > 0] = np.log(s[s > 0])
    return out


def cq_conditional_tail(
    probabilities: npt.ArrayLike, member_spectra: Sequence[np.ndarray], n: int, iid: bool = False
) -> SpectralTail:
    """
    Cola espectral de los bloques de ϱ_RA (o de ϱ_RA^⊗n si iid).

    Args:
        probabilities: p_i de los miembros
        member_spectra: espectro de ρ_A^i por miembro
        n: nivel (escala e^{−nγ})
        iid: True para la potencia tensorial n de la cq-extension
    """
    p = np.asarray(probabilities, dtype=np.float64)

    if not iid:
        keys: List[np.ndarray] = []
        mass: List[np.ndarray] = []
        reference: List[np.ndarray] = []
        for p_i, spectrum in zip(p, member_spectra):
            logs = _member_logs(spectrum)
            keys.append(logs)
            mass.append(p_i * np.exp(logs))
            reference.append(np.full(logs.shape, p_i))
        return SpectralTail.from_terms(
            np.concatenate(keys), np.concatenate(mass), np.concatenate(reference)
        )

    live = [i for i in range(p.size) if p[i] > 0.0]
    counts = composition_matrix(n, len(live))
    log_p = np.log(p[live])
    block_logs = log_multinomials(n, counts) + counts @ log_p

    cache: Dict[Tuple[int, int], Tuple[np.ndarray, np.ndarray]] = {}

    def member_power(i: int, c: int) -> Tuple[np.ndarray, np.ndarray]:
        key = (i, c)
        if key not in cache:
            spec = iid_spectrum(member_spectra[live[i]], c)
            cache[key] = (spec.log_values, spec.weights)
        return cache[key]

    keys, mass, reference = [], [], []
    for row, block_log in zip(counts.tolist(), block_logs):
        parts = [member_power(i, c) for i, c in enumerate(row) if c > 0]
        logs, weights = tensor_log_spectra(parts)
        log_weight = block_log + np.log(weights)
        keys.append(logs)
        mass.append(np.exp(log_weight + logs))
        reference.append(np.exp(log_weight))
    return SpectralTail.from_terms(
        np.concatenate(keys), np.concatenate(mass), np.concatenate(reference)
    )


def cq_conditional_curve(
    cq: "CqExtension", n: int, gammas: npt.ArrayLike, iid: bool = False
) -> np.ndarray:
    """f_n sobre una grilla γ (eje de entropía condicional)."""
    tail = cq_conditional_tail(cq.probabilities, cq.member_spectra(), n, iid)
    return tail.evaluate(-n * np.asarray(gammas, dtype=np.float64))


def cq_conditional_pi_trace(cq: "CqExtension", gamma: float, n: int, iid: bool = False) -> float:
    """
    Tr[{Π(γ) ≥ 0}Π(γ)] para el par (ϱ_RA, ϱ_R ⊗ I_A), calculado por bloques.

    γ en el eje de entropía condicional. Sin iid, `cq` ya es la extensión del
    estado de nivel n y n solo fija la escala e^{−nγ}.
    """
    value = cq_conditional_curve(cq, n, np.array([gamma]), iid)[0]
    return float(value) if math.isfinite(value) else 0.0


__all__ = [
    "cq_conditional_tail",
    "cq_conditional_curve",
    "cq_conditional_pi_trace",
]
