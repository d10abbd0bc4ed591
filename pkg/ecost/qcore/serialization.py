"""
JSON State Format
=================

Formato de intercambio de estados (fixtures, CLI):

    {
      "kind": "density" | "pure" | "ensemble",
      "dims": [d_a, d_b] | [d],
      "data": [[re, im], ...],          # pure: d pares
                                        # density: d×d pares (row-major)
                                        # ensemble: lista de vectores puros
      "probabilities": [p_1, ...]       # solo ensemble
    }

Los writers emiten todas las entradas; los readers rechazan NaN/Inf
(incluidos los literales NaN/Infinity que json acepta por defecto).
"""
import json
import math
from pathlib import Path
from typing import Any, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..errors import EcostError, StateParseError
from .states import BipartiteSplit, DensityMatrix, PureState

StateKind = Literal["density", "pure", "ensemble"]


class StateDocument(BaseModel):
    """Documento JSON de estado validado."""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    kind: StateKind
    dims: List[int] = Field(min_length=1, max_length=2)
    data: List[Any]
    probabilities: Optional[List[float]] = None

    @field_validator("dims")
    @classmethod
    def validate_dims_positive(cls, v: List[int]) -> List[int]:
        if any(d < 1 for d in v):
            raise ValueError(f"dims must be positive, got {v}")
        return v

    @model_validator(mode="after")
    def validate_shape(self) -> "StateDocument":
        d = math.prod(self.dims)
        values = _pairs_to_complex(self.data)
        expected = {
            "pure": (d,),
            "density": (d, d),
        }.get(self.kind)
        if self.kind == "ensemble":
            if values.ndim != 2 or values.shape[1] != d:
                raise ValueError(f"ensemble members must have dimension {d}")
            if self.probabilities is None or len(self.probabilities) != values.shape[0]:
                raise ValueError("ensemble needs one probability per member")
        else:
            if values.shape != expected:
                raise ValueError(f"{self.kind} data has shape {values.shape}, expected {expected}")
            if self.probabilities is not None:
                raise ValueError("probabilities only allowed for kind 'ensemble'")
        return self

    @property
    def split(self) -> Optional[BipartiteSplit]:
        if len(self.dims) == 2:
            return BipartiteSplit(self.dims[0], self.dims[1])
        return None

    def values(self) -> np.ndarray:
        return _pairs_to_complex(self.data)

    def to_density(self) -> DensityMatrix:
        """Estado como DensityMatrix (pure → |ψ⟩⟨ψ|; ensemble → mezcla)."""
        if self.kind == "density":
            return DensityMatrix(self.values(), self.split)
        if self.kind == "pure":
            return self.to_pure().density()
        probs = np.asarray(self.probabilities, dtype=np.float64)
        members = self.values()
        mixture = (members.T * probs) @ members.conj()
        return DensityMatrix(mixture, self.split)

    def to_pure(self) -> PureState:
        if self.kind != "pure":
            raise StateParseError(f"expected a pure state document, got '{self.kind}'", kind=self.kind)
        return PureState(self.values(), self.split)

    def members(self) -> Tuple[np.ndarray, List[PureState]]:
        """(probabilities, members) de un documento ensemble."""
        if self.kind != "ensemble":
            raise StateParseError(f"expected an ensemble document, got '{self.kind}'", kind=self.kind)
        probs = np.asarray(self.probabilities, dtype=np.float64)
        return probs, [PureState(v, self.split) for v in self.values()]


def _pairs_to_complex(data: Any) -> np.ndarray:
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim < 2 or arr.shape[-1] != 2:
        raise ValueError("data must be nested arrays of [re, im] pairs")
    if not np.all(np.isfinite(arr)):
        raise ValueError("data contains NaN or Inf")
    return arr[..., 0] + 1j * arr[..., 1]


def _complex_to_pairs(values: np.ndarray) -> Any:
    pairs = np.stack([values.real, values.imag], axis=-1)
    return pairs.tolist()


def _dims_of(split: Optional[BipartiteSplit], dimension: int) -> List[int]:
    return [split.dim_a, split.dim_b] if split is not None else [dimension]


def document_from_state(state: Union[DensityMatrix, PureState]) -> StateDocument:
    if isinstance(state, PureState):
        return StateDocument(
            kind="pure",
            dims=_dims_of(state.split, state.dimension),
            data=_complex_to_pairs(np.asarray(state.amplitudes)),
        )
    return StateDocument(
        kind="density",
        dims=_dims_of(state.split, state.dimension),
        data=_complex_to_pairs(np.asarray(state.matrix)),
    )


def document_from_members(
    probabilities: Sequence[float],
    members: Sequence[PureState],
    split: Optional[BipartiteSplit],
) -> StateDocument:
    dimension = members[0].dimension if members else (split.dimension if split else 1)
    return StateDocument(
        kind="ensemble",
        dims=_dims_of(split, dimension),
        data=[_complex_to_pairs(np.asarray(m.amplitudes)) for m in members],
        probabilities=[float(p) for p in probabilities],
    )


def _reject_constant(token: str) -> Any:
    raise StateParseError(f"non-finite literal '{token}' in state file", token=token)


def parse_document(text: str) -> StateDocument:
    """
    Parsea y valida un documento de estado.

    Raises:
        StateParseError: JSON inválido, NaN/Inf, o shape inconsistente
    """
    try:
        raw = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise StateParseError(f"invalid JSON: {e.msg}", line=e.lineno, column=e.colno) from e
    try:
        return StateDocument.model_validate(raw)
    except ValidationError as e:
        raise StateParseError(
            f"invalid state document: {e.error_count()} error(s)",
            errors=[err["msg"] for err in e.errors()],
        ) from e


def dump_document(document: StateDocument) -> str:
    """JSON determinista (mismo documento → mismos bytes)."""
    payload = document.model_dump(exclude_none=True)
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def load_document(path: Union[str, Path]) -> StateDocument:
    return parse_document(Path(path).read_text(encoding="utf-8"))


def save_document(document: StateDocument, path: Union[str, Path]) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(dump_document(document), encoding="utf-8")


def load_density(path: Union[str, Path]) -> DensityMatrix:
    """Carga cualquier documento como DensityMatrix, validando invariantes."""
    document = load_document(path)
    try:
        return document.to_density()
    except EcostError as e:
        raise StateParseError(
            f"state in {path} violates invariants: {e.message}", path=str(path), cause=e.code
        ) from e


__all__ = [
    "StateKind",
    "StateDocument",
    "document_from_state",
    "document_from_members",
    "parse_document",
    "dump_document",
    "load_document",
    "save_document",
    "load_density",
]
