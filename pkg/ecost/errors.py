"""
Error Hierarchy
===============

Excepciones de dominio con código machine-readable.

Diseño:
- Todas heredan de ValueError (inputs inválidos, no fallas de runtime)
- `code` estable por clase, usado por el runner para el registro JSON
- `context` guarda los parámetros que causaron el error

Usage:
    raise DimensionMismatchError(
        "rho dimension 6 does not match split 2x2",
        dimension=6, dim_a=2, dim_b=2,
    )

    try:
        ...
    except EcostError as e:
        print(json.dumps(e.to_record()))
"""
from typing import Any, Dict


class EcostError(ValueError):
    """Error base del toolkit."""

    code = "ecost_error"

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = context

    def to_record(self) -> Dict[str, Any]:
        """Registro {code, message, context} para el diagnostic stream."""
        return {
            "code": self.code,
            "message": self.message,
            "context": {k: _jsonable(v) for k, v in self.context.items()},
        }


class DimensionMismatchError(EcostError):
    """Dimensiones incompatibles entre operandos o contra un BipartiteSplit."""

    code = "dimension_mismatch"


class InvariantViolationError(EcostError):
    """Un input viola un invariante (hermiticidad, traza, rango, etc)."""

    code = "invariant_violation"


class DimensionCapError(EcostError):
    """La construcción explícita excede el cap de dimensión."""

    code = "dimension_cap"


class StateParseError(EcostError):
    """Archivo de estado JSON malformado o con valores no finitos."""

    code = "parse_failure"


def _jsonable(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)


__all__ = [
    "EcostError",
    "DimensionMismatchError",
    "InvariantViolationError",
    "DimensionCapError",
    "StateParseError",
]
