"""
Experiment Runner
=================

Orquesta una corrida: logging → trace → handler → writers → exit status.

Exit status:
- 0: éxito
- 1: error interno (excepción no prevista, logueada con contexto)
- 2: input inválido (EcostError, config inválida, I/O); registro JSON
     {code, message, context} en stderr
- 3: lemma-check con draws fallidos (la tabla se escribe igual)
"""
import json
import logging
import sys
import time
from typing import Any, Dict, Optional, TextIO

from pydantic import ValidationError

from ..config.schemas import ExperimentConfig
from ..errors import EcostError
from ..logging import (
    generate_trace_id,
    log_error_with_context,
    log_experiment_summary,
    setup_logging,
    trace_context,
)
from .commands import build_registry
from .writers import write_result

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2
EXIT_CHECK_FAILED = 3


def emit_record(record: Dict[str, Any], stream: Optional[TextIO] = None) -> None:
    """Una línea JSON en el diagnostic stream."""
    target = stream or sys.stderr
    target.write(json.dumps(record, sort_keys=True) + "\n")
    target.flush()


def validation_record(error: ValidationError) -> Dict[str, Any]:
    return {
        "code": "invalid_config",
        "message": f"invalid configuration: {error.error_count()} error(s)",
        "context": {
            "errors": [
                {"loc": ".".join(str(p) for p in err["loc"]), "msg": err["msg"]}
                for err in error.errors()
            ]
        },
    }


def run(config: ExperimentConfig, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """
    Corre un experimento configurado.

    Returns:
        Exit status (ver docstring del módulo)
    """
    settings = config.logging
    setup_logging(
        level=settings.level,
        indent=settings.json_indent,
        add_fields={"command": config.command, "seed": config.seed},
        log_file=settings.file,
        max_bytes=settings.max_bytes,
        backup_count=settings.backup_count,
    )
    registry = build_registry()

    with trace_context(generate_trace_id("exp")):
        started = time.perf_counter()
        try:
            result = registry.execute(config.command, config)
            written = write_result(result, config.output_path, stdout)
        except EcostError as e:
            emit_record(e.to_record(), stderr)
            return EXIT_INVALID
        except ValidationError as e:
            emit_record(validation_record(e), stderr)
            return EXIT_INVALID
        except OSError as e:
            emit_record(
                {
                    "code": "io_error",
                    "message": str(e),
                    "context": {"path": getattr(e, "filename", None)},
                },
                stderr,
            )
            return EXIT_INVALID
        except Exception as e:
            log_error_with_context(
                logger,
                "Experimento falló",
                exception=e,
                component="app",
                event="experiment_failed",
                command=config.command,
            )
            emit_record(
                {
                    "code": "internal_error",
                    "message": str(e),
                    "context": {"error_type": type(e).__name__},
                },
                stderr,
            )
            return EXIT_INTERNAL

        log_experiment_summary(
            logger,
            config.command,
            len(result.table),
            ", ".join(written) if written else None,
            time.perf_counter() - started,
        )

    if not result.passed:
        logger.warning(
            "⚠️ Chequeo con fallas",
            extra={"component": "app", "event": "check_failed", "command": config.command},
        )
        return EXIT_CHECK_FAILED
    return EXIT_OK


__all__ = ["run", "emit_record", "validation_record", "EXIT_OK", "EXIT_INTERNAL", "EXIT_INVALID", "EXIT_CHECK_FAILED"]
