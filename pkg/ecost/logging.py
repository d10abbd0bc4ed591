"""
Structured Logging Infrastructure
==================================

Logging JSON-based para experimentos reproducibles.

Design Philosophy:
- Solo JSON (los logs van a stderr, las tablas a stdout/archivos)
- Trace correlation vía contextvars (un trace por corrida del CLI)
- Helpers para casos comunes (sweeps, restarts del optimizador, errores)
- File rotation opcional (RotatingFileHandler)

Usage:
    # Setup (una vez al inicio)
    from ecost.logging import setup_logging

    setup_logging(level="INFO")

    # Logging con contexto
    logger.info("📐 Sweep completado", extra={
        "component": "spectra",
        "event": "sweep_completed",
        "n": 24,
    })

    # Con trace propagation
    from ecost.logging import trace_context, get_trace_id

    with trace_context(generate_trace_id("exp")):
        logger.info("Corriendo experimento", extra={"trace_id": get_trace_id()})
"""
import logging
import sys
import uuid
from contextlib import contextmanager
from contextvars import ContextVar
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Dict, Iterator, Optional

# ============================================================================
# Trace Context (propagación de trace_id)
# ============================================================================

trace_id_var: ContextVar[Optional[str]] = ContextVar("trace_id", default=None)


def get_trace_id() -> Optional[str]:
    """
    Obtiene el trace_id actual del contexto.

    Returns:
        Trace ID actual o None si no hay contexto activo
    """
    return trace_id_var.get()


def generate_trace_id(prefix: str = "trace") -> str:
    """
    Genera un nuevo trace ID único.

    Args:
        prefix: Prefijo para el trace ID (ej: "exp", "fixture")

    Returns:
        Trace ID en formato: {prefix}-{short_uuid}
    """
    return f"{prefix}-{uuid.uuid4().hex[:8]}"


@contextmanager
def trace_context(trace_id: Optional[str] = None) -> Iterator[str]:
    """
    Context manager para propagar trace_id en toda la call stack.

    Args:
        trace_id: ID de trace a propagar. Si None, genera uno automático.
    """
    if trace_id is None:
        trace_id = generate_trace_id()

    token = trace_id_var.set(trace_id)
    try:
        yield trace_id
    finally:
        trace_id_var.reset(token)


# ============================================================================
# Logger Setup
# ============================================================================

def _json_formatter_base() -> type:
    try:
        from pythonjsonlogger.json import JsonFormatter
    except ImportError:
        try:
            from pythonjsonlogger.jsonlogger import JsonFormatter  # type: ignore[no-redef]
        except ImportError:
            raise ImportError(
                "pythonjsonlogger no encontrado. Instalar con: pip install python-json-logger"
            )
    return JsonFormatter


def setup_logging(
    level: str = "INFO",
    indent: Optional[int] = None,
    add_fields: Optional[Dict[str, Any]] = None,
    log_file: Optional[str] = None,
    max_bytes: int = 10 * 1024 * 1024,  # 10 MB
    backup_count: int = 5,
) -> None:
    """
    Configura structured logging (JSON) para todo el toolkit.

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        indent: JSON indent para pretty-print (None = compact)
        add_fields: Campos adicionales globales (ej: {"seed": 7})
        log_file: Path al archivo de logs (None = stderr). Si se especifica, usa rotation.
        max_bytes: Tamaño máximo por archivo antes de rotar
        backup_count: Número de archivos backup a mantener

    Note:
        Nunca escribe a stdout: el CLI emite tablas CSV por stdout.
    """
    base = _json_formatter_base()

    class CustomJsonFormatter(base):  # type: ignore[misc, valid-type]
        def add_fields(self, log_record, record, message_dict):
            super().add_fields(log_record, record, message_dict)

            if "levelname" in log_record:
                log_record["level"] = log_record.pop("levelname")

            if "name" in log_record:
                log_record["logger"] = log_record.pop("name")

            current_trace_id = get_trace_id()
            if current_trace_id and "trace_id" not in log_record:
                log_record["trace_id"] = current_trace_id

            if add_fields:
                for key, value in add_fields.items():
                    if key not in log_record:
                        log_record[key] = value

    handler: logging.Handler
    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handler = RotatingFileHandler(
            filename=str(log_path),
            maxBytes=max_bytes,
            backupCount=backup_count,
            encoding="utf-8",
        )
    else:
        handler = logging.StreamHandler(sys.stderr)

    formatter = CustomJsonFormatter(
        "%(timestamp)s %(levelname)s %(name)s %(message)s",
        timestamp=True,
        json_indent=indent,
    )
    handler.setFormatter(formatter)

    root_logger = logging.getLogger()
    root_logger.handlers.clear()
    root_logger.addHandler(handler)
    root_logger.setLevel(getattr(logging, level.upper()))


# ============================================================================
# Helper Functions (DRY para casos comunes)
# ============================================================================

def log_sweep_progress(
    logger: logging.Logger,
    n: int,
    grid_size: int,
    mode: str,
    path: str,
    component: str = "spectra",
) -> None:
    """
    Helper para logs de una fila (n fijo) de un γ-sweep.

    Args:
        logger: Logger instance
        n: Nivel de la secuencia
        grid_size: Cantidad de puntos γ evaluados
        mode: divergence | conditional-entropy
        path: Camino de evaluación (type-class, explicit, cq-blockwise)
        component: Componente que genera el log
    """
    logger.debug(
        f"📐 Sweep row n={n} ({path})",
        extra={
            "component": component,
            "event": "sweep_row",
            "n": n,
            "grid_size": grid_size,
            "mode": mode,
            "path": path,
        },
    )


def log_optimizer_restart(
    logger: logging.Logger,
    restart: int,
    value: float,
    sweeps: int,
    converged: bool,
    component: str = "entanglement",
) -> None:
    """
    Helper para logs del resultado de un restart del optimizador.

    Args:
        logger: Logger instance
        restart: Índice del restart (-1 = warm start)
        value: Valor objetivo alcanzado (nats)
        sweeps: Sweeps de Givens ejecutados
        converged: Si la mejora final quedó bajo la tolerancia
        component: Componente que genera el log
    """
    extra = {
        "component": component,
        "event": "optimizer_restart",
        "restart": restart,
        "value_nats": value,
        "sweeps": sweeps,
        "converged": converged,
    }

    if converged:
        logger.debug(f"Restart {restart}: {value:.6f} nats", extra=extra)
    else:
        logger.info(
            f"⚠️ Restart {restart} sin converger tras {sweeps} sweeps", extra=extra
        )


def log_experiment_summary(
    logger: logging.Logger,
    command: str,
    rows: int,
    output: Optional[str],
    elapsed_s: float,
    additional: Optional[Dict[str, Any]] = None,
) -> None:
    """
    Helper para el log final de un experimento.

    Args:
        logger: Logger instance
        command: Comando ejecutado
        rows: Filas de la tabla emitida
        output: Path de salida (None = stdout)
        elapsed_s: Duración en segundos
        additional: Campos adicionales
    """
    extra: Dict[str, Any] = {
        "component": "app",
        "event": "experiment_completed",
        "command": command,
        "rows": rows,
        "output": output or "<stdout>",
        "elapsed_s": round(elapsed_s, 3),
        "trace_id": get_trace_id(),
    }
    if additional:
        extra.update(additional)

    logger.info(f"✅ {command} completado ({rows} filas)", extra=extra)


def log_error_with_context(
    logger: logging.Logger,
    message: str,
    exception: Optional[Exception] = None,
    component: str = "unknown",
    event: Optional[str] = None,
    trace_id: Optional[str] = None,
    **kwargs: Any,
) -> None:
    """
    Helper para logs de errores con contexto completo.

    Args:
        logger: Logger instance
        message: Mensaje de error
        exception: Excepción capturada (opcional)
        component: Componente donde ocurrió el error
        event: Evento que causó el error
        trace_id: Trace ID (usa contexto si no se especifica)
        **kwargs: Contexto adicional
    """
    extra: Dict[str, Any] = {
        "component": component,
        "trace_id": trace_id or get_trace_id(),
    }

    if event:
        extra["event"] = event

    if exception:
        extra["error_type"] = type(exception).__name__
        extra["error_message"] = str(exception)

    extra.update(kwargs)

    if exception:
        logger.error(f"{message}: {exception}", extra=extra, exc_info=True)
    else:
        logger.error(message, extra=extra)


def get_component_logger(component: str) -> logging.Logger:
    """
    Obtiene un logger con namespace específico.

    Args:
        component: Nombre del componente (spectra, dilution, app, etc.)

    Returns:
        Logger bajo el namespace ecost.{component}
    """
    return logging.getLogger(f"ecost.{component}")


__all__ = [
    # Setup
    "setup_logging",
    # Trace context
    "trace_context",
    "get_trace_id",
    "generate_trace_id",
    # Helpers
    "log_sweep_progress",
    "log_optimizer_restart",
    "log_experiment_summary",
    "log_error_with_context",
    # Component loggers
    "get_component_logger",
]
