"""
Experiment Registry
===================

Registry explícito de experimentos disponibles para el CLI.

Problema resuelto:
- Un comando desconocido debe fallar temprano y con la lista de opciones
- El help del CLI sale de la misma fuente que el despacho

Solución:
- Registry explícito: cada experimento se registra con handler y descripción
- Validación temprana: ExperimentNotAvailableError si no existe
- Introspección: listar experimentos disponibles
"""
import logging
from typing import Any, Callable, Dict, Set

from ..errors import EcostError

logger = logging.getLogger(__name__)


class ExperimentNotAvailableError(EcostError):
    """Experimento no registrado."""

    code = "unknown_command"


class ExperimentRegistry:
    """
    Registry de experimentos.

    Usage:
        registry = ExperimentRegistry()
        registry.register('eof', run_eof, "E_F por búsqueda con restarts")

        try:
            result = registry.execute('eof', config)
        except ExperimentNotAvailableError as e:
            logger.warning(str(e))
    """

    def __init__(self) -> None:
        self._handlers: Dict[str, Callable[..., Any]] = {}
        self._descriptions: Dict[str, str] = {}

    def register(self, command: str, handler: Callable[..., Any], description: str = "") -> None:
        """
        Registra un experimento.

        Note:
            Si el comando ya existe, se sobrescribe con warning.
        """
        if command in self._handlers:
            logger.warning(
                "Experimento ya registrado, sobrescribiendo",
                extra={
                    "component": "experiment_registry",
                    "event": "duplicate_command_warning",
                    "command": command,
                },
            )
        self._handlers[command] = handler
        self._descriptions[command] = description

    def execute(self, command: str, *args: Any, **kwargs: Any) -> Any:
        """
        Ejecuta un experimento.

        Raises:
            ExperimentNotAvailableError: Si el comando no está registrado
        """
        if command not in self._handlers:
            available = ', '.join(sorted(self.available_commands))
            raise ExperimentNotAvailableError(
                f"Command '{command}' not available. Available commands: {available}",
                command=command,
                available=sorted(self.available_commands),
            )
        logger.debug(
            "Ejecutando experimento",
            extra={
                "component": "experiment_registry",
                "event": "command_executing",
                "command": command,
            },
        )
        return self._handlers[command](*args, **kwargs)

    def is_available(self, command: str) -> bool:
        return command in self._handlers

    @property
    def available_commands(self) -> Set[str]:
        return set(self._handlers.keys())

    def get_help(self) -> Dict[str, str]:
        """Dict[comando, descripción]."""
        return dict(self._descriptions)

    def __repr__(self) -> str:
        cmds = ', '.join(sorted(self.available_commands))
        return f"ExperimentRegistry({len(self._handlers)} commands: {cmds})"
