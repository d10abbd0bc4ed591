"""
App Module
==========

Orquestación del CLI: registry de experimentos, handlers, writers y runner.

Usage:
    from ecost.app import main
    main(["eof", "--input", "ecost/fixtures/bell.json"])
"""
from .cli import main
from .commands import ExperimentResult, build_registry
from .registry import ExperimentNotAvailableError, ExperimentRegistry
from .runner import run

__all__ = [
    "main",
    "run",
    "build_registry",
    "ExperimentResult",
    "ExperimentRegistry",
    "ExperimentNotAvailableError",
]
