"""
Logging and Parallel Map Tests
==============================

Invariantes testeadas:
1. Cada línea de log es un objeto JSON con level, logger y message
2. trace_id del contexto se propaga a todos los registros
3. add_fields globales no pisan los campos del registro
4. parallel_map conserva el orden de entrada
"""
import json
import logging
import threading

import pytest

from ecost.logging import (
    generate_trace_id,
    get_component_logger,
    get_trace_id,
    log_experiment_summary,
    setup_logging,
    trace_context,
)
from ecost.parallel import parallel_map


@pytest.fixture
def log_file(tmp_path):
    """Log JSON a archivo; el root logger se limpia al final."""
    path = tmp_path / "logs" / "ecost.log"
    yield path
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "baseFilename", None) == str(path):
            handler.close()
            root.removeHandler(handler)
    root.setLevel(logging.WARNING)


def _records(path):
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line]


@pytest.mark.unit
class TestTraceContext:
    """Tests de propagación de trace_id"""

    def test_trace_id_format(self):
        trace_id = generate_trace_id("exp")

        assert trace_id.startswith("exp-")
        assert len(trace_id) == len("exp-") + 8

    def test_context_sets_and_resets(self):
        """
        Invariante: trace_id vive solo dentro del context manager.
        """
        assert get_trace_id() is None

        with trace_context("exp-1234") as trace_id:
            assert trace_id == "exp-1234"
            assert get_trace_id() == "exp-1234"

        assert get_trace_id() is None

    def test_context_generates_when_missing(self):
        with trace_context() as trace_id:
            assert trace_id.startswith("trace-")


@pytest.mark.unit
class TestJsonLogging:
    """Tests del formatter JSON"""

    def test_records_are_json_with_renamed_fields(self, log_file):
        """
        Invariante: level y logger reemplazan levelname y name.
        """
        setup_logging(level="INFO", add_fields={"seed": 7}, log_file=str(log_file))
        logger = get_component_logger("spectra")

        with trace_context("exp-abcd1234"):
            logger.info("📐 Sweep completado", extra={"component": "spectra", "event": "sweep_completed", "n": 24})

        (record,) = _records(log_file)
        assert record["level"] == "INFO"
        assert record["logger"] == "ecost.spectra"
        assert record["message"] == "📐 Sweep completado"
        assert record["trace_id"] == "exp-abcd1234"
        assert record["event"] == "sweep_completed"
        assert record["n"] == 24
        assert record["seed"] == 7
        assert "levelname" not in record

    def test_level_filters(self, log_file):
        setup_logging(level="WARNING", log_file=str(log_file))
        logger = get_component_logger("app")

        logger.info("hidden")
        logger.warning("shown")

        assert [r["message"] for r in _records(log_file)] == ["shown"]

    def test_experiment_summary_helper(self, log_file):
        setup_logging(level="INFO", log_file=str(log_file))

        log_experiment_summary(get_component_logger("app"), "eof", 3, None, 0.12345)

        (record,) = _records(log_file)
        assert record["event"] == "experiment_completed"
        assert record["output"] == "<stdout>"
        assert record["elapsed_s"] == 0.123


@pytest.mark.unit
class TestParallelMap:
    """Tests del map paralelo determinista"""

    def test_preserves_order(self):
        """
        Invariante: El resultado respeta el orden de items con cualquier workers.
        """
        items = list(range(40))

        assert parallel_map(lambda x: x * x, items, workers=4) == [x * x for x in items]

    def test_single_worker_runs_in_caller_thread(self):
        caller = threading.get_ident()

        threads = parallel_map(lambda _: threading.get_ident(), [1, 2, 3], workers=1)

        assert threads == [caller] * 3

    def test_empty_items(self):
        assert parallel_map(lambda x: x, [], workers=4) == []
