"""
CLI Tests
=========

Tests del registry de experimentos, writers, runner y entry point.

Invariantes testeadas:
1. Registry: register, execute, ExperimentNotAvailableError
2. Writers: floats con 17 dígitos, booleanos true/false, no finitos → null
3. Exit status: 0 éxito, 1 interno, 2 input inválido, 3 chequeo fallido
4. Errores de input → un registro JSON {code, message, context} en stderr
5. Misma semilla → misma salida byte a byte
"""
import io
import json
import logging
import math
from logging.handlers import RotatingFileHandler
from pathlib import Path

import pytest

from ecost.app import ExperimentNotAvailableError, ExperimentRegistry, main, run
from ecost.app import runner as runner_module
from ecost.app.commands import ExperimentResult, build_registry, with_bits
from ecost.app.writers import format_cell, jsonable, render_csv, write_result
from ecost.config import ExperimentConfig
from ecost.errors import InvariantViolationError

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
BELL = str(FIXTURES / "bell.json")


@pytest.fixture(autouse=True)
def restore_root_logger():
    """run() instala handlers JSON en el root logger; se quitan después de cada test."""
    root = logging.getLogger()
    level = root.level
    yield
    for handler in list(root.handlers):
        if type(handler) in (logging.StreamHandler, RotatingFileHandler):
            root.removeHandler(handler)
    root.setLevel(level)


def _registry_with(command: str, handler) -> ExperimentRegistry:
    registry = ExperimentRegistry()
    registry.register(command, handler, "test handler")
    return registry


@pytest.mark.unit
@pytest.mark.cli
class TestExperimentRegistry:
    """Tests de ExperimentRegistry (infraestructura)"""

    def test_register_and_execute(self):
        """
        Invariante: Experimento registrado se ejecuta con los args dados.
        """
        registry = ExperimentRegistry()
        seen = []
        registry.register('probe', lambda cfg: seen.append(cfg), "Probe")

        registry.execute('probe', "config")

        assert seen == ["config"]

    def test_execute_unregistered_raises_error(self):
        """
        Invariante: Comando no registrado → ExperimentNotAvailableError con la lista.
        """
        registry = ExperimentRegistry()
        registry.register('eof', lambda cfg: None, "E_F")

        with pytest.raises(ExperimentNotAvailableError) as exc_info:
            registry.execute('teleport')

        assert 'teleport' in str(exc_info.value)
        assert 'Available commands' in str(exc_info.value)
        assert exc_info.value.to_record()["code"] == "unknown_command"

    def test_overwrite_command_logs_warning(self, caplog):
        registry = ExperimentRegistry()
        registry.register('cmd', lambda: None, "First")

        with caplog.at_level('WARNING'):
            registry.register('cmd', lambda: None, "Second")

        assert any("sobrescribiendo" in record.message.lower() for record in caplog.records)
        assert registry.get_help()['cmd'] == "Second"

    def test_build_registry_covers_every_command(self):
        """
        Propiedad: El registry del CLI expone los nueve experimentos.
        """
        registry = build_registry()

        assert registry.available_commands == {
            "lemma-check",
            "spectral-rate",
            "eof",
            "eof-reg",
            "dilution-sim",
            "dilution-curve",
            "converse",
            "cost-proxy",
            "fixture",
        }


@pytest.mark.unit
@pytest.mark.cli
class TestWriters:
    """Tests de formato de tablas y resúmenes"""

    def test_format_cell(self):
        assert format_cell(True) == "true"
        assert format_cell(False) == "false"
        assert format_cell(3) == "3"
        assert format_cell(0.1) == "0.10000000000000001"
        assert format_cell(None) == ""
        assert format_cell("orthogonal-flag") == "orthogonal-flag"

    def test_jsonable_non_finite_to_null(self):
        import numpy as np

        payload = jsonable({"a": np.float64(math.inf), "b": [np.int64(2), np.bool_(True)], "c": float("nan")})

        assert payload == {"a": None, "b": [2, True], "c": None}

    def test_csv_columns_in_first_appearance_order(self):
        text = render_csv([{"n": 1, "f": 0.5}, {"n": 2, "f": 0.25, "extra": True}])

        assert text.splitlines() == ["n,f,extra", "1,0.5,", "2,0.25,true"]

    def test_with_bits_adds_twin_columns(self):
        row = with_bits({"n": 4, "value_nats": math.log(2), "converged": True})

        assert list(row) == ["n", "value_nats", "value_bits", "converged"]
        assert row["value_bits"] == pytest.approx(1.0)

    def test_csv_output_writes_summary_twin(self, tmp_path):
        """
        Invariante: --output x.csv escribe x.csv + x.json.
        """
        result = ExperimentResult([{"n": 1, "value_nats": 0.5}], {"command": "eof"})

        written = write_result(result, str(tmp_path / "out" / "eof.csv"))

        assert written == [str(tmp_path / "out" / "eof.csv"), str(tmp_path / "out" / "eof.json")]
        assert (tmp_path / "out" / "eof.csv").read_text().startswith("n,value_nats")
        assert json.loads((tmp_path / "out" / "eof.json").read_text()) == {"command": "eof"}

    def test_json_output_embeds_table(self, tmp_path):
        result = ExperimentResult([{"n": 1}], {"command": "eof"})

        write_result(result, str(tmp_path / "eof.json"))

        payload = json.loads((tmp_path / "eof.json").read_text())
        assert payload == {"command": "eof", "table": [{"n": 1}]}


@pytest.mark.unit
@pytest.mark.cli
class TestRunnerExitStatus:
    """Tests de exit status y registros de error"""

    def test_success(self, monkeypatch):
        monkeypatch.setattr(
            runner_module,
            "build_registry",
            lambda: _registry_with("eof", lambda cfg: ExperimentResult([{"n": 1}], {})),
        )
        stdout, stderr = io.StringIO(), io.StringIO()

        status = run(ExperimentConfig(command="eof", input_path=BELL), stdout, stderr)

        assert status == 0
        assert stdout.getvalue() == "n\n1\n"
        assert stderr.getvalue() == ""

    def test_domain_error_is_invalid_input(self, monkeypatch):
        """
        Invariante: EcostError → exit 2 y un registro JSON con su code.
        """
        def handler(cfg):
            raise InvariantViolationError("negative weight", index=3)

        monkeypatch.setattr(runner_module, "build_registry", lambda: _registry_with("eof", handler))
        stderr = io.StringIO()

        status = run(ExperimentConfig(command="eof", input_path=BELL), io.StringIO(), stderr)

        record = json.loads(stderr.getvalue())
        assert status == 2
        assert record["code"] == "invariant_violation"
        assert record["context"] == {"index": 3}

    def test_missing_input_is_io_error(self, tmp_path):
        stderr = io.StringIO()
        config = ExperimentConfig(command="eof", input_path=str(tmp_path / "missing.json"))

        status = run(config, io.StringIO(), stderr)

        assert status == 2
        assert json.loads(stderr.getvalue())["code"] == "io_error"

    def test_malformed_state_is_parse_failure(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"kind": "density", "dims": [2, 2], "data": [[NaN]]}', encoding="utf-8")
        stderr = io.StringIO()

        status = run(ExperimentConfig(command="eof", input_path=str(path)), io.StringIO(), stderr)

        assert status == 2
        assert json.loads(stderr.getvalue())["code"] == "parse_failure"

    def test_unexpected_error_is_internal(self, monkeypatch):
        def handler(cfg):
            raise RuntimeError("boom")

        monkeypatch.setattr(runner_module, "build_registry", lambda: _registry_with("eof", handler))
        stderr = io.StringIO()

        status = run(ExperimentConfig(command="eof", input_path=BELL), io.StringIO(), stderr)

        assert status == 1
        assert json.loads(stderr.getvalue())["code"] == "internal_error"

    def test_failed_check_still_writes_table(self, monkeypatch):
        """
        Invariante: passed=False → exit 3, con la tabla emitida igual.
        """
        monkeypatch.setattr(
            runner_module,
            "build_registry",
            lambda: _registry_with(
                "lemma-check", lambda cfg: ExperimentResult([{"draw": 0, "passed": False}], {}, passed=False)
            ),
        )
        stdout = io.StringIO()

        status = run(ExperimentConfig(command="lemma-check"), stdout, io.StringIO())

        assert status == 3
        assert stdout.getvalue() == "draw,passed\n0,false\n"


@pytest.mark.integration
@pytest.mark.cli
class TestMain:
    """Tests end-to-end del entry point (argv → stdout/stderr)"""

    def test_invalid_flag_value(self, capsys):
        """
        Invariante: Config inválida → exit 2 y registro invalid_config.
        """
        status = main(["lemma-check", "--epsilon", "0.7"])

        record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert status == 2
        assert record["code"] == "invalid_config"
        assert record["context"]["errors"][0]["loc"] == "epsilon"

    def test_missing_input(self, capsys):
        status = main(["eof"])

        assert status == 2
        assert "requires input_path" in capsys.readouterr().err

    def test_fixture_to_stdout(self, capsys):
        status = main(["fixture", "--kind", "werner", "--p", "0.9"])

        document = json.loads(capsys.readouterr().out)
        assert status == 0
        assert document["kind"] == "density"
        assert document["dims"] == [2, 2]

    def test_eof_bell(self, capsys):
        """
        Invariante: E_F del Bell = ln 2 nats = 1 bit (oráculo de Wootters incluido).
        """
        status = main(["eof", "--input", BELL])

        lines = capsys.readouterr().out.splitlines()
        row = dict(zip(lines[0].split(","), lines[1].split(",")))
        assert status == 0
        assert float(row["value_bits"]) == pytest.approx(1.0, abs=1e-9)
        assert float(row["wootters_bits"]) == pytest.approx(1.0, abs=1e-6)

    def test_eof_bell_bits_summary(self, tmp_path):
        output = tmp_path / "eof.json"

        status = main(["eof", "--input", BELL, "--bits", "--output", str(output)])

        payload = json.loads(output.read_text())
        assert status == 0
        assert payload["units"] == "bits"
        assert payload["value"] == pytest.approx(1.0, abs=1e-9)

    def test_lemma_check_is_deterministic(self, tmp_path):
        """
        Invariante: Misma semilla → mismos bytes.
        """
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"

        assert main(["lemma-check", "--draws", "5", "--seed", "7", "--output", str(first)]) == 0
        assert main(["lemma-check", "--draws", "5", "--seed", "7", "--output", str(second)]) == 0

        assert first.read_bytes() == second.read_bytes()
        assert first.with_suffix(".json").read_bytes() == second.with_suffix(".json").read_bytes()
        header = first.read_text().splitlines()[0]
        assert header == "suite,draw,dimension,n,gamma,value,bound,margin,passed"
