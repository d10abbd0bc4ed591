"""
Table and summary writers.

- CSV: separador ',', decimal '.', floats con 17 dígitos significativos
  (round-trip exacto de doubles), booleanos true/false
- JSON: indent 2, claves en orden de inserción, no finitos → null
- `--output x.csv` escribe x.csv + x.json; `--output x.json` solo JSON
  (tabla embebida); sin output → stdout
"""
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

import numpy as np

from ..qcore.serialization import dump_document
from .commands import ExperimentResult


def format_cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if value is None:
        return ""
    return str(value)


def jsonable(value: Any) -> Any:
    """numpy → tipos nativos; inf/nan → None."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        f = float(value)
        return f if math.isfinite(f) else None
    return value


def table_columns(rows: List[Dict[str, Any]]) -> List[str]:
    """Unión de claves en orden de primera aparición."""
    columns: List[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    return columns


def render_csv(rows: List[Dict[str, Any]]) -> str:
    buffer = io.StringIO()
    columns = table_columns(rows)
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(row.get(c)) for c in columns])
    return buffer.getvalue()


def render_json(payload: Dict[str, Any]) -> str:
    return json.dumps(jsonable(payload), indent=2, allow_nan=False) + "\n"


def write_result(result: ExperimentResult, output: Optional[str], stdout: Optional[TextIO] = None) -> List[str]:
    """
    Emite el resultado.

    Returns:
        Paths escritos (vacío si se usó stdout)
    """
    stream = stdout or sys.stdout

    if result.document is not None:
        text = dump_document(result.document)
        if output is None:
            stream.write(text)
            return []
        return [_write(Path(output), text)]

    if output is None:
        stream.write(render_csv(result.table) if result.table else render_json(result.summary))
        return []

    path = Path(output)
    if path.suffix.lower() == ".json":
        return [_write(path, render_json({**result.summary, "table": result.table}))]
    return [
        _write(path, render_csv(result.table)),
        _write(path.with_suffix(".json"), render_json(result.summary)),
    ]


def _write(path: Path, text: str) -> str:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    return str(path)


__all__ = ["format_cell", "jsonable", "render_csv", "render_json", "write_result"]
