"""JSON run reports.

Everything except the ``runtime`` block is a deterministic function of the
command, its configuration and the seed.
"""
from __future__ import annotations

import json
import math
from importlib import resources
from typing import Any

from . import __version__

SCHEMA_VERSION = "1.0"


def _clean(x: Any) -> Any:
    # JSON has no infinities; spell them out
    if isinstance(x, float) and not math.isfinite(x):
        return "nan" if x != x else ("inf" if x > 0 else "-inf")
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def make_report(command: str, config: dict, payload: dict, runtime: dict) -> dict:
    return _clean(
        {
            "schema_version": SCHEMA_VERSION,
            "tool": {"name": "bungee", "version": __version__},
            "command": command,
            "config": config,
            "payload": payload,
            "runtime": runtime,
        }
    )


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write(path, report: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(report))


def deterministic_part(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "runtime"}


def load_schema() -> dict:
    return json.loads(resources.files("bungee").joinpath("report.schema.json").read_text(encoding="utf-8"))
