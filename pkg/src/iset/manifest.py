"""Run manifests and deterministic output formatting.

Every emitted result embeds a manifest: command name, full parameter
set, seed, tool version, timestamp. The timestamp always sits on its
own line (``timestamp:`` in text, ``# timestamp:`` in CSV) so that two
runs with identical manifests produce byte-identical result bodies
once that single line is ignored.
"""

from __future__ import annotations

import datetime
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence, TextIO

from . import __version__


def _jsonable(value: Any):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


@dataclass(frozen=True)
class RunManifest:
    command: str
    params: dict
    seed: int | None
    version: str
    timestamp: str

    @classmethod
    def create(cls, command: str, params: dict, seed: int | None = None) -> "RunManifest":
        stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(
            timespec="seconds"
        )
        return cls(command, _jsonable(params), seed, __version__, stamp)

    def body_json(self) -> str:
        """The manifest without its timestamp, canonically serialized."""
        return json.dumps(
            {
                "command": self.command,
                "params": self.params,
                "seed": self.seed,
                "version": self.version,
            },
            sort_keys=True,
        )


def write_text_block(fields: dict, manifest: RunManifest, out: TextIO) -> None:
    """key: value lines preceded by the manifest and its timestamp."""
    out.write(f"manifest: {manifest.body_json()}\n")
    out.write(f"timestamp: {manifest.timestamp}\n")
    for key, value in fields.items():
        out.write(f"{key}: {value}\n")


def write_json_line(fields: dict, manifest: RunManifest, out: TextIO) -> None:
    payload = dict(_jsonable(fields))
    payload["manifest"] = json.loads(manifest.body_json())
    payload["timestamp"] = manifest.timestamp
    out.write(json.dumps(payload, sort_keys=True) + "\n")


def write_csv(
    header: Sequence[str],
    rows: Iterable[Sequence],
    manifest: RunManifest,
    out: TextIO,
) -> None:
    """CSV with the manifest embedded as comment header lines."""
    out.write(f"# manifest: {manifest.body_json()}\n")
    out.write(f"# timestamp: {manifest.timestamp}\n")
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(str(v) for v in row) + "\n")
