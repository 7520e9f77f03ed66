"""Run manifests and deterministic CSV emission.

Every command that writes files also writes a manifest JSON next to them
recording the resolved configuration, the output list and the wall time;
identical manifests imply bit-identical CSVs (floats are serialised via
repr, which round-trips exactly).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__


def format_float(x: float) -> str:
    if x != x:  # NaN
        return "nan"
    if x == float("inf"):
        return "inf"
    if x == float("-inf"):
        return "-inf"
    return repr(float(x))


def write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_float(v) if isinstance(v, float)
                              else str(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass
class RunManifest:
    command: str
    config: dict
    outputs: list[str] = field(default_factory=list)
    wall_time_s: float = 0.0
    version: str = __version__

    def to_json(self) -> str:
        return json.dumps({
            "command": self.command,
            "config": self.config,
            "outputs": self.outputs,
            "wall_time_s": round(self.wall_time_s, 3),
            "version": self.version,
        }, indent=1, sort_keys=True)


class ManifestWriter:
    """Collects outputs for one command run and writes the manifest."""

    def __init__(self, command: str, config: dict):
        self.manifest = RunManifest(command=command, config=config)
        self._t0 = time.monotonic()

    def add(self, path: Path) -> Path:
        self.manifest.outputs.append(str(path))
        return path

    def finish(self, directory: Path | None = None) -> RunManifest:
        self.manifest.wall_time_s = time.monotonic() - self._t0
        if directory is not None and self.manifest.outputs:
            name = self.manifest.command.split()[0]
            out = directory / f"{name}.manifest.json"
            out.write_text(self.manifest.to_json() + "\n", encoding="utf-8")
            self.manifest.outputs.append(str(out))
        return self.manifest
