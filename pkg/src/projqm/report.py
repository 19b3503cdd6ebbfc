"""Deterministic report and CSV artifacts shared by the CLI commands.

Reports are JSON files holding a metadata header and a list of check
entries; an entry passes exactly when its residual is at most its
tolerance.  Determinism is part of the output contract - identical inputs
must produce byte-identical files - so the writer sorts keys, relies on
Python's shortest-roundtrip float repr, and records no timestamps.  Each
entry carries a short digest of the inputs that produced it (arrays are
hashed by their bytes), which identifies reruns of the same draw without
bloating the file.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ReportEntry",
    "Report",
    "digest_inputs",
    "write_csv",
    "format_real",
    "ensure_outdir",
]


def _canonical(obj):
    """JSON-able, deterministic image of a check's inputs."""
    if isinstance(obj, np.ndarray):
        data = np.ascontiguousarray(obj)
        return {
            "array_sha": hashlib.sha256(data.tobytes()).hexdigest()[:16],
            "shape": list(data.shape),
            "dtype": str(data.dtype),
        }
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, (np.complexfloating, complex)):
        c = complex(obj)
        return [c.real, c.imag]
    if isinstance(obj, dict):
        return {str(k): _canonical(v) for k, v in sorted(obj.items())}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    if obj is None or isinstance(obj, (str, bool, int, float)):
        return obj
    raise TypeError(f"cannot digest input of type {type(obj).__name__}")


def digest_inputs(**inputs) -> str:
    """Order-independent 16-hex-char digest of keyword inputs."""
    canon = json.dumps(_canonical(inputs), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class ReportEntry:
    """One verification check: named, digested, and graded."""

    check_name: str
    inputs_digest: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "inputs_digest": self.inputs_digest,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
        }


@dataclass
class Report:
    """Entry list plus metadata; serialized deterministically."""

    command: str
    metadata: dict = field(default_factory=dict)
    entries: list[ReportEntry] = field(default_factory=list)

    def add(self, check_name: str, residual: float, tolerance: float,
            **inputs) -> ReportEntry:
        entry = ReportEntry(
            check_name=check_name,
            inputs_digest=digest_inputs(**inputs),
            residual=float(residual),
            tolerance=float(tolerance),
        )
        self.entries.append(entry)
        return entry

    @property
    def all_passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def to_json(self) -> str:
        doc = {
            "command": self.command,
            "metadata": _canonical(self.metadata),
            "entries": [e.to_dict() for e in self.entries],
            "all_pass": self.all_passed,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def write(self, path: str) -> str:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_json())
        return path


def format_real(x: float) -> str:
    """17-significant-digit decimal form (lossless for binary64)."""
    return f"{float(x):.17g}"


def write_csv(path: str, header: list[str], rows) -> str:
    """Write rows of reals as CSV with a header and 17 significant digits."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_real(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def ensure_outdir(path: str) -> str:
    """Create the output directory if needed; errors surface to the caller."""
    os.makedirs(path, exist_ok=True)
    return path
