"""Provenance manifests embedded in every artifact.

No timestamps: reruns with identical inputs must produce byte-identical
artifacts, so a manifest is a pure function of the tool version, the
stage, its parameters, and the input file hashes.
"""

from __future__ import annotations

import hashlib
from pathlib import Path

from . import __version__

MANIFEST_KEYS = ("tool", "version", "stage", "parameters", "inputs")


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def build_manifest(stage: str, parameters: dict,
                   inputs: dict[str, str | Path]) -> dict:
    return {
        "tool": "fitclams",
        "version": __version__,
        "stage": stage,
        "parameters": parameters,
        "inputs": {
            name: {"path": str(path), "sha256": sha256_file(path)}
            for name, path in sorted(inputs.items())
        },
    }


def validate_manifest(manifest: dict) -> list[str]:
    problems = [f"missing manifest key {k!r}" for k in MANIFEST_KEYS
                if k not in manifest]
    if manifest.get("tool") != "fitclams":
        problems.append("manifest tool is not 'fitclams'")
    for name, entry in manifest.get("inputs", {}).items():
        if not isinstance(entry, dict) or "sha256" not in entry:
            problems.append(f"input {name!r} lacks a sha256 digest")
    return problems
