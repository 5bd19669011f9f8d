"""Run manifests: config echo, input content hashes, deterministic hash.

The manifest hash covers everything except the creation timestamp, so
two runs on identical inputs and config produce the same hash and every
artifact can embed it for provenance audits.
"""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from pathlib import Path

VOLATILE_KEYS = ("created",)


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def build_manifest(
    command: str, config: dict, inputs: list[str | Path], version: str
) -> dict:
    return {
        "tool": "climfisc",
        "version": version,
        "command": command,
        "config": {k: config[k] for k in sorted(config)},
        "inputs": {str(p): sha256_file(p) for p in sorted(str(p) for p in inputs)},
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def manifest_hash(manifest: dict) -> str:
    stable = {k: v for k, v in manifest.items() if k not in VOLATILE_KEYS}
    payload = json.dumps(stable, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def write_manifest(manifest: dict, path: str | Path) -> str:
    """Write manifest JSON (with its own hash embedded) and return the hash."""
    digest = manifest_hash(manifest)
    payload = dict(manifest)
    payload["manifest_hash"] = digest
    Path(path).write_text(
        json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return digest
