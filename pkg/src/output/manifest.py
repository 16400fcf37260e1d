"""Run manifests: what a command read and the hashes of what it wrote."""

import hashlib
from pathlib import Path
from typing import Any, Dict, Iterable

from ..models.run import RunManifest
from .json_generator import write_json

RUN_MANIFEST_FILE = "run_manifest.json"


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(65536), b""):
            digest.update(block)
    return digest.hexdigest()


def build_run_manifest(
    command: str,
    config: Dict[str, Any],
    seeds: Dict[str, int],
    inputs: Iterable[Path],
    outputs: Iterable[Path],
    out_dir: Path,
    duration_seconds: float,
) -> RunManifest:
    """Hash every output; paths inside out_dir are recorded relative to it."""
    out_dir = Path(out_dir).resolve()
    hashes = {}
    for path in sorted(Path(p) for p in outputs):
        resolved = path.resolve()
        key = resolved.relative_to(out_dir).as_posix() if resolved.is_relative_to(out_dir) else str(path)
        hashes[key] = sha256_file(path)
    return RunManifest(
        command=command,
        config=config,
        seeds=seeds,
        inputs=[str(p) for p in inputs],
        outputs=hashes,
        duration_seconds=round(duration_seconds, 3),
    )


def write_run_manifest(out_dir: Path, manifest: RunManifest) -> Path:
    return write_json(Path(out_dir) / RUN_MANIFEST_FILE, manifest.to_dict())
