"""Integrity manifest of a run directory: SHA-256 digest of every output file
plus the wall-clock runtime, kept apart so the outputs themselves stay
byte-identical across reruns."""

import hashlib
import json
import os
from datetime import datetime, timezone
from typing import Dict, List

from qmemsim.config import logger

MANIFEST_FILE = "manifest.json"


class ManifestManager:
    """Creates and verifies manifest.json for an output directory."""

    def __init__(self, out_dir: str):
        self.out_dir = out_dir
        self.manifest_path = os.path.join(out_dir, MANIFEST_FILE)

    def _file_hash(self, path: str) -> str:
        """Compute SHA256 hash of a file for integrity check."""
        try:
            hash_sha256 = hashlib.sha256()
            with open(path, "rb") as f:
                for chunk in iter(lambda: f.read(4096), b""):
                    hash_sha256.update(chunk)
            return hash_sha256.hexdigest()
        except OSError as e:
            logger.error("Failed to compute hash for %s: %s", path, e)
            raise

    def digests(self) -> Dict[str, str]:
        """Digest of every regular file except the manifest, by file name."""
        names = sorted(
            name
            for name in os.listdir(self.out_dir)
            if name != MANIFEST_FILE and os.path.isfile(os.path.join(self.out_dir, name))
        )
        return {name: self._file_hash(os.path.join(self.out_dir, name)) for name in names}

    def write(self, runtime_seconds: float, command: str) -> Dict[str, object]:
        """Hash the outputs and write manifest.json."""
        manifest = {
            "command": command,
            "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "runtime_seconds": round(runtime_seconds, 3),
            "files": self.digests(),
        }
        try:
            with open(self.manifest_path, "w", encoding="utf-8") as f:
                json.dump(manifest, f, indent=2, sort_keys=True)
                f.write("\n")
        except OSError as e:
            logger.error("Error writing manifest: %s", e)
            raise
        logger.info("Manifest written for %d file(s): %s", len(manifest["files"]), self.manifest_path)
        return manifest

    def read(self) -> Dict[str, object]:
        with open(self.manifest_path, "r", encoding="utf-8") as f:
            return json.load(f)

    def verify(self) -> List[str]:
        """Names of files whose digest no longer matches, or that went missing."""
        recorded = self.read()["files"]
        assert isinstance(recorded, dict)
        current = self.digests()
        bad = sorted(name for name, digest in recorded.items() if current.get(name) != digest)
        if bad:
            logger.error("Manifest verification FAILED for: %s", ", ".join(bad))
        else:
            logger.info("Manifest verified: %d file(s) intact", len(recorded))
        return bad
