"""
Schema-versioned JSON artifacts for certificates, censuses and ensemble statistics
"""
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional, Union

from .errors import NodalBoundsError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class ArtifactError(NodalBoundsError, OSError):
    """Artifact could not be written or read; message carries the path"""


def encode_artifact(kind: str, payload: Dict[str, Any], deterministic: bool = False,
                    metadata: Optional[Dict[str, Any]] = None) -> str:
    """
    Render one artifact document as text

    Args:
        kind: Record type, e.g. "barrier_certificate"
        payload: The record's to_dict() output
        deterministic: Omit the timestamp so identical inputs give identical bytes
        metadata: Free-form provenance (seed, grid, truncation)

    Returns:
        JSON text terminated by a newline
    """
    document: Dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "kind": kind,
        "metadata": metadata or {},
        "payload": payload,
    }
    if not deterministic:
        document["generated_at"] = datetime.now().isoformat()
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def decode_artifact(text: str, source: str = "<string>") -> Dict[str, Any]:
    """Parse artifact text and check its schema version"""
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ArtifactError(f"{source}: not valid JSON ({e})") from e
    if not isinstance(document, dict) or document.get("schema") != SCHEMA_VERSION:
        raise ArtifactError(f"{source}: unsupported artifact schema {document.get('schema') if isinstance(document, dict) else None!r}")
    for key in ("kind", "payload"):
        if key not in document:
            raise ArtifactError(f"{source}: artifact is missing '{key}'")
    return document


class ArtifactStore:
    """Write and read artifacts under one output directory"""

    def __init__(self, output_dir: Union[str, Path], deterministic: bool = False):
        self.output_dir = Path(output_dir)
        self.deterministic = deterministic

    def resolve(self, filename: Union[str, Path]) -> Path:
        path = Path(filename)
        return path if path.is_absolute() else self.output_dir / path

    def save(self, kind: str, payload: Dict[str, Any], filename: Union[str, Path],
             metadata: Optional[Dict[str, Any]] = None) -> Path:
        """Write one artifact and return its path"""
        path = self.resolve(filename)
        text = encode_artifact(kind, payload, deterministic=self.deterministic, metadata=metadata)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', encoding='utf-8') as f:
                f.write(text)
        except OSError as e:
            raise ArtifactError(f"Failed to write artifact {path}: {e}") from e
        logger.info(f"Artifact saved: {path}")
        return path

    def save_text(self, text: str, filename: Union[str, Path]) -> Path:
        path = self.resolve(filename)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', encoding='utf-8') as f:
                f.write(text)
        except OSError as e:
            raise ArtifactError(f"Failed to write {path}: {e}") from e
        logger.info(f"Report saved: {path}")
        return path

    def load(self, filename: Union[str, Path]) -> Dict[str, Any]:
        """Read one artifact document (schema, kind, metadata, payload)"""
        path = self.resolve(filename)
        try:
            with open(path, 'r', encoding='utf-8') as f:
                text = f.read()
        except OSError as e:
            raise ArtifactError(f"Failed to read artifact {path}: {e}") from e
        document = decode_artifact(text, source=str(path))
        logger.debug(f"Artifact loaded: {path} ({document['kind']})")
        return document

    def exists(self, filename: Union[str, Path]) -> bool:
        return self.resolve(filename).exists()
