"""
Field grid exports: CSV with a commented metadata header, and portable graymap
images with a JSON sidecar
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
from PIL import Image

from utils.artifacts import ArtifactError

logger = logging.getLogger(__name__)


def _metadata_lines(metadata: Dict[str, Any]) -> str:
    return "\n".join(f"{key}: {json.dumps(value, sort_keys=True)}" for key, value in sorted(metadata.items()))


def export_csv(path: Union[str, Path], field_grid: np.ndarray, metadata: Dict[str, Any]) -> Path:
    """One grid row per line; metadata goes into '#' header lines"""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, field_grid, delimiter=",", fmt="%.10e", header=_metadata_lines(metadata), comments="# ")
    except OSError as e:
        raise ArtifactError(f"Failed to write field CSV {path}: {e}") from e
    logger.info(f"Field CSV saved: {path}")
    return path


def load_csv(path: Union[str, Path]) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", comments="#")


def to_graymap(field_grid: np.ndarray) -> np.ndarray:
    """Map F symmetrically to 0..255 so the nodal set sits at mid-gray; row 0 is the top (largest y)"""
    field_grid = np.asarray(field_grid, dtype=float)
    scale = float(np.abs(field_grid).max()) or 1.0
    gray = np.rint((field_grid / scale + 1.0) * 127.5)
    return np.clip(gray, 0, 255).astype(np.uint8)[::-1]


def export_pgm(path: Union[str, Path], field_grid: np.ndarray, metadata: Dict[str, Any]) -> Path:
    """Write a binary PGM and `<name>.json` next to it"""
    path = Path(path)
    sidecar = path.with_suffix(".json")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        Image.fromarray(to_graymap(field_grid)).save(path, format="PPM")
        with open(sidecar, 'w', encoding='utf-8') as f:
            json.dump(metadata, f, indent=2, sort_keys=True, ensure_ascii=False)
    except OSError as e:
        raise ArtifactError(f"Failed to write graymap {path}: {e}") from e
    logger.info(f"Graymap saved: {path} (+ {sidecar.name})")
    return path
