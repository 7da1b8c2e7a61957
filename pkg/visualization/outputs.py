"""
Frontlab - Report Writers
JSON reports, CSV histories and binary PGM snapshots of scalar fields.
"""

import json
import os
import pandas as pd
import numpy as np
from typing import Any, Dict, Optional
import logging

from config import REPORTING_CONFIG
from geometry.grid import ScalarField

logger = logging.getLogger(__name__)


def _ensure_parent(path: str):
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def to_serializable(value: Any) -> Any:
    """Convert numpy scalars, arrays and frames into plain JSON types; nan and inf become strings."""
    if isinstance(value, dict):
        return {str(k): to_serializable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_serializable(v) for v in value]
    if isinstance(value, pd.DataFrame):
        return to_serializable(value.to_dict(orient='records'))
    if isinstance(value, np.ndarray):
        return to_serializable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if np.isnan(value):
            return 'nan'
        if np.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    return value


def write_json(data: Dict, path: str) -> str:
    """Write a report with sorted keys; floats keep their shortest exact repr."""
    try:
        _ensure_parent(path)
        with open(path, 'w', encoding='utf-8') as fh:
            json.dump(to_serializable(data), fh, indent=2, sort_keys=True)
            fh.write('\n')
        logger.info(f"Report written to {path}")
        return path
    except Exception as e:
        logger.error(f"Writing JSON report {path} failed: {e}")
        raise


def write_csv(frame: pd.DataFrame, path: str, float_format: Optional[str] = None) -> str:
    """Write a history or summary table without the index."""
    try:
        _ensure_parent(path)
        frame.to_csv(path, index=False, float_format=float_format or REPORTING_CONFIG['float_format'],
                     lineterminator='\n')
        logger.info(f"Table with {len(frame)} rows written to {path}")
        return path
    except Exception as e:
        logger.error(f"Writing CSV {path} failed: {e}")
        raise


def field_to_image(field: ScalarField, maxval: Optional[int] = None) -> np.ndarray:
    """
    8-bit image of a field: values in [0, 1] scaled to [0, maxval], solid cells black.

    Image rows run from the top of the strip (largest y) down; columns follow x1.
    """
    maxval = maxval or REPORTING_CONFIG['pgm_maxval']
    values = np.clip(field.values, 0.0, 1.0)
    scaled = np.rint(values * maxval).astype(np.uint8)
    scaled[~field.grid.fluid] = 0
    return np.flipud(scaled.T)


def write_pgm(field: ScalarField, path: str) -> str:
    """Binary P5 snapshot of a field."""
    try:
        _ensure_parent(path)
        image = field_to_image(field)
        rows, cols = image.shape
        with open(path, 'wb') as fh:
            fh.write(f"P5\n{cols} {rows}\n{REPORTING_CONFIG['pgm_maxval']}\n".encode('ascii'))
            fh.write(np.ascontiguousarray(image).tobytes())
        logger.info(f"Snapshot {cols}x{rows} written to {path}")
        return path
    except Exception as e:
        logger.error(f"Writing PGM snapshot {path} failed: {e}")
        raise


def read_pgm(path: str) -> np.ndarray:
    """Read back a P5 file written by write_pgm."""
    with open(path, 'rb') as fh:
        data = fh.read()
    header = data.split(b'\n', 3)
    if header[0] != b'P5':
        raise ValueError(f"{path} is not a binary PGM file")
    cols, rows = (int(v) for v in header[1].split())
    return np.frombuffer(header[3], dtype=np.uint8, count=rows * cols).reshape(rows, cols)
