"""
File utility functions for the NCG toolkit
"""
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Sequence

import numpy as np
import pandas as pd

from src.utils.errors import ParseError, WriteFailure
from src.utils.logger import logger

def get_file_extension(file_path: str) -> str:
    """
    Get file extension from a path

    Args:
        file_path: Path to file

    Returns:
        Lower-case extension with dot (e.g., '.json')
    """
    return Path(file_path).suffix.lower()

def encode_float(x: float) -> float:
    """Float with negative zero normalized away"""
    return float(x) + 0.0

def encode_complex(z: complex) -> List[float]:
    return [encode_float(z.real), encode_float(z.imag)]

def encode_matrix(M: np.ndarray) -> List[List[List[float]]]:
    """
    Encode a complex matrix as rows of [re, im] entries

    Args:
        M: 2-D complex array

    Returns:
        Nested list suitable for JSON
    """
    return [[encode_complex(complex(z)) for z in row] for row in np.asarray(M)]

def decode_matrix(data: Any, name: str) -> np.ndarray:
    """
    Decode rows of [re, im] entries into a complex matrix

    Args:
        data: Parsed JSON value
        name: Field name used in diagnostics

    Returns:
        complex128 ndarray
    """
    if not isinstance(data, list) or not data:
        raise ParseError(f"field '{name}': expected a non-empty array of rows")
    width = None
    rows = []
    for r, row in enumerate(data):
        if not isinstance(row, list):
            raise ParseError(f"field '{name}' row {r}: expected an array of entries")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"field '{name}' row {r}: has {len(row)} entries, expected {width}")
        values = []
        for c, entry in enumerate(row):
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)):
                raise ParseError(f"field '{name}' entry ({r}, {c}): expected [re, im] numbers")
            values.append(complex(entry[0], entry[1]))
        rows.append(values)
    M = np.array(rows, dtype=np.complex128)
    if not np.all(np.isfinite(M)):
        raise ParseError(f"field '{name}': non-finite entries")
    return M

def canonical_json(payload: Any) -> str:
    """Sorted keys, shortest round-trip floats, newline-terminated"""
    try:
        return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"
    except (TypeError, ValueError) as e:
        raise WriteFailure(f"Payload cannot be written as canonical JSON: {e}")

def load_json(path: Path) -> Dict:
    """
    Read a JSON document with line/column diagnostics on failure

    Args:
        path: Path to JSON file

    Returns:
        Parsed object
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"Cannot read {path}: {e}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}")
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top-level value must be an object")
    return data

def write_atomic(path: Path, text: str) -> Path:
    """
    Write text through a temporary file in the target directory and rename it into place

    Args:
        path: Destination
        text: File contents

    Returns:
        Destination path
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, 'w', encoding="utf-8", newline="\n") as f:
                f.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as e:
        raise WriteFailure(f"Cannot write {path}: {e}")
    logger.debug(f"Wrote {path}")
    return path

def write_json(path: Path, payload: Any) -> Path:
    return write_atomic(path, canonical_json(payload))

def write_table(path: Path, rows: Sequence[Dict], columns: Sequence[str] = None) -> Path:
    """
    Write records as CSV with pandas, atomically

    Args:
        path: Destination
        rows: Records
        columns: Optional column order

    Returns:
        Destination path
    """
    df = pd.DataFrame(list(rows), columns=list(columns) if columns else None)
    return write_atomic(path, df.to_csv(index=False, float_format="%.17g"))
