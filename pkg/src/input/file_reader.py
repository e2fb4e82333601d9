"""
Geometry and one-form file readers

Geometry files:
    {"version": 1, "algebra": "R"|"H"|"C", "n": int,
     "signature": {"p": 0, "q": 4}, "L": [4 matrices], "H": [4 matrices]}
with optional charged coefficients "theta" and "y" written by `fluctuate`.

One-form files:
    {"version": 1, "pairs": [{"a": matrix, "b": matrix}, ...], "symmetrize": bool}
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.config.settings import settings
from src.geometry.matrix_geometry import (
    AlgebraKind,
    MatrixGeometry,
    build_dirac_data,
    build_fermion_space,
    check_coefficients,
)
from src.numerics.tolerance import Tolerance, DEFAULT_TOLERANCE
from src.utils.errors import InvalidConfig, ParseError
from src.utils.file_utils import decode_matrix, encode_matrix, load_json
from src.utils.logger import logger

@dataclass(frozen=True)
class GeometryFile:
    """A geometry with the optional charged coefficients of a fluctuation bundle"""
    geometry: MatrixGeometry
    theta: Optional[Tuple[np.ndarray, ...]] = None
    ygrav: Optional[Tuple[np.ndarray, ...]] = None

    @property
    def charged(self) -> bool:
        return self.theta is not None

@dataclass(frozen=True)
class OneFormFile:
    pairs: Tuple[Tuple[np.ndarray, np.ndarray], ...]
    symmetrize: bool = True

def _require(data: Dict, key: str, path: Path):
    if key not in data:
        raise ParseError(f"{path}: missing field '{key}'")
    return data[key]

def _check_version(data: Dict, path: Path) -> None:
    version = _require(data, 'version', path)
    if version != settings.FILE_VERSION:
        raise ParseError(f"{path}: field 'version' is {version!r}, expected {settings.FILE_VERSION}")

def _matrix_list(data: Dict, key: str, path: Path, n: int) -> List[np.ndarray]:
    value = _require(data, key, path)
    if not isinstance(value, list) or len(value) != 4:
        raise ParseError(f"{path}: field '{key}' must hold 4 matrices")
    matrices = [decode_matrix(m, f"{key}[{i}]") for i, m in enumerate(value)]
    for i, M in enumerate(matrices):
        if M.shape != (n, n):
            raise ParseError(f"{path}: field '{key}[{i}]' has shape {M.shape}, expected ({n}, {n})")
    return matrices

class GeometryFileReader:
    """Read and validate geometry files"""

    def __init__(self, path: Path, tol: Tolerance = DEFAULT_TOLERANCE):
        """
        Initialize reader

        Args:
            path: Path to geometry JSON file
            tol: Tolerance for the type invariants of the matrices
        """
        self.path = Path(path)
        self.tol = tol

    def load(self) -> GeometryFile:
        """
        Parse the file and validate every matrix

        Returns:
            GeometryFile
        """
        data = load_json(self.path)
        _check_version(data, self.path)

        code = _require(data, 'algebra', self.path)
        n = _require(data, 'n', self.path)
        if not isinstance(n, int) or isinstance(n, bool):
            raise ParseError(f"{self.path}: field 'n' must be an integer")
        try:
            kind = AlgebraKind.from_code(code, n)
        except InvalidConfig as e:
            raise ParseError(f"{self.path}: {e}")

        signature = _require(data, 'signature', self.path)
        if (not isinstance(signature, dict)
                or not all(isinstance(signature.get(k), int) and not isinstance(signature.get(k), bool) for k in ('p', 'q'))):
            raise ParseError(f"{self.path}: field 'signature' must be {{'p': int, 'q': int}}")

        L = _matrix_list(data, 'L', self.path, n)
        H = _matrix_list(data, 'H', self.path, n)
        space = build_fermion_space(kind, signature['p'], signature['q'])
        dirac = build_dirac_data(L, H, space, self.tol)

        theta = ygrav = None
        if 'theta' in data or 'y' in data:
            theta = tuple(_matrix_list(data, 'theta', self.path, n))
            ygrav = tuple(_matrix_list(data, 'y', self.path, n))
            check_coefficients(kind, [('theta', theta, True), ('y', ygrav, False)], self.tol)

        logger.info(f"Loaded geometry {self.path}: algebra={kind.code}, n={n}")
        return GeometryFile(geometry=MatrixGeometry(space=space, dirac=dirac), theta=theta, ygrav=ygrav)

def read_geometry(path: Path, tol: Tolerance = DEFAULT_TOLERANCE) -> GeometryFile:
    return GeometryFileReader(path, tol).load()

def read_one_form(path: Path) -> OneFormFile:
    """
    Read a one-form generator file

    Args:
        path: Path to one-form JSON file

    Returns:
        OneFormFile
    """
    path = Path(path)
    data = load_json(path)
    _check_version(data, path)
    pairs = _require(data, 'pairs', path)
    if not isinstance(pairs, list) or not pairs:
        raise ParseError(f"{path}: field 'pairs' must be a non-empty array")
    decoded = []
    for i, pair in enumerate(pairs):
        if not isinstance(pair, dict) or 'a' not in pair or 'b' not in pair:
            raise ParseError(f"{path}: field 'pairs[{i}]' must have 'a' and 'b'")
        decoded.append((decode_matrix(pair['a'], f"pairs[{i}].a"), decode_matrix(pair['b'], f"pairs[{i}].b")))
    symmetrize = data.get('symmetrize', True)
    if not isinstance(symmetrize, bool):
        raise ParseError(f"{path}: field 'symmetrize' must be true or false")
    logger.info(f"Loaded one-form {path}: {len(decoded)} pairs")
    return OneFormFile(pairs=tuple(decoded), symmetrize=symmetrize)

def geometry_to_dict(geom: MatrixGeometry, theta=None, ygrav=None) -> Dict:
    """Geometry file payload, with the charged coefficients when given"""
    space = geom.space
    payload = {
        'version': settings.FILE_VERSION,
        'algebra': space.algebra.code,
        'n': space.n,
        'signature': {'p': space.clifford.p, 'q': space.clifford.q},
        'L': [encode_matrix(M) for M in geom.dirac.L],
        'H': [encode_matrix(M) for M in geom.dirac.H],
    }
    if theta is not None:
        payload['theta'] = [encode_matrix(M) for M in theta]
        payload['y'] = [encode_matrix(M) for M in ygrav]
    return payload

def one_form_to_dict(pairs, symmetrize: bool = True) -> Dict:
    return {
        'version': settings.FILE_VERSION,
        'pairs': [{'a': encode_matrix(a), 'b': encode_matrix(b)} for a, b in pairs],
        'symmetrize': symmetrize,
    }
