"""
JSON layouts for matrices, vectors and atom functions.

Complex numbers are [re, im] pairs. Matrices are {"dim": n, "entries": [...]} with
the n*n entries in row-major order. Function coefficients and boundary vectors
are coordinates in A's eigenbasis.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np

from src.core.errors import MalformedInput
from src.core.operators import HermitianOperator, UnitaryParameter, make_hermitian, make_unitary
from src.space.halfline import HalfLineFunction, TwoComponentFunction


def _pair(z: complex) -> List[float]:
    z = complex(z)
    return [z.real, z.imag]


def _complex(pair: Any) -> complex:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise MalformedInput(f"Expected a [re, im] pair, got {pair!r}")
    try:
        return complex(float(pair[0]), float(pair[1]))
    except (TypeError, ValueError):
        raise MalformedInput(f"Non-numeric complex pair {pair!r}")


def vector_to_json(v: Any) -> List[List[float]]:
    return [_pair(z) for z in np.asarray(v, dtype=complex).reshape(-1)]


def vector_from_json(obj: Any) -> np.ndarray:
    if not isinstance(obj, list):
        raise MalformedInput("Vector must be a list of [re, im] pairs")
    return np.array([_complex(p) for p in obj], dtype=complex)


def matrix_to_json(m: Any) -> Dict[str, Any]:
    m = np.asarray(m, dtype=complex)
    return {'dim': int(m.shape[0]), 'entries': vector_to_json(m.reshape(-1))}


def matrix_from_json(obj: Any) -> np.ndarray:
    if not isinstance(obj, dict) or 'dim' not in obj or 'entries' not in obj:
        raise MalformedInput("Matrix must be an object with 'dim' and 'entries'")
    dim = obj['dim']
    if not isinstance(dim, int) or dim < 1:
        raise MalformedInput(f"Bad dim {dim!r}")
    entries = vector_from_json(obj['entries'])
    if entries.size != dim * dim:
        raise MalformedInput(f"Expected {dim * dim} entries, got {entries.size}")
    return entries.reshape(dim, dim)


def halfline_to_json(f: HalfLineFunction) -> Dict[str, Any]:
    return {
        'side': f.side,
        'anchor': f.anchor,
        'dim': f.dim,
        'atoms': [{'rate': _pair(mu), 'coeff': vector_to_json(c)}
                  for mu, c in zip(f.rates, f.coefficients)],
    }


def halfline_from_json(obj: Any) -> HalfLineFunction:
    try:
        side, anchor, dim, atoms = obj['side'], float(obj['anchor']), int(obj['dim']), obj['atoms']
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedInput(f"Half-line function is missing fields: {e}")
    if not isinstance(atoms, list) or not all(isinstance(atom, dict) for atom in atoms):
        raise MalformedInput("'atoms' must be a list of objects")
    rates = [_complex(atom.get('rate')) for atom in atoms]
    coeffs = [vector_from_json(atom.get('coeff')) for atom in atoms]
    if any(c.size != dim for c in coeffs):
        raise MalformedInput(f"Atom coefficients must have length {dim}")
    return HalfLineFunction(side, anchor, dim, rates, np.array(coeffs).reshape(len(coeffs), dim))


def two_component_to_json(u: TwoComponentFunction) -> Dict[str, Any]:
    return {'left': halfline_to_json(u.left), 'right': halfline_to_json(u.right)}


def two_component_from_json(obj: Any) -> TwoComponentFunction:
    if not isinstance(obj, dict) or 'left' not in obj or 'right' not in obj:
        raise MalformedInput("Function must be an object with 'left' and 'right'")
    return TwoComponentFunction(halfline_from_json(obj['left']), halfline_from_json(obj['right']))


def resolvent_output_to_json(out) -> Dict[str, Any]:
    data = {
        'lambda': _pair(out.lam.lam),
        'branch': out.branch,
        'residual': out.residual,
        'bc_defect': out.bc_defect,
        'u': two_component_to_json(out.u),
    }
    if out.f_star is not None:
        data['f_star'] = vector_to_json(out.f_star)
    if out.g_star is not None:
        data['g_star'] = vector_to_json(out.g_star)
    return data


def load_json(path: Union[str, Path]) -> Any:
    path = Path(path)
    if not path.exists():
        raise MalformedInput(f"File not found: {path}")
    try:
        with open(path, 'r', encoding='utf-8') as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise MalformedInput(f"{path} is not valid JSON: {e}")


def load_hermitian(path: Union[str, Path]) -> HermitianOperator:
    return make_hermitian(matrix_from_json(load_json(path)))


def load_unitary(path: Union[str, Path]) -> UnitaryParameter:
    return make_unitary(matrix_from_json(load_json(path)))


def load_function(path: Union[str, Path]) -> TwoComponentFunction:
    return two_component_from_json(load_json(path))
