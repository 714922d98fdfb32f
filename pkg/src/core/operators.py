"""
Finite-dimensional operator algebra behind every formula in the toolkit.

The coefficient A is Hermitian, so we diagonalize it once and keep the
eigenbasis around. After that the propagator e^{-i(lambda - A)tau} is just a
bunch of scalar exponentials, one per eigenvalue. The extension parameter W is
a plain unitary matrix.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Union

import numpy as np

from src.config import get_params
from src.core.errors import NotHermitian, NotSquare, NotUnitary, DimensionMismatch

logger = logging.getLogger(__name__)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


def _as_square(matrix: Any) -> np.ndarray:
    try:
        m = np.asarray(matrix, dtype=complex)
    except (TypeError, ValueError) as e:
        raise NotSquare(f"Matrix is not numeric: {e}")
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise NotSquare(f"Expected a non-empty square matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """The coefficient A with its cached eigendecomposition A = V diag(alpha) V*."""

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def to_eigenbasis(self, vector: Any) -> np.ndarray:
        """Coordinates of an H-vector in the eigenbasis (V* v)."""
        v = np.asarray(vector, dtype=complex).reshape(-1)
        if v.shape[0] != self.dim:
            raise DimensionMismatch(f"Vector of length {v.shape[0]} for dim {self.dim}")
        return self.eigenvectors.conj().T @ v

    def matrix_in_eigenbasis(self, matrix: np.ndarray) -> np.ndarray:
        """V* M V for an operator M given in the original basis."""
        return self.eigenvectors.conj().T @ matrix @ self.eigenvectors

    def __repr__(self) -> str:
        return f"HermitianOperator(dim={self.dim}, eigenvalues={np.round(self.eigenvalues, 6).tolist()})"


@dataclass(frozen=True, eq=False)
class UnitaryParameter:
    """The extension parameter W."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SpectralPoint:
    """A complex spectral parameter lambda."""

    lam: complex

    def __post_init__(self):
        object.__setattr__(self, 'lam', complex(self.lam))

    @property
    def lambda_i(self) -> float:
        return self.lam.imag

    @property
    def real(self) -> float:
        return self.lam.real

    def conjugate(self) -> 'SpectralPoint':
        return SpectralPoint(self.lam.conjugate())

    @classmethod
    def of(cls, value: Union['SpectralPoint', complex, float]) -> 'SpectralPoint':
        return value if isinstance(value, SpectralPoint) else cls(complex(value))


def make_hermitian(matrix: Any, params: Optional[Dict[str, Any]] = None) -> HermitianOperator:
    """Validate a Hermitian matrix and diagonalize it.

    Args:
        matrix: dim x dim complex array-like
        params: Optional overrides (uses 'hermitian_tol')

    Returns:
        HermitianOperator with ascending eigenvalues

    Raises:
        NotSquare: malformed input
        NotHermitian: relative Frobenius defect of M - M* above tolerance
    """
    p = get_params(params)
    m = _as_square(matrix)
    scale = max(np.linalg.norm(m), 1.0)
    defect = np.linalg.norm(m - m.conj().T) / scale
    if defect > p['hermitian_tol']:
        raise NotHermitian(f"Matrix is not Hermitian (relative defect {defect:.3e})")

    # Symmetrize away construction noise so the stored matrix is exactly Hermitian
    sym = 0.5 * (m + m.conj().T)
    eigenvalues, eigenvectors = np.linalg.eigh(sym)

    rebuilt = (eigenvectors * eigenvalues) @ eigenvectors.conj().T
    recon = np.linalg.norm(rebuilt - sym) / scale
    if recon > p['hermitian_tol']:
        raise NotHermitian(f"Eigendecomposition does not reconstruct the matrix ({recon:.3e})")

    logger.debug(f"Diagonalized dim={m.shape[0]} operator, spectrum [{eigenvalues[0]:.4g}, {eigenvalues[-1]:.4g}]")
    real_eigs = np.asarray(eigenvalues, dtype=float).copy()
    real_eigs.setflags(write=False)
    return HermitianOperator(matrix=_frozen(sym), eigenvalues=real_eigs,
                             eigenvectors=_frozen(eigenvectors))


def make_unitary(matrix: Any, params: Optional[Dict[str, Any]] = None) -> UnitaryParameter:
    """Validate W*W = I and WW* = I.

    Raises:
        NotSquare: malformed input
        NotUnitary: Frobenius defect above 'unitary_tol'
    """
    p = get_params(params)
    w = _as_square(matrix)
    eye = np.eye(w.shape[0])
    defect = max(np.linalg.norm(w.conj().T @ w - eye), np.linalg.norm(w @ w.conj().T - eye))
    if defect > p['unitary_tol']:
        raise NotUnitary(f"Matrix is not unitary (defect {defect:.3e})")
    return UnitaryParameter(matrix=_frozen(w))


def phase_unitary(dim: int, phi: float) -> UnitaryParameter:
    """W = e^{i phi} I."""
    return make_unitary(np.exp(1j * phi) * np.eye(dim))


def propagator_rates(A: HermitianOperator, lam: Union[SpectralPoint, complex]) -> np.ndarray:
    """Eigenbasis exponents beta_k = i(alpha_k - lambda), so e^{-i(lambda-A)tau} = diag(e^{beta_k tau})."""
    z = SpectralPoint.of(lam).lam
    return 1j * (A.eigenvalues - z)


def propagator(A: HermitianOperator, lam: Union[SpectralPoint, complex], tau: float) -> np.ndarray:
    """Matrix exponential e^{-i(lambda - A)tau} in the original basis.

    Computed as e^{-i lambda tau} V diag(e^{i alpha tau}) V*, so the operator
    2-norm is exactly e^{Im(lambda) tau}.
    """
    z = SpectralPoint.of(lam).lam
    phases = np.exp(1j * A.eigenvalues * tau)
    V = A.eigenvectors
    return np.exp(-1j * z * tau) * ((V * phases) @ V.conj().T)
