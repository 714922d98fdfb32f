"""Random inputs for the property suites: Hermitian matrices, Haar unitaries, atom functions."""

from typing import Tuple

import numpy as np

from src.space.halfline import LEFT, RIGHT, HalfLineFunction, TwoComponentFunction


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (z + z.conj().T)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-distributed unitary from the QR of a complex Gaussian matrix."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.normal(size=dim) + 1j * rng.normal(size=dim)


def random_halfline(rng: np.random.Generator, side: str, anchor: float, dim: int,
                    n_atoms: int = 3, rate_range: Tuple[float, float] = (0.1, 5.0),
                    imag_range: float = 3.0) -> HalfLineFunction:
    """Sum of n_atoms atoms with |Re rate| in rate_range and Im rate in [-imag_range, imag_range]."""
    magnitude = rng.uniform(*rate_range, size=n_atoms)
    real = magnitude if side == LEFT else -magnitude
    rates = real + 1j * rng.uniform(-imag_range, imag_range, size=n_atoms)
    coeffs = rng.normal(size=(n_atoms, dim)) + 1j * rng.normal(size=(n_atoms, dim))
    return HalfLineFunction(side, anchor, dim, rates, coeffs)


def random_two_component(rng: np.random.Generator, dim: int, a: float = -1.0, b: float = 1.0,
                         n_atoms: int = 3, **kwargs) -> TwoComponentFunction:
    return TwoComponentFunction(random_halfline(rng, LEFT, a, dim, n_atoms, **kwargs),
                                random_halfline(rng, RIGHT, b, dim, n_atoms, **kwargs))
