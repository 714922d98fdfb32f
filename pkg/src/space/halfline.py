"""
Vector-valued L2 functions on (-inf, a) and (b, +inf).

A function is a finite sum of exponential atoms c * e^{mu (t - anchor)},
with c a coefficient vector in A's eigenbasis. Left atoms decay towards
-inf (Re mu > 0), right atoms towards +inf (Re mu < 0). This family is closed
under the differential expression and under every integral operator of the
resolvent, and inner products have a closed form, so nothing here is
approximate except `quadrature_inner`, which exists as an oracle.

Inner products are linear in the first slot and conjugate-linear in the second.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Optional, Tuple

import numpy as np

from src.config import get_params
from src.core.errors import DimensionMismatch, InvalidAtom, OutOfDomain, SideMismatch
from src.core.operators import HermitianOperator
from src.utils.quadrature import gauss_legendre_panels

logger = logging.getLogger(__name__)

LEFT = 'left'
RIGHT = 'right'
SIDES = (LEFT, RIGHT)


@dataclass(frozen=True, eq=False)
class ExponentialAtom:
    """One term c * e^{rate (t - anchor)}."""

    rate: complex
    coefficient: np.ndarray
    anchor: float
    side: str


def _merge(rates: np.ndarray, coefficients: np.ndarray, dim: int) -> Tuple[np.ndarray, np.ndarray]:
    """Sum atoms sharing an identical rate and drop exact zeros."""
    if rates.size == 0:
        return np.zeros(0, dtype=complex), np.zeros((0, dim), dtype=complex)
    unique, inverse = np.unique(rates, return_inverse=True)
    summed = np.zeros((unique.size, dim), dtype=complex)
    np.add.at(summed, inverse.reshape(-1), coefficients)
    keep = np.any(summed != 0, axis=1)
    return unique[keep], summed[keep]


class HalfLineFunction:
    """
    Finite sum of exponential atoms on one half-line.

    Atoms with the same rate are merged on construction, which keeps sums
    like l(u) - lambda*u - f exact to round-off instead of relying on
    cancellation inside the Gram sum.
    """

    def __init__(self, side: str, anchor: float, dim: int,
                 rates: Optional[Iterable[complex]] = None,
                 coefficients: Optional[Any] = None,
                 params: Optional[Dict[str, Any]] = None):
        """
        Args:
            side: 'left' for (-inf, anchor), 'right' for (anchor, +inf)
            anchor: a or b
            dim: dim H
            rates: atom exponents mu
            coefficients: (n_atoms, dim) eigenbasis coefficients
            params: Optional overrides (uses 'rate_floor')
        """
        if side not in SIDES:
            raise SideMismatch(f"Side must be 'left' or 'right', got {side!r}")
        if dim < 1:
            raise DimensionMismatch(f"dim must be positive, got {dim}")

        r = np.asarray([] if rates is None else list(rates), dtype=complex).reshape(-1)
        if coefficients is None:
            c = np.zeros((r.size, dim), dtype=complex)
        else:
            c = np.asarray(coefficients, dtype=complex).reshape(r.size, -1) if r.size else \
                np.zeros((0, dim), dtype=complex)
        if c.shape != (r.size, dim):
            raise DimensionMismatch(f"Coefficients of shape {c.shape} for {r.size} atoms in dim {dim}")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(c))):
            raise InvalidAtom("Atom rates and coefficients must be finite")

        r, c = _merge(r, c, dim)

        floor = get_params(params)['rate_floor']
        signed = r.real if side == LEFT else -r.real
        if np.any(signed <= floor):
            bad = r[signed <= floor][0]
            raise InvalidAtom(f"Rate {bad} is not square integrable on the {side} half-line")

        r.setflags(write=False)
        c.setflags(write=False)
        self._side = side
        self._anchor = float(anchor)
        self._dim = int(dim)
        self._rates = r
        self._coefficients = c

    @classmethod
    def zero(cls, side: str, anchor: float, dim: int) -> 'HalfLineFunction':
        return cls(side, anchor, dim)

    @classmethod
    def from_atoms(cls, side: str, anchor: float, dim: int,
                   atoms: Iterable[ExponentialAtom]) -> 'HalfLineFunction':
        atoms = list(atoms)
        for atom in atoms:
            if atom.side != side or atom.anchor != anchor:
                raise SideMismatch("All atoms must share side and anchor")
        return cls(side, anchor, dim,
                   [atom.rate for atom in atoms],
                   [atom.coefficient for atom in atoms])

    @property
    def side(self) -> str:
        return self._side

    @property
    def anchor(self) -> float:
        return self._anchor

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def rates(self) -> np.ndarray:
        return self._rates

    @property
    def coefficients(self) -> np.ndarray:
        return self._coefficients

    @property
    def atoms(self) -> Tuple[ExponentialAtom, ...]:
        return tuple(ExponentialAtom(complex(mu), c, self._anchor, self._side)
                     for mu, c in zip(self._rates, self._coefficients))

    @property
    def is_zero(self) -> bool:
        return self._rates.size == 0

    def _check_domain(self, ts: np.ndarray) -> None:
        outside = ts > self._anchor if self._side == LEFT else ts < self._anchor
        if np.any(outside):
            raise OutOfDomain(f"t={ts[outside][0]} lies outside the {self._side} half-line at {self._anchor}")

    def values(self, ts: Any) -> np.ndarray:
        """Function values at an array of points, shape (len(ts), dim)."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        self._check_domain(ts)
        if self.is_zero:
            return np.zeros((ts.size, self._dim), dtype=complex)
        E = np.exp(np.outer(ts - self._anchor, self._rates))
        return E @ self._coefficients

    def derivative_values(self, ts: Any) -> np.ndarray:
        """Exact derivative at an array of points."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        self._check_domain(ts)
        if self.is_zero:
            return np.zeros((ts.size, self._dim), dtype=complex)
        E = np.exp(np.outer(ts - self._anchor, self._rates))
        return E @ (self._rates[:, None] * self._coefficients)

    def trace(self) -> np.ndarray:
        """One-sided limit at the anchor."""
        return self._coefficients.sum(axis=0) if not self.is_zero else np.zeros(self._dim, dtype=complex)

    def with_coefficients(self, coefficients: np.ndarray) -> 'HalfLineFunction':
        return HalfLineFunction(self._side, self._anchor, self._dim, self._rates, coefficients)

    def _check_compatible(self, other: 'HalfLineFunction') -> None:
        if other.side != self._side or other.anchor != self._anchor:
            raise SideMismatch(f"Cannot combine {self._side}@{self._anchor} with {other.side}@{other.anchor}")
        if other.dim != self._dim:
            raise DimensionMismatch(f"Cannot combine dim {self._dim} with dim {other.dim}")

    def __add__(self, other: 'HalfLineFunction') -> 'HalfLineFunction':
        self._check_compatible(other)
        return HalfLineFunction(self._side, self._anchor, self._dim,
                                np.concatenate([self._rates, other.rates]),
                                np.vstack([self._coefficients, other.coefficients]))

    def __mul__(self, scalar: complex) -> 'HalfLineFunction':
        return self.with_coefficients(complex(scalar) * self._coefficients)

    __rmul__ = __mul__

    def __neg__(self) -> 'HalfLineFunction':
        return self * -1.0

    def __sub__(self, other: 'HalfLineFunction') -> 'HalfLineFunction':
        return self + (-other)

    def __repr__(self) -> str:
        return f"HalfLineFunction(side={self._side}, anchor={self._anchor}, dim={self._dim}, atoms={self._rates.size})"


class TwoComponentFunction:
    """u = (u1, u2) in L2(H,(-inf,a)) + L2(H,(b,+inf))."""

    def __init__(self, left: HalfLineFunction, right: HalfLineFunction):
        if left.side != LEFT or right.side != RIGHT:
            raise SideMismatch("Components must be (left, right)")
        if left.dim != right.dim:
            raise DimensionMismatch(f"Component dims differ: {left.dim} vs {right.dim}")
        if not left.anchor < right.anchor:
            raise ValueError(f"Need a < b, got a={left.anchor}, b={right.anchor}")
        self._left = left
        self._right = right

    @classmethod
    def zero(cls, a: float, b: float, dim: int) -> 'TwoComponentFunction':
        return cls(HalfLineFunction.zero(LEFT, a, dim), HalfLineFunction.zero(RIGHT, b, dim))

    @property
    def left(self) -> HalfLineFunction:
        return self._left

    @property
    def right(self) -> HalfLineFunction:
        return self._right

    @property
    def a(self) -> float:
        return self._left.anchor

    @property
    def b(self) -> float:
        return self._right.anchor

    @property
    def dim(self) -> int:
        return self._left.dim

    @property
    def is_zero(self) -> bool:
        return self._left.is_zero and self._right.is_zero

    def __add__(self, other: 'TwoComponentFunction') -> 'TwoComponentFunction':
        return TwoComponentFunction(self._left + other.left, self._right + other.right)

    def __mul__(self, scalar: complex) -> 'TwoComponentFunction':
        return TwoComponentFunction(self._left * scalar, self._right * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> 'TwoComponentFunction':
        return self * -1.0

    def __sub__(self, other: 'TwoComponentFunction') -> 'TwoComponentFunction':
        return self + (-other)

    def __repr__(self) -> str:
        return f"TwoComponentFunction(left={self._left!r}, right={self._right!r})"


def evaluate(f: HalfLineFunction, t: float) -> np.ndarray:
    """Value of f at a single point t (the anchor itself is the one-sided limit)."""
    return f.values([t])[0]


def l2_inner(f: HalfLineFunction, g: HalfLineFunction) -> complex:
    """Closed-form (f, g) on a half-line.

    Each atom pair contributes <c_f, c_g> / (mu_f + conj(mu_g)) on the left and
    the negative of that on the right.
    """
    if f.side != g.side or f.anchor != g.anchor:
        raise SideMismatch(f"Inner product of {f.side}@{f.anchor} and {g.side}@{g.anchor}")
    if f.dim != g.dim:
        raise DimensionMismatch(f"Inner product of dim {f.dim} and dim {g.dim}")
    if f.is_zero or g.is_zero:
        return 0j

    gram = f.coefficients @ g.coefficients.conj().T
    denom = f.rates[:, None] + g.rates.conj()[None, :]
    total = complex(np.sum(gram / denom))
    return total if f.side == LEFT else -total


def inner(u: TwoComponentFunction, v: TwoComponentFunction) -> complex:
    """Direct-sum inner product (u, v) = (u1, v1) + (u2, v2)."""
    return l2_inner(u.left, v.left) + l2_inner(u.right, v.right)


def l2_norm_sq(u: TwoComponentFunction) -> float:
    """||u||^2 = ||u1||^2 + ||u2||^2, imaginary round-off discarded."""
    total = l2_inner(u.left, u.left).real + l2_inner(u.right, u.right).real
    return max(total, 0.0)


def halfline_norm(f: HalfLineFunction) -> float:
    return float(np.sqrt(max(l2_inner(f, f).real, 0.0)))


def l2_norm(u: TwoComponentFunction) -> float:
    return float(np.sqrt(l2_norm_sq(u)))


def quadrature_inner(f: HalfLineFunction, g: HalfLineFunction,
                     truncation: float, points: int,
                     params: Optional[Dict[str, Any]] = None) -> complex:
    """Composite Gauss-Legendre estimate of (f, g) over the window [anchor-T, anchor] or [anchor, anchor+T].

    Independent of the closed form in `l2_inner`; converges to it as T, N grow.
    """
    if f.side != g.side or f.anchor != g.anchor:
        raise SideMismatch(f"Inner product of {f.side}@{f.anchor} and {g.side}@{g.anchor}")
    if truncation <= 0:
        raise ValueError(f"Truncation must be positive, got {truncation}")
    order = get_params(params)['quad_panel_order']
    if points < order:
        raise ValueError(f"Need at least {order} quadrature points, got {points}")

    if f.side == LEFT:
        nodes, weights = gauss_legendre_panels(f.anchor - truncation, f.anchor, points, order)
    else:
        nodes, weights = gauss_legendre_panels(f.anchor, f.anchor + truncation, points, order)
    integrand = np.sum(f.values(nodes) * g.values(nodes).conj(), axis=1)
    return complex(np.dot(weights, integrand))


def apply_expression(f: HalfLineFunction, A: HermitianOperator) -> HalfLineFunction:
    """Image of l(u) = iu' + Au: on each atom c -> (i mu + diag(alpha)) c."""
    if f.dim != A.dim:
        raise DimensionMismatch(f"Function dim {f.dim} vs operator dim {A.dim}")
    factors = 1j * f.rates[:, None] + A.eigenvalues[None, :]
    return f.with_coefficients(factors * f.coefficients)


def apply_expression_pair(u: TwoComponentFunction, A: HermitianOperator) -> TwoComponentFunction:
    return TwoComponentFunction(apply_expression(u.left, A), apply_expression(u.right, A))
