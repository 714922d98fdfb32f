"""
Boundary values for the pair of half-line operators.

gamma1(u) = (u1(a) + u2(b)) / (i sqrt2), gamma2(u) = (u1(a) - u2(b)) / sqrt2.
The traces are one-sided limits of atom sums, so everything here is exact.

Green's identity is checked in the orientation
    (Lu, v) - (u, Lv) = (gamma2 u, gamma1 v) - (gamma1 u, gamma2 v),
which is what integration by parts gives with these maps: the boundary term is
i(u1(a).v1(a)* - u2(b).v2(b)*).
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from src.config import get_params
from src.core.errors import DimensionMismatch, SideMismatch
from src.core.operators import HermitianOperator
from src.space.halfline import (LEFT, RIGHT, HalfLineFunction, TwoComponentFunction,
                                apply_expression_pair, inner)

logger = logging.getLogger(__name__)

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class BoundaryPair:
    """(gamma1(u), gamma2(u)) in eigenbasis coordinates."""

    gamma1: np.ndarray
    gamma2: np.ndarray

    def left_trace(self) -> np.ndarray:
        """u1(a) recovered from the pair."""
        return (1j * self.gamma1 + self.gamma2) / SQRT2

    def right_trace(self) -> np.ndarray:
        """u2(b) recovered from the pair."""
        return (1j * self.gamma1 - self.gamma2) / SQRT2


@dataclass(frozen=True)
class DeficiencyReport:
    """m = dim ker(B* + i), n = dim ker(B* - i) for one half-line."""

    side: str
    m: int
    n: int

    def as_dict(self) -> Dict[str, Any]:
        return {'side': self.side, 'm': self.m, 'n': self.n}


def boundary_map(u: TwoComponentFunction) -> BoundaryPair:
    left_trace = u.left.trace()
    right_trace = u.right.trace()
    gamma1 = (left_trace + right_trace) / (1j * SQRT2)
    gamma2 = (left_trace - right_trace) / SQRT2
    return BoundaryPair(gamma1=gamma1, gamma2=gamma2)


def solve_boundary_targets(F1: Any, F2: Any, A: HermitianOperator,
                           a: float = -1.0, b: float = 1.0) -> TwoComponentFunction:
    """Build u with gamma1(u) = F1 and gamma2(u) = F2.

    u1(t) = e^{t-a} (iF1 + F2)/sqrt2 on the left, u2(t) = e^{b-t} (iF1 - F2)/sqrt2
    on the right. This witnesses surjectivity of the boundary maps.

    Args:
        F1, F2: target boundary vectors (eigenbasis coordinates)
        A: coefficient operator, fixes dim
        a, b: half-line anchors

    Returns:
        TwoComponentFunction with one atom per side
    """
    F1 = np.asarray(F1, dtype=complex).reshape(-1)
    F2 = np.asarray(F2, dtype=complex).reshape(-1)
    if F1.shape[0] != A.dim or F2.shape[0] != A.dim:
        raise DimensionMismatch(f"Targets of length {F1.shape[0]}, {F2.shape[0]} for dim {A.dim}")

    left = HalfLineFunction(LEFT, a, A.dim, [1.0], [(1j * F1 + F2) / SQRT2])
    right = HalfLineFunction(RIGHT, b, A.dim, [-1.0], [(1j * F1 - F2) / SQRT2])
    return TwoComponentFunction(left, right)


def green_defect(u: TwoComponentFunction, v: TwoComponentFunction, A: HermitianOperator) -> complex:
    """LHS - RHS of Green's identity for the boundary maps; vanishes up to round-off."""
    if u.dim != A.dim or v.dim != A.dim:
        raise DimensionMismatch(f"Functions of dim {u.dim}, {v.dim} for operator dim {A.dim}")
    if u.a != v.a or u.b != v.b:
        raise SideMismatch("u and v live on different half-lines")

    lhs, rhs = green_sides(u, v, A)
    return lhs - rhs


def green_sides(u: TwoComponentFunction, v: TwoComponentFunction, A: HermitianOperator):
    """Both sides of Green's identity separately, as (lhs, rhs)."""
    lhs = inner(apply_expression_pair(u, A), v) - inner(u, apply_expression_pair(v, A))
    gu = boundary_map(u)
    gv = boundary_map(v)
    # (x, y)_H = sum x_k conj(y_k)
    rhs = np.vdot(gv.gamma1, gu.gamma2) - np.vdot(gv.gamma2, gu.gamma1)
    return complex(lhs), complex(rhs)


def deficiency_indices(side: str, A: HermitianOperator,
                       params: Optional[Dict[str, Any]] = None) -> DeficiencyReport:
    """Count square-integrable solutions of iu' + Au = -+i u on one half-line.

    Per eigencomponent, iu' + alpha u = z u has u' = -i(z - alpha) u, so the
    rates are -1 + i alpha (z = -i) and 1 + i alpha (z = +i). A mode counts
    when it decays: Re rate > 0 on the left, Re rate < 0 on the right.
    """
    if side not in (LEFT, RIGHT):
        raise SideMismatch(f"Side must be 'left' or 'right', got {side!r}")
    floor = get_params(params)['rate_floor']

    def count(z: complex) -> int:
        rates = -1j * (z - A.eigenvalues)
        decaying = rates.real > floor if side == LEFT else rates.real < -floor
        return int(np.count_nonzero(decaying))

    report = DeficiencyReport(side=side, m=count(-1j), n=count(1j))
    logger.debug(f"Deficiency indices on the {side} half-line: ({report.m}, {report.n})")
    return report
