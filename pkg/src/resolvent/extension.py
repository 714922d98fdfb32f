"""
The self-adjoint extension L_W and its resolvent.

L_W acts as l(u) = iu' + Au on both half-lines, restricted to functions with
u2(b) = W u1(a). For Im(lambda) != 0 the problem

    iu' + Au = lambda u + f,   u2(b) = W u1(a)

is solved in closed form. With beta_k = i(alpha_k - lambda) the eigenbasis
propagator is e^{beta_k tau}, and an atom c e^{mu(t - anchor)} of f is carried
to the atom -i c/(mu - beta) e^{mu(t - anchor)} plus a propagator term fixed by
the boundary data:

    Im lambda > 0:  u2 = i int_t^inf P(t-s) f2,            f* = W* u2(b)
                    u1 = P(t-a) f* + i int_t^a P(t-s) f1
    Im lambda < 0:  u1 = -i int_-inf^t P(t-s) f1,          g* = W u1(a)
                    u2 = P(t-b) g* - i int_b^t P(t-s) f2

f* is taken as W* u2(b): that is the value that makes the boundary condition
hold for the u2 above.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

import numpy as np

from src.config import get_params
from src.core.errors import (DegenerateKernel, DimensionMismatch, NotInDomain, SideMismatch,
                             TooCloseToRealAxis, WrongHalfPlane)
from src.core.operators import (HermitianOperator, SpectralPoint, UnitaryParameter,
                                propagator_rates)
from src.space.halfline import (LEFT, RIGHT, HalfLineFunction, TwoComponentFunction,
                                apply_expression_pair, halfline_norm, inner, l2_norm)
from src.utils.quadrature import gauss_legendre_panels

logger = logging.getLogger(__name__)

NORM_GUARD = 1e-300


@dataclass(frozen=True, eq=False)
class ExtensionLW:
    """L_W on (-inf, a) + (b, +inf) with coupling u2(b) = W u1(a)."""

    A: HermitianOperator
    W: UnitaryParameter
    a: float
    b: float
    w_eigen: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"Need a < b, got a={self.a}, b={self.b}")
        if self.A.dim != self.W.dim:
            raise DimensionMismatch(f"A has dim {self.A.dim} but W has dim {self.W.dim}")
        w_eigen = self.A.matrix_in_eigenbasis(self.W.matrix)
        w_eigen.setflags(write=False)
        object.__setattr__(self, 'w_eigen', w_eigen)

    @property
    def dim(self) -> int:
        return self.A.dim

    def coupling_defect(self, u: TwoComponentFunction) -> float:
        """||u2(b) - W u1(a)||."""
        return float(np.linalg.norm(u.right.trace() - self.w_eigen @ u.left.trace()))


def make_extension(A: HermitianOperator, W: UnitaryParameter,
                   a: float = -1.0, b: float = 1.0) -> ExtensionLW:
    return ExtensionLW(A=A, W=W, a=float(a), b=float(b))


@dataclass(frozen=True, eq=False)
class ResolventOutput:
    """u = R_lambda f together with the boundary vector and self-checks."""

    lam: SpectralPoint
    u: TwoComponentFunction
    f_star: Optional[np.ndarray]
    g_star: Optional[np.ndarray]
    residual: float
    bc_defect: float

    @property
    def branch(self) -> str:
        return 'upper' if self.f_star is not None else 'lower'


@dataclass(frozen=True, eq=False)
class _Solution:
    integral_left: HalfLineFunction
    integral_right: HalfLineFunction
    homogeneous: HalfLineFunction
    boundary_vector: np.ndarray
    upper: bool

    def assemble(self) -> TwoComponentFunction:
        if self.upper:
            return TwoComponentFunction(self.integral_left + self.homogeneous, self.integral_right)
        return TwoComponentFunction(self.integral_left, self.integral_right + self.homogeneous)


@dataclass(frozen=True)
class ChainCheck:
    """One norm estimate: value compared with its bound."""

    name: str
    value: float
    bound: float
    relation: str  # 'le' or 'eq'
    holds: bool


def apply_LW(ext: ExtensionLW, u: TwoComponentFunction,
             params: Optional[Dict[str, Any]] = None) -> TwoComponentFunction:
    """Apply L_W to u, which must satisfy the coupling condition.

    Raises:
        NotInDomain: ||u2(b) - W u1(a)|| > domain_tol * (1 + ||u||)
    """
    p = get_params(params)
    _check_function(ext, u)
    defect = ext.coupling_defect(u)
    if defect > p['domain_tol'] * (1.0 + l2_norm(u)):
        raise NotInDomain(f"u2(b) - W u1(a) has norm {defect:.3e}")
    return apply_expression_pair(u, ext.A)


def _check_function(ext: ExtensionLW, f: TwoComponentFunction) -> None:
    if f.dim != ext.dim:
        raise DimensionMismatch(f"Function dim {f.dim} vs extension dim {ext.dim}")
    if f.a != ext.a or f.b != ext.b:
        raise SideMismatch(f"Function lives on ({f.a}, {f.b}), extension on ({ext.a}, {ext.b})")


def _check_half_plane(lam: SpectralPoint, sign: int, p: Dict[str, Any]) -> None:
    if abs(lam.lambda_i) < p['min_imag']:
        raise TooCloseToRealAxis(f"|Im lambda| = {abs(lam.lambda_i):.3e} is below {p['min_imag']:.1e}")
    if sign * lam.lambda_i < 0:
        raise WrongHalfPlane(f"lambda = {lam.lam} is in the wrong half-plane")


def _particular(f: HalfLineFunction, beta: np.ndarray, p: Dict[str, Any]) -> HalfLineFunction:
    """Atom-by-atom particular solution: c e^{mu s} -> -i c/(mu - beta) e^{mu s}."""
    if f.is_zero:
        return f
    C = f.coefficients
    D = f.rates[:, None] - beta[None, :]
    active = C != 0
    floor = p['kernel_tol'] * (1.0 + np.abs(f.rates)[:, None] + np.abs(beta)[None, :])
    if np.any(active & (np.abs(D) < floor)):
        raise DegenerateKernel("Atom rate resonates with a propagator exponent")
    out = np.zeros_like(C)
    np.divide(-1j * C, D, out=out, where=active)
    return f.with_coefficients(out)


def _homogeneous(side: str, anchor: float, beta: np.ndarray, value: np.ndarray) -> HalfLineFunction:
    """P(t - anchor) value as atoms value_k e_k e^{beta_k (t - anchor)}."""
    return HalfLineFunction(side, anchor, beta.size, beta, np.diag(value))


def _solve(ext: ExtensionLW, lam: SpectralPoint, f: TwoComponentFunction,
           p: Dict[str, Any]) -> _Solution:
    beta = propagator_rates(ext.A, lam)
    if lam.lambda_i > 0:
        right = _particular(f.right, beta, p)
        f_star = ext.w_eigen.conj().T @ right.trace()
        left_part = _particular(f.left, beta, p)
        integral_left = left_part + _homogeneous(LEFT, ext.a, beta, -left_part.trace())
        return _Solution(integral_left, right, _homogeneous(LEFT, ext.a, beta, f_star),
                         f_star, upper=True)

    left = _particular(f.left, beta, p)
    g_star = ext.w_eigen @ left.trace()
    right_part = _particular(f.right, beta, p)
    integral_right = right_part + _homogeneous(RIGHT, ext.b, beta, -right_part.trace())
    return _Solution(left, integral_right, _homogeneous(RIGHT, ext.b, beta, g_star),
                     g_star, upper=False)


def _finish(ext: ExtensionLW, lam: SpectralPoint, f: TwoComponentFunction,
            solution: _Solution, p: Dict[str, Any]) -> ResolventOutput:
    u = solution.assemble()
    defect = apply_expression_pair(u, ext.A) - u * lam.lam - f
    f_norm = l2_norm(f)
    residual = l2_norm(defect) / max(f_norm, NORM_GUARD)
    bc_defect = ext.coupling_defect(u)

    if residual > p['residual_tol'] or bc_defect > p['residual_tol'] * max(f_norm, 1.0):
        logger.warning(f"Resolvent at lambda={lam.lam} exceeds tolerance: "
                       f"residual={residual:.3e}, bc_defect={bc_defect:.3e}")
    logger.debug(f"Resolvent at lambda={lam.lam}: {u.left.rates.size}+{u.right.rates.size} atoms, "
                 f"residual={residual:.2e}")

    vector = solution.boundary_vector
    return ResolventOutput(lam=lam, u=u,
                           f_star=vector if solution.upper else None,
                           g_star=None if solution.upper else vector,
                           residual=residual, bc_defect=bc_defect)


def resolve_upper(ext: ExtensionLW, lam: Union[SpectralPoint, complex], f: TwoComponentFunction,
                  params: Optional[Dict[str, Any]] = None) -> ResolventOutput:
    """R_lambda f for Im lambda > 0.

    Raises:
        TooCloseToRealAxis: Im lambda below min_imag
        WrongHalfPlane: Im lambda negative
        DegenerateKernel: resonant atom rate on the left half-line
    """
    p = get_params(params)
    lam = SpectralPoint.of(lam)
    _check_half_plane(lam, +1, p)
    _check_function(ext, f)
    return _finish(ext, lam, f, _solve(ext, lam, f, p), p)


def resolve_lower(ext: ExtensionLW, lam: Union[SpectralPoint, complex], f: TwoComponentFunction,
                  params: Optional[Dict[str, Any]] = None) -> ResolventOutput:
    """R_lambda f for Im lambda < 0 (g* = W u1(a))."""
    p = get_params(params)
    lam = SpectralPoint.of(lam)
    _check_half_plane(lam, -1, p)
    _check_function(ext, f)
    return _finish(ext, lam, f, _solve(ext, lam, f, p), p)


def resolve(ext: ExtensionLW, lam: Union[SpectralPoint, complex], f: TwoComponentFunction,
            params: Optional[Dict[str, Any]] = None) -> ResolventOutput:
    """Dispatch on the sign of Im lambda."""
    p = get_params(params)
    lam = SpectralPoint.of(lam)
    if abs(lam.lambda_i) < p['min_imag']:
        raise TooCloseToRealAxis(f"|Im lambda| = {abs(lam.lambda_i):.3e} is below {p['min_imag']:.1e}")
    if lam.lambda_i > 0:
        return resolve_upper(ext, lam, f, params)
    return resolve_lower(ext, lam, f, params)


def resolvent_bound_fstar(ext: ExtensionLW, lam: Union[SpectralPoint, complex], f: TwoComponentFunction,
                          params: Optional[Dict[str, Any]] = None) -> float:
    """||f*_lambda||^2; the estimate says it is at most ||f2||^2 / (2 Im lambda)."""
    out = resolve_upper(ext, lam, f, params)
    return float(np.vdot(out.f_star, out.f_star).real)


def resolvent_norm_chains(ext: ExtensionLW, lam: Union[SpectralPoint, complex], f: TwoComponentFunction,
                          params: Optional[Dict[str, Any]] = None) -> List[ChainCheck]:
    """Evaluate each piece of R_lambda f against its L2 estimate."""
    p = get_params(params)
    lam = SpectralPoint.of(lam)
    if abs(lam.lambda_i) < p['min_imag']:
        raise TooCloseToRealAxis(f"|Im lambda| = {abs(lam.lambda_i):.3e} is below {p['min_imag']:.1e}")
    _check_function(ext, f)
    sol = _solve(ext, lam, f, p)
    li = abs(lam.lambda_i)
    f1_sq = halfline_norm(f.left) ** 2
    f2_sq = halfline_norm(f.right) ** 2
    vec_sq = float(np.vdot(sol.boundary_vector, sol.boundary_vector).real)
    hom_sq = halfline_norm(sol.homogeneous) ** 2
    slack = 1.0 + 1e-10

    def le(name, value, bound):
        return ChainCheck(name, value, bound, 'le', value <= bound * slack + NORM_GUARD)

    def eq(name, value, bound):
        return ChainCheck(name, value, bound, 'eq', abs(value - bound) <= 1e-10 * max(bound, 1.0))

    if sol.upper:
        return [
            le('f_star', vec_sq, f2_sq / (2 * li)),
            eq('propagated_f_star', hom_sq, vec_sq / (2 * li)),
            le('integral_left', halfline_norm(sol.integral_left) ** 2, f1_sq / li ** 2),
            le('integral_right', halfline_norm(sol.integral_right) ** 2, f2_sq / li ** 2),
        ]
    return [
        le('integral_left', halfline_norm(sol.integral_left) ** 2, f1_sq / li ** 2),
        le('g_star', vec_sq, f1_sq / (2 * li)),
        eq('propagated_g_star', hom_sq, vec_sq / (2 * li)),
        le('integral_right', halfline_norm(sol.integral_right) ** 2, f2_sq / li ** 2),
    ]


def quadrature_residual(ext: ExtensionLW, out: ResolventOutput, f: TwoComponentFunction,
                        truncation: Optional[float] = None, points: int = 2000,
                        params: Optional[Dict[str, Any]] = None) -> float:
    """Pointwise check of iu' + Au - lambda u - f, integrated by Gauss-Legendre.

    The derivative of u is taken from its atoms directly; the integral runs over
    [a - T, a] and [b, b + T] with T = 40/|Im lambda| unless given.
    """
    p = get_params(params)
    lam = out.lam.lam
    T = truncation if truncation is not None else 40.0 / abs(out.lam.lambda_i)
    alpha = ext.A.eigenvalues[None, :]

    total = 0.0
    for u_part, f_part, lo, hi in ((out.u.left, f.left, ext.a - T, ext.a),
                                   (out.u.right, f.right, ext.b, ext.b + T)):
        nodes, weights = gauss_legendre_panels(lo, hi, points, p['quad_panel_order'])
        defect = (1j * u_part.derivative_values(nodes) + (alpha - lam) * u_part.values(nodes)
                  - f_part.values(nodes))
        total += float(np.dot(weights, np.sum(np.abs(defect) ** 2, axis=1)))
    return float(np.sqrt(total)) / max(l2_norm(f), NORM_GUARD)


def adjoint_defect(ext: ExtensionLW, lam: Union[SpectralPoint, complex],
                   f: TwoComponentFunction, g: TwoComponentFunction,
                   params: Optional[Dict[str, Any]] = None) -> float:
    """|(R_lambda f, g) - (f, R_conj(lambda) g)|, scaled by ||R_lambda f|| ||g|| + ||f|| ||R g||."""
    lam = SpectralPoint.of(lam)
    rf = resolve(ext, lam, f, params).u
    rg = resolve(ext, lam.conjugate(), g, params).u
    scale = l2_norm(rf) * l2_norm(g) + l2_norm(f) * l2_norm(rg)
    return abs(inner(rf, g) - inner(f, rg)) / max(scale, NORM_GUARD)


def resolvent_identity_defect(ext: ExtensionLW, lam: Union[SpectralPoint, complex],
                              zeta: Union[SpectralPoint, complex], f: TwoComponentFunction,
                              params: Optional[Dict[str, Any]] = None) -> float:
    """Relative norm of R_lambda f - R_zeta f - (lambda - zeta) R_lambda R_zeta f."""
    lam = SpectralPoint.of(lam)
    zeta = SpectralPoint.of(zeta)
    r_lam = resolve(ext, lam, f, params).u
    r_zeta = resolve(ext, zeta, f, params).u
    r_both = resolve(ext, lam, r_zeta, params).u
    diff = r_lam - r_zeta - r_both * (lam.lam - zeta.lam)
    scale = l2_norm(r_lam) + l2_norm(r_zeta) + abs(lam.lam - zeta.lam) * l2_norm(r_both)
    return l2_norm(diff) / max(scale, NORM_GUARD)
