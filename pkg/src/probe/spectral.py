"""
Numerical evidence about the spectrum of L_W.

Three probes:
  - point spectrum: the only candidate eigenfunctions are u1(t) = e^{i(A-lambda)(t-a)} f0.
    For real lambda the propagator is unitary, so ||u1(t)|| is constant and u1 cannot be
    square integrable on an infinite ray. We sample that norm and report how flat it is.
  - witness bound: f*(lambda; t) = (0, e^{-i(conj(lambda) - A)t} f0) gives
    ||R_lambda f*|| / ||f*|| >= 1/(2 Im lambda), looking only at the right component.
  - continuous spectrum scan: the witness bound on a grid x + i eps. The bound blows up
    as eps -> 0 for every real x, which is what puts all of R into the spectrum.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from src.config import get_params
from src.core.errors import TooCloseToRealAxis, WrongHalfPlane, ZeroVector
from src.core.operators import HermitianOperator, SpectralPoint, propagator
from src.resolvent.extension import ExtensionLW, resolve_upper
from src.space.halfline import (LEFT, RIGHT, HalfLineFunction, TwoComponentFunction,
                                halfline_norm, l2_norm)
from src.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

NOT_EIGENVALUE = 'not-eigenvalue'
INCONCLUSIVE = 'inconclusive'

SCAN_COLUMNS = ['x', 'epsilon', 'witness_ratio', 'bound', 'satisfied']


@dataclass(frozen=True)
class PointSpectrumReport:
    lam: complex
    norm_variation: float
    verdict: str


@dataclass(frozen=True)
class NormBoundReport:
    """Witness ratio at one spectral point.

    full_ratio includes the left component as well; it is measured, the
    assertion is made on witness_ratio only.
    """

    lam: SpectralPoint
    witness_ratio: float
    bound: float
    satisfied: bool
    full_ratio: float


def _check_vector(f0: Any) -> np.ndarray:
    v = np.asarray(f0, dtype=complex).reshape(-1)
    if not np.any(v != 0):
        raise ZeroVector("f0 must be nonzero")
    return v


def point_spectrum_test(ext: ExtensionLW, lam: Union[complex, float], f0: Any,
                        samples: Optional[int] = None,
                        params: Optional[Dict[str, Any]] = None) -> PointSpectrumReport:
    """Sample ||e^{i(A-lambda)(t-a)} f0|| on [a - window, a].

    Args:
        ext: the extension (the verdict does not depend on W)
        lam: spectral parameter; real for the actual test, complex for control runs
        f0: initial vector in H
        samples: number of sample points (>= 10), default from params

    Returns:
        PointSpectrumReport; variation is measured against ||u1(a)|| = ||f0||
    """
    p = get_params(params)
    samples = p['probe_samples'] if samples is None else samples
    if samples < 10:
        raise ValueError(f"Need at least 10 samples, got {samples}")
    v = _check_vector(f0)
    z = complex(lam)

    ts = np.linspace(ext.a - p['probe_window'], ext.a, samples)
    with np.errstate(over='ignore', invalid='ignore'):
        norms = np.array([np.linalg.norm(propagator(ext.A, z, t - ext.a) @ v) for t in ts])
    clip = p['growth_clip']
    norms = np.minimum(np.nan_to_num(norms, nan=clip, posinf=clip), clip)

    variation = float(np.max(np.abs(norms - norms[-1])))
    verdict = NOT_EIGENVALUE if variation < p['residual_tol'] else INCONCLUSIVE
    logger.debug(f"Point spectrum probe at lambda={z}: variation={variation:.3e} ({verdict})")
    return PointSpectrumReport(lam=z, norm_variation=variation, verdict=verdict)


def witness_function(lam: Union[SpectralPoint, complex], A: HermitianOperator, f0: Any,
                     b: float, a: Optional[float] = None, normalize: bool = False) -> TwoComponentFunction:
    """f*(lambda; t) = (0, e^{-i(conj(lambda) - A)t} f0), with f0 given in H.

    Its squared norm is e^{-2 Im(lambda) b} ||f0||^2 / (2 Im lambda). The left
    component is zero; `a` only places it (default b - 1). With normalize=True
    the common factor e^{-Im(lambda) b} is dropped, which leaves every norm
    ratio unchanged and keeps the atom representable for any b.

    Raises:
        WrongHalfPlane: Im lambda <= 0
        ZeroVector: f0 is zero, or the unnormalized witness underflows
        InvalidAtom: the unnormalized witness overflows
    """
    lam = SpectralPoint.of(lam)
    if lam.lambda_i <= 0:
        raise WrongHalfPlane(f"Witness needs Im lambda > 0, got {lam.lam}")
    coords = A.to_eigenbasis(_check_vector(f0))
    a = b - 1.0 if a is None else a

    rates = -1j * (np.conj(lam.lam) - A.eigenvalues)
    with np.errstate(over='ignore', under='ignore', invalid='ignore'):
        scale = np.exp(1j * rates.imag * b) if normalize else np.exp(rates * b)
        right = HalfLineFunction(RIGHT, b, A.dim, rates, np.diag(coords * scale))
    if right.is_zero:
        raise ZeroVector(f"Witness at b={b}, Im lambda={lam.lambda_i} underflows to zero")
    return TwoComponentFunction(HalfLineFunction.zero(LEFT, a, A.dim), right)


def norm_lower_bound(ext: ExtensionLW, lam: Union[SpectralPoint, complex], f0: Any,
                     params: Optional[Dict[str, Any]] = None) -> NormBoundReport:
    """Witness ratio at one point; uses the normalized witness, so it does not depend on b."""
    lam = SpectralPoint.of(lam)
    witness = witness_function(lam, ext.A, f0, ext.b, ext.a, normalize=True)
    out = resolve_upper(ext, lam, witness, params)

    w_norm = l2_norm(witness)
    ratio = halfline_norm(out.u.right) / w_norm
    bound = 1.0 / (2.0 * lam.lambda_i)
    return NormBoundReport(lam=lam, witness_ratio=ratio, bound=bound,
                           satisfied=ratio >= bound * (1.0 - 1e-10),
                           full_ratio=l2_norm(out.u) / w_norm)


def continuous_spectrum_scan(ext: ExtensionLW, real_points: Sequence[float], epsilons: Sequence[float],
                             f0: Any, params: Optional[Dict[str, Any]] = None,
                             progress: bool = False) -> List[NormBoundReport]:
    """norm_lower_bound over the grid x + i eps, ordered by (x, eps)."""
    p = get_params(params)
    if len(real_points) == 0 or len(epsilons) == 0:
        return []
    too_close = [e for e in epsilons if e < p['min_imag']]
    if too_close:
        raise TooCloseToRealAxis(f"Scan offsets {too_close} are below min_imag={p['min_imag']:.1e}")

    cells = [complex(x, eps) for x in sorted(real_points) for eps in sorted(epsilons)]
    reports = ordered_map(lambda z: norm_lower_bound(ext, z, f0, params), cells,
                          progress=progress, desc="scan")
    failed = sum(not r.satisfied for r in reports)
    if failed:
        logger.warning(f"{failed} of {len(reports)} grid points miss the 1/(2 eps) bound")
    return reports


def scan_table(reports: Sequence[NormBoundReport]) -> pd.DataFrame:
    rows = [{'x': r.lam.real, 'epsilon': r.lam.lambda_i, 'witness_ratio': r.witness_ratio,
             'bound': r.bound, 'satisfied': r.satisfied} for r in reports]
    return pd.DataFrame(rows, columns=SCAN_COLUMNS)


def point_spectrum_table(reports: Sequence[PointSpectrumReport]) -> pd.DataFrame:
    rows = [{'lambda_re': r.lam.real, 'lambda_im': r.lam.imag,
             'norm_variation': r.norm_variation, 'verdict': r.verdict} for r in reports]
    return pd.DataFrame(rows, columns=['lambda_re', 'lambda_im', 'norm_variation', 'verdict'])
