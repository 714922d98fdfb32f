"""
The worked example: i du/dt - d2u/dx2 = f on |t| > 1, x in [0, 1], Neumann walls,
coupling u(1, x) = e^{i phi} u(-1, x).

Here A = -d2/dx2 with Neumann conditions, truncated to the first n_modes cosine
modes, so A = diag((k pi)^2). Every mode is its own scalar problem and W = e^{i phi} I
keeps modes apart, so truncation drops modes but does not approximate the kept ones.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from src.config import get_params
from src.core.operators import HermitianOperator, SpectralPoint, make_hermitian, phase_unitary
from src.probe.spectral import (NormBoundReport, PointSpectrumReport, continuous_spectrum_scan,
                                point_spectrum_test)
from src.resolvent.extension import ExtensionLW, make_extension, resolve
from src.space.halfline import LEFT, RIGHT, HalfLineFunction, TwoComponentFunction, l2_norm_sq
from src.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

EXAMPLE_A = -1.0
EXAMPLE_B = 1.0


@dataclass(frozen=True)
class NeumannConfig:
    n_modes: int = 8
    phi: float = 0.0
    a: float = field(default=EXAMPLE_A, init=False)
    b: float = field(default=EXAMPLE_B, init=False)

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValueError(f"n_modes must be at least 1, got {self.n_modes}")
        object.__setattr__(self, 'phi', float(self.phi) % (2 * math.pi))


@dataclass(frozen=True)
class ResolventCheck:
    lam: SpectralPoint
    residual: float
    bc_defect: float
    norm_sq: float


@dataclass
class ExampleResult:
    config: NeumannConfig
    scan: List[NormBoundReport]
    resolvents: List[ResolventCheck]
    point_spectrum: List[PointSpectrumReport]

    def passed(self, params: Optional[Dict[str, Any]] = None) -> bool:
        tol = get_params(params)['residual_tol']
        return (all(r.satisfied for r in self.scan)
                and all(c.residual < tol and c.bc_defect < tol for c in self.resolvents)
                and all(r.verdict == 'not-eigenvalue' for r in self.point_spectrum))


def build_neumann_operator(n_modes: int) -> HermitianOperator:
    """diag((k pi)^2), k = 0..n_modes-1: the Neumann Laplacian on the cosine modes."""
    if n_modes < 1:
        raise ValueError(f"n_modes must be at least 1, got {n_modes}")
    k = np.arange(n_modes)
    return make_hermitian(np.diag((k * np.pi) ** 2))


def build_example_extension(cfg: NeumannConfig) -> ExtensionLW:
    A = build_neumann_operator(cfg.n_modes)
    return make_extension(A, phase_unitary(cfg.n_modes, cfg.phi), cfg.a, cfg.b)


def default_forcing(cfg: NeumannConfig) -> TwoComponentFunction:
    """A smooth forcing touching every mode: e^{t+1} on the left, e^{-(t-1)} on the right."""
    n = cfg.n_modes
    c = np.ones(n, dtype=complex) / np.sqrt(n)
    return TwoComponentFunction(HalfLineFunction(LEFT, cfg.a, n, [1.0], [c]),
                                HalfLineFunction(RIGHT, cfg.b, n, [-1.0 + 0.5j], [1j * c]))


def default_probe_vector(n_modes: int) -> np.ndarray:
    return np.ones(n_modes, dtype=complex) / np.sqrt(n_modes)


def run_example(cfg: NeumannConfig, lambda_grid: Sequence[SpectralPoint],
                f: Optional[TwoComponentFunction] = None, f0: Optional[Any] = None,
                params: Optional[Dict[str, Any]] = None, progress: bool = False) -> ExampleResult:
    """Resolvent checks on every grid point, witness scan on the upper ones, point spectrum at their real parts.

    Args:
        cfg: example configuration
        lambda_grid: spectral points off the real axis
        f: forcing for the resolvent checks (default: default_forcing)
        f0: witness vector (default: normalized all-ones)
    """
    ext = build_example_extension(cfg)
    f = default_forcing(cfg) if f is None else f
    f0 = default_probe_vector(cfg.n_modes) if f0 is None else f0
    grid = [SpectralPoint.of(z) for z in lambda_grid]

    def check(lam: SpectralPoint) -> ResolventCheck:
        out = resolve(ext, lam, f, params)
        return ResolventCheck(lam=lam, residual=out.residual, bc_defect=out.bc_defect,
                              norm_sq=l2_norm_sq(out.u))

    resolvents = ordered_map(check, grid, progress=progress, desc="resolvents")

    upper = [z for z in grid if z.lambda_i > 0]
    xs = sorted({z.real for z in upper})
    eps = sorted({z.lambda_i for z in upper})
    scan = continuous_spectrum_scan(ext, xs, eps, f0, params, progress=progress)

    reals = sorted({z.real for z in grid})
    point = [point_spectrum_test(ext, x, f0, params=params) for x in reals]

    result = ExampleResult(config=cfg, scan=scan, resolvents=resolvents, point_spectrum=point)
    logger.info(f"Example n_modes={cfg.n_modes}, phi={cfg.phi:.4f}: {len(resolvents)} resolvents, "
                f"{len(scan)} scan points, passed={result.passed(params)}")
    return result


def resolvent_table(checks: Sequence[ResolventCheck]) -> pd.DataFrame:
    rows = [{'lambda_re': c.lam.real, 'lambda_im': c.lam.lambda_i, 'residual': c.residual,
             'bc_defect': c.bc_defect, 'norm_sq': c.norm_sq} for c in checks]
    return pd.DataFrame(rows, columns=['lambda_re', 'lambda_im', 'residual', 'bc_defect', 'norm_sq'])


def field_samples(u: TwoComponentFunction, t_points: Sequence[float],
                  params: Optional[Dict[str, Any]] = None) -> pd.DataFrame:
    """u(t, x) = sum_k c_k(t) phi_k(x) on an x-grid, with phi_0 = 1, phi_k = sqrt2 cos(k pi x).

    Columns t, x, re_u, im_u. Points inside [a, b] are skipped.
    """
    n_x = get_params(params)['x_samples']
    x = np.linspace(0.0, 1.0, n_x)
    k = np.arange(u.dim)
    modes = np.where(k[:, None] == 0, 1.0, np.sqrt(2.0) * np.cos(np.pi * k[:, None] * x[None, :]))

    rows = []
    for t in t_points:
        if t <= u.a:
            coeffs = u.left.values([t])[0]
        elif t >= u.b:
            coeffs = u.right.values([t])[0]
        else:
            continue
        values = coeffs @ modes
        rows.extend({'t': t, 'x': xi, 're_u': v.real, 'im_u': v.imag} for xi, v in zip(x, values))
    return pd.DataFrame(rows, columns=['t', 'x', 're_u', 'im_u'])
