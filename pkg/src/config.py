"""
Knobs for the whole toolkit live here.
Tolerances, default window sizes and the thread cap for grid scans.
Anything that takes a `params` dict overrides these one key at a time.
"""

import os
from typing import Any, Dict, Optional

VERSION = "0.1.0"

# Default parameters shared by every module
DEFAULT_PARAMS = {
    'hermitian_tol': 1e-10,    # relative Frobenius defect of A - A*
    'unitary_tol': 1e-10,      # Frobenius defect of W*W - I
    'rate_floor': 1e-12,       # |Re rate| below this is not square integrable
    'min_imag': 1e-8,          # closest approach of lambda to the real axis
    'kernel_tol': 1e-12,       # resonant denominators mu - beta
    'residual_tol': 1e-10,     # resolvent residual / boundary defect
    'domain_tol': 1e-10,       # boundary condition check in apply_LW
    'quad_panel_order': 16,    # Gauss-Legendre points per panel
    'probe_window': 100.0,     # point spectrum samples t in [a - window, a]
    'probe_samples': 64,
    'growth_clip': 1e300,
    'x_samples': 129,          # x-points for field reconstruction
    'seed': 20240601,
}

THREADS_ENV = "HALFLINE_THREADS"


def get_params(params: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Merge caller overrides into the defaults."""
    p = DEFAULT_PARAMS.copy()
    if params:
        unknown = set(params) - set(DEFAULT_PARAMS)
        if unknown:
            raise ValueError(f"Unknown parameters: {sorted(unknown)}")
        p.update(params)
    return p


def thread_count() -> int:
    """Worker threads for grid scans, capped by HALFLINE_THREADS if set."""
    default = os.cpu_count() or 1
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    return max(1, min(value, default))
