import argparse
import os
import sys

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh_tridiagonal

# Allow running as a plain script from the repo root
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.example.neumann import build_neumann_operator  # noqa: E402


def neumann_laplacian(cells):
    """Cell-centred -d2/dx2 on [0, 1] with zero-flux walls, as a sparse tridiagonal matrix."""
    h = 1.0 / cells
    main = np.full(cells, 2.0)
    main[0] = main[-1] = 1.0
    off = -np.ones(cells - 1)
    return sp.diags([off, main, off], [-1, 0, 1], format='csr') / h ** 2


def finite_difference_eigenvalues(n_modes, cells=2000):
    """Lowest n_modes eigenvalues of the discrete Neumann Laplacian.
    They converge to (k pi)^2 at second order in the mesh width."""
    if cells < n_modes:
        raise ValueError(f"Need at least {n_modes} cells, got {cells}")
    lap = neumann_laplacian(cells)
    return eigh_tridiagonal(lap.diagonal(), lap.diagonal(1), eigvals_only=True,
                            select='i', select_range=(0, n_modes - 1))


def compare(n_modes, cells=2000):
    """Relative gap between the modal operator and the finite-difference one, per mode."""
    exact = build_neumann_operator(n_modes).eigenvalues
    approx = finite_difference_eigenvalues(n_modes, cells)
    gap = np.abs(approx - exact) / np.maximum(exact, 1.0)
    return exact, approx, gap


def main():
    parser = argparse.ArgumentParser(description='Check the Neumann mode operator against finite differences')
    parser.add_argument('--modes', type=int, default=8, help='Number of cosine modes')
    parser.add_argument('--cells', type=int, default=2000, help='Finite-difference cells on [0, 1]')
    parser.add_argument('--tol', type=float, default=1e-4, help='Largest allowed relative gap')

    args = parser.parse_args()

    try:
        exact, approx, gap = compare(args.modes, args.cells)
    except Exception as e:
        print(f"Error: {str(e)}")
        return 2

    print(f"\nNeumann Spectrum Check ({args.cells} cells):")
    for k, (x, y, g) in enumerate(zip(exact, approx, gap)):
        print(f"  k={k}: modal {x:.10g}  fd {y:.10g}  gap {g:.2e}")
    worst = float(np.max(gap))
    print(f"Largest relative gap: {worst:.2e}")
    return 0 if worst < args.tol else 1


if __name__ == '__main__':
    exit(main())
