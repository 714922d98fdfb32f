import numpy as np
from numpy.polynomial.legendre import leggauss


def gauss_legendre_panels(lo: float, hi: float, points: int, order: int = 16):
    """
    Composite Gauss-Legendre mesh on [lo, hi].
    Splits the interval into points // order equal panels and puts an
    order-point rule on each, so `points` is the approximate total node count.

    Returns:
        (nodes, weights) as 1-D arrays
    """
    if hi <= lo:
        raise ValueError(f"Empty interval [{lo}, {hi}]")
    if points < order:
        raise ValueError(f"Need at least {order} points, got {points}")

    y, w = leggauss(order)  # Interval [-1, 1]
    panels = points // order
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])

    nodes = (mid[:, None] + half[:, None] * y[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights
