"""Green's identity, boundary maps and deficiency indices."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.core.errors import DimensionMismatch, SideMismatch
from src.core.operators import make_hermitian
from src.space.halfline import (LEFT, RIGHT, HalfLineFunction, TwoComponentFunction,
                                apply_expression_pair, inner, l2_norm, quadrature_inner)
from src.triplet.boundary import (BoundaryPair, boundary_map, deficiency_indices, green_defect,
                                  green_sides, solve_boundary_targets)
from src.utils.sampling import random_hermitian, random_two_component, random_vector

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
dims = st.integers(min_value=1, max_value=8)


def _relative(defect, u, v):
    return abs(defect) / (1.0 + l2_norm(u) * l2_norm(v))


@given(seeds, dims)
def test_green_identity_random(seed, dim):
    rng = np.random.default_rng(seed)
    A = make_hermitian(random_hermitian(rng, dim, scale=2.0))
    u = random_two_component(rng, dim)
    v = random_two_component(rng, dim)
    assert _relative(green_defect(u, v, A), u, v) < 1e-10


def test_green_identity_thousand_trials(rng):
    worst = 0.0
    for _ in range(1000):
        dim = int(rng.integers(1, 9))
        A = make_hermitian(random_hermitian(rng, dim, scale=2.0))
        u = random_two_component(rng, dim)
        v = random_two_component(rng, dim)
        worst = max(worst, _relative(green_defect(u, v, A), u, v))
    assert worst < 1e-10


def test_green_identity_orientation(rng):
    """The boundary side is (gamma2 u, gamma1 v) - (gamma1 u, gamma2 v), not its negative."""
    A = make_hermitian(random_hermitian(rng, 2))
    u = random_two_component(rng, 2)
    v = random_two_component(rng, 2)
    lhs, rhs = green_sides(u, v, A)
    assert abs(lhs) > 1e-3
    assert lhs == pytest.approx(rhs, rel=1e-10)
    assert abs(lhs + rhs) > 1e-3


def test_green_identity_diagonal_case(rng):
    A = make_hermitian(random_hermitian(rng, 3))
    u = random_two_component(rng, 3)
    lhs, rhs = green_sides(u, u, A)
    assert abs(lhs.real) < 1e-10 * (1 + l2_norm(u) ** 2)
    assert lhs.imag == pytest.approx(rhs.imag, rel=1e-10)


def test_green_identity_zero_traces_against_quadrature():
    """Zero traces: both sides vanish, and (Lu, v) - (u, Lv) checked independently by quadrature."""
    A = make_hermitian(np.diag([0.5, -1.0]))
    c = np.array([1.0 + 1j, 2.0])
    u = TwoComponentFunction(HalfLineFunction(LEFT, -1.0, 2, [1.0, 2.0 + 1j], [c, -c]),
                             HalfLineFunction(RIGHT, 1.0, 2, [-1.5, -0.5j - 1.0], [c, -c]))
    rng = np.random.default_rng(7)
    v = random_two_component(rng, 2, rate_range=(0.5, 3.0))

    lhs, rhs = green_sides(u, v, A)
    assert abs(rhs) < 1e-14
    assert abs(lhs) < 1e-10 * (1 + l2_norm(v))

    Lu = apply_expression_pair(u, A)
    Lv = apply_expression_pair(v, A)
    by_quadrature = sum(quadrature_inner(x, y, 60.0, 4000) - quadrature_inner(p, q, 60.0, 4000)
                        for x, y, p, q in ((Lu.left, v.left, u.left, Lv.left),
                                           (Lu.right, v.right, u.right, Lv.right)))
    assert abs(by_quadrature) < 1e-8


def test_green_defect_checks_shapes(rng):
    A = make_hermitian(random_hermitian(rng, 2))
    u = random_two_component(rng, 2)
    with pytest.raises(DimensionMismatch):
        green_defect(u, random_two_component(rng, 3), A)
    with pytest.raises(SideMismatch):
        green_defect(u, random_two_component(rng, 2, a=-2.0, b=2.0), A)


@given(seeds, dims)
def test_boundary_maps_are_surjective(seed, dim):
    rng = np.random.default_rng(seed)
    A = make_hermitian(random_hermitian(rng, dim))
    F1 = random_vector(rng, dim)
    F2 = random_vector(rng, dim)
    pair = boundary_map(solve_boundary_targets(F1, F2, A))
    np.testing.assert_allclose(pair.gamma1, F1, atol=1e-13)
    np.testing.assert_allclose(pair.gamma2, F2, atol=1e-13)


def test_boundary_map_hand_case():
    u = TwoComponentFunction(HalfLineFunction(LEFT, -1.0, 1, [1.0], [[1.0]]),
                             HalfLineFunction(RIGHT, 1.0, 1, [-1.0], [[1.0]]))
    pair = boundary_map(u)
    assert pair.gamma1[0] == pytest.approx(-1j * np.sqrt(2.0))
    assert pair.gamma2[0] == pytest.approx(0.0)
    np.testing.assert_allclose(pair.left_trace(), [1.0])
    np.testing.assert_allclose(pair.right_trace(), [1.0])


def test_solve_boundary_targets_zero():
    A = make_hermitian([[1.0]])
    u = solve_boundary_targets([0.0], [0.0], A)
    assert u.is_zero
    with pytest.raises(DimensionMismatch):
        solve_boundary_targets([1.0, 2.0], [0.0], A)


def test_boundary_pair_recovers_traces(rng):
    u = random_two_component(rng, 3)
    pair = boundary_map(u)
    assert isinstance(pair, BoundaryPair)
    np.testing.assert_allclose(pair.left_trace(), u.left.trace(), atol=1e-13)
    np.testing.assert_allclose(pair.right_trace(), u.right.trace(), atol=1e-13)


@given(seeds, st.integers(min_value=1, max_value=8))
def test_deficiency_indices(seed, dim):
    A = make_hermitian(random_hermitian(np.random.default_rng(seed), dim, scale=10.0))
    left = deficiency_indices(LEFT, A)
    right = deficiency_indices(RIGHT, A)
    assert (left.m, left.n) == (0, dim)
    assert (right.m, right.n) == (dim, 0)


def test_deficiency_indices_bad_side():
    with pytest.raises(SideMismatch):
        deficiency_indices('up', make_hermitian([[0.0]]))


def test_green_sides_use_expression(rng):
    A = make_hermitian(random_hermitian(rng, 2))
    u = random_two_component(rng, 2)
    v = random_two_component(rng, 2)
    lhs, _ = green_sides(u, v, A)
    direct = inner(apply_expression_pair(u, A), v) - inner(u, apply_expression_pair(v, A))
    assert lhs == pytest.approx(direct)
