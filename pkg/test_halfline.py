"""Tests for exponential-atom functions on the two half-lines."""

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from src.core.errors import DimensionMismatch, InvalidAtom, OutOfDomain, SideMismatch
from src.core.operators import make_hermitian
from src.space.halfline import (LEFT, RIGHT, ExponentialAtom, HalfLineFunction, TwoComponentFunction,
                                apply_expression, evaluate, halfline_norm, inner, l2_inner, l2_norm,
                                l2_norm_sq, quadrature_inner)
from src.utils.sampling import random_halfline, random_two_component

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def test_single_atom_norms():
    left = HalfLineFunction(LEFT, -1.0, 1, [1.0], [[1.0]])
    right = HalfLineFunction(RIGHT, 1.0, 1, [-1.0], [[1.0]])
    assert l2_inner(left, left) == pytest.approx(0.5)
    assert l2_inner(right, right) == pytest.approx(0.5)
    assert l2_norm_sq(TwoComponentFunction(left, right)) == pytest.approx(1.0)


def test_oscillating_atom_norm_ignores_imaginary_rate():
    f = HalfLineFunction(RIGHT, 1.0, 2, [-2.0 + 7j], [[1.0, 1j]])
    assert halfline_norm(f) ** 2 == pytest.approx(2.0 / 4.0)


def test_rate_sign_is_enforced():
    with pytest.raises(InvalidAtom):
        HalfLineFunction(LEFT, 0.0, 1, [-1.0], [[1.0]])
    with pytest.raises(InvalidAtom):
        HalfLineFunction(RIGHT, 0.0, 1, [1.0], [[1.0]])
    with pytest.raises(InvalidAtom):
        HalfLineFunction(LEFT, 0.0, 1, [3j], [[1.0]])
    with pytest.raises(InvalidAtom):
        HalfLineFunction(LEFT, 0.0, 1, [np.nan], [[1.0]])


def test_shape_checks():
    with pytest.raises(DimensionMismatch):
        HalfLineFunction(LEFT, 0.0, 2, [1.0], [[1.0, 2.0, 3.0]])
    with pytest.raises(SideMismatch):
        HalfLineFunction('middle', 0.0, 1)
    with pytest.raises(ValueError):
        TwoComponentFunction(HalfLineFunction.zero(LEFT, 1.0, 1), HalfLineFunction.zero(RIGHT, 1.0, 1))
    with pytest.raises(SideMismatch):
        TwoComponentFunction(HalfLineFunction.zero(RIGHT, 1.0, 1), HalfLineFunction.zero(LEFT, -1.0, 1))


def test_equal_rates_merge_exactly():
    f = HalfLineFunction(LEFT, 0.0, 2, [1.0, 2.0, 1.0], [[1, 0], [0, 1], [2, 3]])
    assert f.rates.size == 2
    np.testing.assert_allclose(f.trace(), [3, 4])
    assert (f - f).is_zero


def test_from_atoms_and_atoms_property():
    atoms = [ExponentialAtom(1.0, np.array([1.0]), -1.0, LEFT),
             ExponentialAtom(2.0 + 1j, np.array([2.0]), -1.0, LEFT)]
    f = HalfLineFunction.from_atoms(LEFT, -1.0, 1, atoms)
    assert len(f.atoms) == 2
    assert evaluate(f, -1.0)[0] == pytest.approx(3.0)
    with pytest.raises(SideMismatch):
        HalfLineFunction.from_atoms(LEFT, 0.0, 1, atoms)


def test_evaluation_domain():
    f = HalfLineFunction(RIGHT, 1.0, 1, [-1.0], [[2.0]])
    assert evaluate(f, 2.0)[0] == pytest.approx(2.0 * np.exp(-1.0))
    np.testing.assert_allclose(f.derivative_values([1.0])[:, 0], [-2.0])
    with pytest.raises(OutOfDomain):
        evaluate(f, 0.5)
    with pytest.raises(OutOfDomain):
        f.derivative_values([0.0])


def test_scalar_inner_against_scipy_quad():
    f = HalfLineFunction(LEFT, -1.0, 1, [0.7 + 2j, 1.5], [[1 + 1j], [-0.5]])
    g = HalfLineFunction(LEFT, -1.0, 1, [1.1 - 1j], [[2.0]])

    def integrand(t, part):
        value = evaluate(f, t)[0] * np.conj(evaluate(g, t)[0])
        return value.real if part == 're' else value.imag

    re, _ = quad(integrand, -np.inf, -1.0, args=('re',), limit=200)
    im, _ = quad(integrand, -np.inf, -1.0, args=('im',), limit=200)
    assert l2_inner(f, g) == pytest.approx(complex(re, im), abs=1e-8)


@given(seeds, st.sampled_from([LEFT, RIGHT]), st.integers(min_value=1, max_value=4))
def test_closed_form_matches_quadrature(seed, side, dim):
    rng = np.random.default_rng(seed)
    f = random_halfline(rng, side, 0.5, dim, rate_range=(0.5, 4.0))
    g = random_halfline(rng, side, 0.5, dim, rate_range=(0.5, 4.0))
    exact = l2_inner(f, g)
    approx = quadrature_inner(f, g, truncation=60.0, points=4000)
    assert abs(exact - approx) <= 1e-9 * (1.0 + halfline_norm(f) * halfline_norm(g))


@given(seeds)
def test_inner_product_axioms(seed):
    rng = np.random.default_rng(seed)
    u = random_two_component(rng, 3)
    v = random_two_component(rng, 3)
    assert inner(u, v) == pytest.approx(np.conj(inner(v, u)), rel=1e-12, abs=1e-12)
    assert abs(inner(u, v)) ** 2 <= l2_norm_sq(u) * l2_norm_sq(v) * (1 + 1e-12) + 1e-12
    assert inner(u * 2j, v) == pytest.approx(2j * inner(u, v), rel=1e-12, abs=1e-12)
    assert inner(u, v * 2j) == pytest.approx(-2j * inner(u, v), rel=1e-12, abs=1e-12)


def test_zero_function():
    z = TwoComponentFunction.zero(-1.0, 1.0, 3)
    assert z.is_zero
    assert l2_norm(z) == 0.0
    np.testing.assert_array_equal(z.left.values([-5.0, -1.0]), np.zeros((2, 3)))


def test_quadrature_inner_arguments():
    f = HalfLineFunction(LEFT, 0.0, 1, [1.0], [[1.0]])
    with pytest.raises(ValueError):
        quadrature_inner(f, f, truncation=0.0, points=100)
    with pytest.raises(ValueError):
        quadrature_inner(f, f, truncation=10.0, points=4)


def test_apply_expression_on_atom():
    A = make_hermitian(np.diag([0.0, 3.0]))
    f = HalfLineFunction(LEFT, 0.0, 2, [2.0 + 1j], [[1.0, 1.0]])
    image = apply_expression(f, A)
    np.testing.assert_allclose(image.coefficients[0], [1j * (2.0 + 1j), 1j * (2.0 + 1j) + 3.0])
    with pytest.raises(DimensionMismatch):
        apply_expression(HalfLineFunction(LEFT, 0.0, 3, [1.0], [[1, 1, 1]]), A)
