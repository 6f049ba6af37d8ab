import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi_riesz.errors import DomainError
from jacobi_riesz.jacobi import (
    JacobiParams,
    eval_P_unnormalized,
    eval_p,
    eval_p_derivative,
    eval_p_table,
    norm_constant,
    recurrence_coeffs,
    require_riesz_admissible,
    total_mass,
    uniform_bound,
)
from jacobi_riesz.quadrature import gauss_jacobi

from conftest import GRID_PARAMS

params_st = st.tuples(
    st.floats(-0.95, 3.0, allow_nan=False), st.floats(-0.95, 3.0, allow_nan=False)
)


def test_params_validation():
    with pytest.raises(DomainError):
        JacobiParams(-1.0, 0.0)
    with pytest.raises(DomainError):
        JacobiParams(0.0, -1.2)
    with pytest.raises(DomainError):
        require_riesz_admissible(JacobiParams(-0.7, 0.0))
    require_riesz_admissible(JacobiParams(-0.5, -0.5))


def test_recurrence_chebyshev():
    c0 = recurrence_coeffs((-0.5, -0.5), 0)
    assert c0.a == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert c0.b == 0.0
    c3 = recurrence_coeffs((-0.5, -0.5), 3)
    assert c3.a == pytest.approx(0.5, abs=1e-15)
    assert c3.b == 0.0


@given(st.floats(-0.9, 4.0), st.integers(0, 300))
def test_symmetric_params_have_zero_b(a, n):
    assert recurrence_coeffs((a, a), n).b == 0.0


def test_norm_constant_chebyshev():
    assert norm_constant((-0.5, -0.5), 0) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-14)
    # P_2 = (3/8) T_2 while p_2 = sqrt(2/pi) T_2
    assert norm_constant((-0.5, -0.5), 2) == pytest.approx(math.sqrt(2 / math.pi) * 8 / 3, rel=1e-14)
    assert eval_p((-0.5, -0.5), 2, 1.0) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-14)


def test_norm_constant_large_n_finite():
    w = norm_constant((1.7, 0.5), 2000)
    assert math.isfinite(w) and w > 0


@pytest.mark.parametrize("params", [(-0.5, -0.5), (0.3, -0.2), (1.7, 0.5)])
@pytest.mark.parametrize("n", [0, 1, 4, 9])
def test_norm_constant_against_quadrature(params, n):
    rule = gauss_jacobi(params, n + 2)
    P = np.array([eval_P_unnormalized(params, n, x) for x in rule.nodes])
    assert norm_constant(params, n) ** 2 * float(np.sum(rule.weights * P * P)) == pytest.approx(
        1.0, rel=1e-12
    )


def test_eval_p_chebyshev():
    assert eval_p((-0.5, -0.5), 1, 0.5) == pytest.approx(0.39894228040143, rel=1e-12)
    theta = np.linspace(0.01, 3.1, 37)
    for n in (1, 5, 40):
        v = eval_p((-0.5, -0.5), n, np.cos(theta))
        np.testing.assert_allclose(v, math.sqrt(2 / math.pi) * np.cos(n * theta), atol=1e-12)


@given(params_st, st.floats(-1.0, 1.0))
def test_degree_zero_is_w0(params, x):
    assert eval_p(params, 0, x) == pytest.approx(norm_constant(params, 0), rel=1e-14)


@settings(max_examples=50)
@given(params_st, st.integers(0, 40), st.floats(-1.0, 1.0))
def test_reflection_symmetry(params, n, x):
    a, b = params
    lhs = eval_p((a, b), n, -x)
    rhs = (-1) ** n * eval_p((b, a), n, x)
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-11)


def test_unnormalized_values():
    assert eval_P_unnormalized((0.4, 1.1), 0, 0.3) == 1.0
    assert eval_P_unnormalized((0.0, 0.0), 2, 1.0) == pytest.approx(1.0, abs=1e-15)
    # Legendre P_3(x) = (5x^3 - 3x)/2
    assert eval_P_unnormalized((0.0, 0.0), 3, 0.4) == pytest.approx((5 * 0.064 - 1.2) / 2, abs=1e-15)
    p = (0.3, -0.2)
    assert eval_P_unnormalized(p, 5, 0.7) == pytest.approx(eval_p(p, 5, 0.7) / norm_constant(p, 5), rel=1e-13)


def test_unnormalized_at_one():
    # P_n^{(a,b)}(1) = binom(n+a, n)
    a, b, n = 0.7, 1.3, 6
    expect = math.gamma(n + a + 1) / (math.gamma(n + 1) * math.gamma(a + 1))
    assert eval_P_unnormalized((a, b), n, 1.0) == pytest.approx(expect, rel=1e-13)


def test_derivative_examples():
    assert eval_p_derivative((0.2, 0.9), 0, 0.3) == 0.0
    h = 1e-5
    fd = (eval_p((-0.5, -0.5), 3, 0.2 + h) - eval_p((-0.5, -0.5), 3, 0.2 - h)) / (2 * h)
    assert eval_p_derivative((-0.5, -0.5), 3, 0.2) == pytest.approx(fd, abs=1e-6)
    w1 = norm_constant((0.0, 0.0), 1)
    for x in (-0.9, 0.0, 0.77):
        assert eval_p_derivative((0.0, 0.0), 1, x) == pytest.approx(w1, rel=1e-14)


@pytest.mark.parametrize("params", GRID_PARAMS[::4])
def test_derivative_matches_finite_difference(params):
    x = np.linspace(-0.9, 0.9, 11)
    h = 1e-6
    for n in (2, 7, 15):
        fd = (eval_p(params, n, x + h) - eval_p(params, n, x - h)) / (2 * h)
        np.testing.assert_allclose(eval_p_derivative(params, n, x), fd, rtol=1e-6, atol=1e-5)


def test_table_consistent_with_scalar():
    x = np.linspace(-1, 1, 9)
    tab = eval_p_table((0.5, 0.0), 12, x)
    assert tab.shape == (13, 9)
    for n in (0, 3, 12):
        np.testing.assert_allclose(tab[n], eval_p((0.5, 0.0), n, x), rtol=0, atol=0)


def test_uniform_bound_examples():
    assert uniform_bound((-0.5, -0.5), 0, 0.0) == pytest.approx(1.0)
    assert uniform_bound((-0.5, -0.5), 10, 0.5) == pytest.approx(1.0)
    assert uniform_bound((0.5, 0.0), 4, 0.99) == pytest.approx(5.0)
    with pytest.raises(DomainError):
        uniform_bound((0.0, 0.0), 3, 1.0)


def test_uniform_bound_dominates_polynomials():
    x = np.cos(np.linspace(0.001, math.pi - 0.001, 801))
    for params in [(-0.5, -0.5), (0.5, 0.0), (1.7, -0.3)]:
        tab = eval_p_table(params, 200, x)
        r100 = max(np.max(np.abs(tab[n]) / uniform_bound(params, n, x)) for n in range(101))
        r200 = max(np.max(np.abs(tab[n]) / uniform_bound(params, n, x)) for n in range(201))
        assert math.isfinite(r200) and (r200 - r100) / r100 < 0.05


def test_total_mass():
    assert total_mass((-0.5, -0.5)) == pytest.approx(math.pi, rel=1e-14)
    assert total_mass((0.0, 0.0)) == pytest.approx(2.0, rel=1e-14)
