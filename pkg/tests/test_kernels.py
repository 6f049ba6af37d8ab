import math

import numpy as np
import pytest
from scipy.special import ive

from jacobi_riesz.errors import DomainError
from jacobi_riesz.kernels import (
    exact_order,
    fractional_kernel,
    fractional_kernel_block,
    fractional_kernel_matrix,
    fractional_kernel_time_domain,
    heat_kernel,
    heat_kernel_matrix,
    heat_kernel_stack,
    riesz_kernel,
    riesz_kernel_block,
    riesz_kernel_matrix,
    split_even_odd,
)

CHEB = (-0.5, -0.5)


def midpoint(f, lo, hi, panels=10**6):
    h = (hi - lo) / panels
    u = lo + h * (np.arange(panels) + 0.5)
    return float(np.sum(f(u)) * h)


def test_riesz_closed_form():
    assert riesz_kernel(CHEB, 0, 0) == pytest.approx(2 * math.sqrt(2) / math.pi, abs=1e-14)
    km = riesz_kernel_matrix(CHEB, 1)
    assert km.entries.shape == (1, 1)
    assert km[0, 0] == pytest.approx(0.9003163161571061, abs=1e-14)
    assert km.exact and km.kind == "riesz"


def test_riesz_needs_admissible_params():
    with pytest.raises(DomainError):
        riesz_kernel((-0.7, 0.0), 0, 0)


def test_riesz_row_is_unit_vector():
    row = riesz_kernel_block(CHEB, 1, 4096)[0]
    partial = np.cumsum(row**2)
    assert partial[-1] >= 1 - 1e-4
    assert partial[-1] <= 1 + 1e-12


@pytest.mark.parametrize("params", [CHEB, (0.5, 0.0), (1.7, -0.3)])
def test_riesz_order_independence(params):
    block = riesz_kernel_block(params, 40, 40)
    finer = riesz_kernel_block(params, 40, 40, order=2 * exact_order(80))
    assert np.max(np.abs(block - finer)) < 1e-13


def test_riesz_scalar_matches_block():
    block = riesz_kernel_block((0.5, 0.0), 6, 9)
    for m, n in [(0, 0), (5, 2), (3, 8)]:
        assert riesz_kernel((0.5, 0.0), m, n) == pytest.approx(block[m, n], abs=1e-14)


def test_riesz_block_thread_independent():
    a = riesz_kernel_block((0.5, 0.0), 64, 64, threads=1)
    b = riesz_kernel_block((0.5, 0.0), 64, 64, threads=4)
    assert np.array_equal(a, b)


def test_riesz_size_decay():
    block = riesz_kernel_block(CHEB, 4, 400)
    n = np.arange(50, 400)
    for m in range(4):
        assert np.max(np.abs(block[m, 50:]) * (n - m)) < 1.0


def test_heat_identity_at_zero():
    np.testing.assert_allclose(heat_kernel_matrix(CHEB, 0.0, 8).entries, np.eye(8), atol=1e-11)
    assert heat_kernel((0.5, 0.0), 0.0, 2, 3) == pytest.approx(0.0, abs=1e-11)


@pytest.mark.parametrize("t", [0.01, 0.5, 3.0, 40.0])
def test_heat_diagonal_closed_form(t):
    assert heat_kernel(CHEB, t, 0, 0) == pytest.approx(float(ive(0, t)), rel=1e-11)
    assert heat_kernel(CHEB, t, 3, 3) == pytest.approx(float(ive(0, t) + ive(6, t)), rel=1e-11)


def test_heat_panel_oracle():
    # K_1(0,2) = (sqrt(2)/pi) int_0^pi exp(-(1-cos t)) cos(2t) dt
    oracle = math.sqrt(2) / math.pi * midpoint(lambda th: np.exp(-(1 - np.cos(th))) * np.cos(2 * th), 0, math.pi)
    assert heat_kernel(CHEB, 1.0, 0, 2) == pytest.approx(oracle, abs=1e-9)
    assert heat_kernel(CHEB, 1.0, 0, 2) == pytest.approx(math.sqrt(2) * float(ive(2, 1.0)), abs=1e-12)


@pytest.mark.parametrize("params", [CHEB, (0.5, 0.0), (1.7, 1.7)])
def test_heat_diagonal_in_unit_interval(params):
    km = heat_kernel_matrix(params, 0.7, 12)
    d = np.diag(km.entries)
    assert np.all(d > 0) and np.all(d <= 1 + 1e-12)
    np.testing.assert_allclose(km.entries, km.entries.T, atol=1e-14)


def test_heat_stack_matches_scalar():
    stack, order = heat_kernel_stack((0.5, 0.0), [0.3, 2.0], 4, 5)
    assert stack.shape == (2, 4, 5) and order >= 32
    assert stack[1, 2, 4] == pytest.approx(heat_kernel((0.5, 0.0), 2.0, 2, 4), abs=1e-12)


def test_fractional_domain():
    for s in (0.0, 0.5, 0.7, -0.1):
        with pytest.raises(DomainError):
            fractional_kernel(CHEB, s, 0, 1)


def test_fractional_small_sigma():
    assert abs(fractional_kernel(CHEB, 1e-6, 0, 1)) < 1e-4
    assert fractional_kernel(CHEB, 1e-6, 2, 2) == pytest.approx(1.0, abs=1e-4)


def test_fractional_panel_oracle():
    # (sqrt2/pi) int_0^pi (1-cos t)^(-1/4) cos t dt with t = 2 u^2
    def f(u):
        phi = u * u
        return (2 * np.sin(phi) ** 2) ** -0.25 * np.cos(2 * phi) * 2 * u

    oracle = math.sqrt(2) / math.pi * 2 * midpoint(f, 0.0, math.sqrt(math.pi / 2))
    assert fractional_kernel(CHEB, 0.25, 0, 1) == pytest.approx(oracle, abs=1e-8)


def test_fractional_block_and_matrix():
    km = fractional_kernel_matrix((0.5, 0.0), 0.3, 6)
    assert np.all(np.isfinite(km.entries)) and km.sigma == 0.3
    np.testing.assert_allclose(km.entries, km.entries.T, atol=1e-14)
    np.testing.assert_array_equal(fractional_kernel_block((0.5, 0.0), 0.3, 6, 6), km.entries)


def test_fractional_time_domain_small():
    direct = fractional_kernel_matrix(CHEB, 0.3, 4).entries
    time = fractional_kernel_time_domain(CHEB, 0.3, 4)
    time = getattr(time, "entries", time)
    assert np.max(np.abs(direct - time)) < 1e-5


def test_split_even_odd():
    km = riesz_kernel_matrix(CHEB, 2)
    parts = split_even_odd(km)
    assert parts["ee"].entries[0, 0] == km[0, 0]
    assert parts["oo"].entries[0, 0] == km[1, 1]
    with pytest.raises(DomainError):
        split_even_odd(riesz_kernel_matrix(CHEB, 1))


def test_split_partition_and_reconstruction(rng):
    N = 20
    R = riesz_kernel_matrix((0.5, 0.0), N).entries
    parts = split_even_odd(R)
    seen = np.zeros((N, N), int)
    for key, (rm, cm) in {"ee": (0, 0), "eo": (1, 0), "oe": (0, 1), "oo": (1, 1)}.items():
        idx_r = 2 * np.arange(N // 2) + rm
        idx_c = 2 * np.arange(N // 2) + cm
        np.testing.assert_array_equal(parts[key], R[np.ix_(idx_r, idx_c)])
        seen[np.ix_(idx_r, idx_c)] += 1
    assert np.all(seen == 1)
    f = rng.standard_normal(N)
    full = f @ R
    recon = parts["ee"].T @ f[0::2] + parts["eo"].T @ f[1::2]
    np.testing.assert_allclose(full[0::2], recon, atol=1e-12)
