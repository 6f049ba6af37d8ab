"""Heat semigroup, fractional integrals and the Riesz transform on sequences.

The sequence space is infinite, so every transform takes an explicit
truncation ``N`` (outputs for n < N) and reports a tail estimate.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DomainError
from .jacobi import as_params, eval_p_table, require_riesz_admissible
from .kernels import (
    _check_sigma,
    exact_order,
    fractional_kernel_block,
    heat_kernel_stack,
    riesz_kernel_block,
)
from .quadrature import adaptive_integrate, gauss_jacobi
from .sequences import FiniteSequence, apply_delta


@dataclass(frozen=True)
class TransformResult:
    output: np.ndarray = field(repr=False)
    truncation: int
    tail_estimate: float

    def norm(self, p=2.0, weight=None):
        v = np.abs(self.output)
        if weight is not None:
            return float(np.sum(v**p * np.asarray(weight)[: len(v)]) ** (1.0 / p))
        return float(np.sum(v**p) ** (1.0 / p))


def _prepare(f, N):
    f = f if isinstance(f, FiniteSequence) else FiniteSequence(f)
    if N < 1 or N <= f.support_bound:
        raise DomainError(f"truncation N={N} must exceed the support bound {f.support_bound}")
    return f


def apply_kernel_rows(coeffs, block):
    """``out(n) = sum_m coeffs[m] block[m, n]`` accumulated in ascending m."""
    out = np.zeros(block.shape[1])
    for m, c in enumerate(coeffs):
        if c != 0.0:
            out += c * block[m]
    return out


def _power_tail(out):
    """l2 mass beyond the end, from a power-law fit over the last octave."""
    N = len(out)
    if N < 8:
        return float("nan")
    n = np.arange(N // 2, N)
    mags = np.abs(out[N // 2 :])
    if np.all(mags == 0):
        return 0.0
    mags = np.maximum(mags, np.finfo(float).tiny)
    slope = np.polyfit(np.log(n + 1.0), np.log(mags), 1)[0]
    if slope >= -0.5:
        return float("inf")
    c = float(np.exp(np.mean(np.log(mags) - slope * np.log(n + 1.0))))
    # sum_{k >= N} (c k^slope)^2 <= c^2 N^(2 slope + 1) / (-2 slope - 1)
    return math.sqrt(c * c * N ** (2 * slope + 1) / (-2 * slope - 1))


def heat_semigroup(params, t, f, N, threads=None):
    """``W_t f(n) = sum_m f(m) K_t(m, n)`` for n < N."""
    f = _prepare(f, N)
    if t < 0:
        raise DomainError("heat semigroup needs t >= 0")
    if t == 0:
        return TransformResult(f.dense(N), N, 0.0)
    p = as_params(params)
    block = heat_kernel_stack(p, [t], len(f), N, threads=threads)[0][0]
    out = apply_kernel_rows(f.values, block)
    return TransformResult(out, N, _power_tail(out))


def fractional_integral(params, sigma, f, N, threads=None):
    """``(-calJ)^(-sigma) f(n)`` for n < N through the exact spectral kernel."""
    _check_sigma(sigma)
    f = _prepare(f, N)
    p = as_params(params)
    require_riesz_admissible(p)
    block = fractional_kernel_block(p, sigma, len(f), N, threads=threads)
    out = apply_kernel_rows(f.values, block)
    return TransformResult(out, N, _power_tail(out))


def riesz_size_constant(block, lo=None):
    """Largest ``|R(m, n)| |m - n|`` over the columns ``n >= lo`` of a kernel block."""
    rows, cols = block.shape
    lo = cols // 2 if lo is None else lo
    n = np.arange(lo, cols)
    best = 0.0
    for m in range(rows):
        mask = n != m
        if np.any(mask):
            best = max(best, float(np.max(np.abs(block[m, lo:][mask]) * np.abs(n[mask] - m))))
    return best


def riesz_transform(params, f, N, threads=None):
    """``Rf(n) = sum_m f(m) R(m, n)`` for n < N with the exact kernel.

    ``tail_estimate`` bounds the l2 norm of the discarded entries n >= N
    through the size estimate ``|R(m, n)| <= C / |m - n|``, with C taken
    from the computed block.
    """
    f = _prepare(f, N)
    p = as_params(params)
    require_riesz_admissible(p)
    rows = len(f)
    block = riesz_kernel_block(p, rows, N, threads=threads)
    out = apply_kernel_rows(f.values, block)
    gap = N - rows
    if gap >= 1:
        c = riesz_size_constant(block)
        tail = c * float(np.sum(np.abs(f.values))) / math.sqrt(gap)
    else:
        tail = float("inf")
    return TransformResult(out, N, tail)


def riesz_sigma_approach(params, f, sigma, N, threads=None):
    """``delta (-calJ)^(-sigma) f`` on [0, N): the family whose sigma -> 1/2 limit is R."""
    f = _prepare(f, N)
    frac = fractional_integral(params, sigma, f, N + 1, threads=threads)
    out = apply_delta(params, FiniteSequence(frac.output)).dense(N)
    return TransformResult(out, N, frac.tail_estimate)


def synthesize(params, f, x):
    """``F(x) = sum_m f(m) p_m(x)``."""
    f = f if isinstance(f, FiniteSequence) else FiniteSequence(f)
    x = np.asarray(x, dtype=float)
    table = eval_p_table(params, len(f) - 1, x)
    out = np.tensordot(f.values, table, axes=(0, 0))
    return out if out.ndim else float(out)


def fourier_jacobi_coeff(params, F, m, weight_shift=0.0, rel_tol=1e-13):
    """``c_m(F) = int F(x) (1-x)^shift p_m(x) dmu_{a,b}``.

    A non-zero ``weight_shift`` moves the power of (1-x) into the measure,
    so the adaptive rule is built for ``(a + shift, b)``.
    """
    p = as_params(params)
    rule_params = p.shifted(weight_shift)

    def integrand(x):
        return F(x) * eval_p_table(p, m, x)[m]

    value, _ = adaptive_integrate(rule_params, integrand, rel_tol)
    return value


def fourier_jacobi_coeffs(params, F, count, weight_shift=0.0, rel_tol=1e-13, start=None):
    """Vector of ``c_0 .. c_{count-1}``, sharing one adaptive rule sequence."""
    p = as_params(params)
    rule_params = p.shifted(weight_shift)
    order = start or max(32, exact_order(2 * count))
    prev = None
    while True:
        rule = gauss_jacobi(rule_params, order)
        table = eval_p_table(p, count - 1, rule.nodes)
        vals = F(rule.nodes) * rule.weights
        cur = np.array([float(np.sum(vals * row)) for row in table])
        if prev is not None:
            if np.max(np.abs(cur - prev)) <= rel_tol * max(1.0, float(np.max(np.abs(cur)))):
                return cur
        if order > 2**15:
            raise DomainError("coefficient quadrature did not converge")
        prev = cur
        order *= 2


def riesz_spectral(params, f, N, rel_tol=1e-13):
    """Riesz transform through ``c_n^{(a+1,b)}((1-x)^(-1/2) F)``, F synthesized from f.

    ``(1-x)^(-1/2) (1-x)^(a+1) = (1-x)^(a+1/2)``: the coefficients are taken
    against the (a+1/2, b) measure with the (a+1, b) family.
    """
    p = as_params(params)
    require_riesz_admissible(p)
    f = f if isinstance(f, FiniteSequence) else FiniteSequence(f)
    target = p.shifted(1.0)
    return fourier_jacobi_coeffs(
        target, lambda x: synthesize(p, f, x), N, weight_shift=-0.5, rel_tol=rel_tol
    )
