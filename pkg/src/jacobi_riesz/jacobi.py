"""Normalized Jacobi polynomials and their recurrence data.

The normalized family ``p_n = w_n P_n`` is orthonormal in L^2 of
``(1-x)^alpha (1+x)^beta dx`` on [-1, 1].  Evaluation runs the symmetric
three-term recurrence (the Jacobi matrix), which is self-scaling; the
classical unnormalized recurrence is kept as an independent path.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from .errors import DomainError
from .special import log_gamma


@dataclass(frozen=True)
class JacobiParams:
    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError("alpha and beta must be finite")
        if a <= -1.0 or b <= -1.0:
            raise DomainError(f"need alpha, beta > -1, got ({a}, {b})")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def riesz_admissible(self):
        return self.alpha >= -0.5 and self.beta >= -0.5

    def shifted(self, da=0.0, db=0.0):
        return JacobiParams(self.alpha + da, self.beta + db)

    def swapped(self):
        return JacobiParams(self.beta, self.alpha)


@dataclass(frozen=True)
class RecurrenceCoeffs:
    a: float
    b: float


def as_params(params):
    if isinstance(params, JacobiParams):
        return params
    alpha, beta = params
    return JacobiParams(alpha, beta)


def require_riesz_admissible(params):
    if not params.riesz_admissible:
        raise DomainError(
            f"operation requires alpha, beta >= -1/2, got ({params.alpha}, {params.beta})"
        )


def _check_index(n):
    if n < 0 or int(n) != n:
        raise DomainError(f"index must be a non-negative integer, got {n}")
    return int(n)


def _a_coeff(alpha, beta, n):
    s = alpha + beta
    if n == 0:
        return 2.0 / (s + 2.0) * math.sqrt((alpha + 1.0) * (beta + 1.0) / (s + 3.0))
    num = (n + 1.0) * (n + alpha + 1.0) * (n + beta + 1.0) * (n + s + 1.0)
    den = (2.0 * n + s + 1.0) * (2.0 * n + s + 3.0)
    return 2.0 / (2.0 * n + s + 2.0) * math.sqrt(num / den)


def _b_coeff(alpha, beta, n):
    s = alpha + beta
    if n == 0:
        return (beta - alpha) / (s + 2.0)
    return (beta * beta - alpha * alpha) / ((2.0 * n + s) * (2.0 * n + s + 2.0))


def recurrence_coeffs(params, n):
    """Off-diagonal ``a_n`` and diagonal ``b_n`` of the Jacobi matrix."""
    p = as_params(params)
    n = _check_index(n)
    return RecurrenceCoeffs(_a_coeff(p.alpha, p.beta, n), _b_coeff(p.alpha, p.beta, n))


@lru_cache(maxsize=256)
def _recurrence_table(alpha, beta, size):
    a = np.array([_a_coeff(alpha, beta, n) for n in range(size)])
    b = np.array([_b_coeff(alpha, beta, n) for n in range(size)])
    a.flags.writeable = False
    b.flags.writeable = False
    return a, b


def recurrence_table(params, size):
    """Arrays ``(a[0:size], b[0:size])``; read-only and cached."""
    p = as_params(params)
    return _recurrence_table(p.alpha, p.beta, int(size))


def log_norm_constant(params, n):
    p = as_params(params)
    n = _check_index(n)
    a, b = p.alpha, p.beta
    s = a + b
    if n == 0:
        return 0.5 * (
            log_gamma(s + 2.0)
            - (s + 1.0) * math.log(2.0)
            - log_gamma(a + 1.0)
            - log_gamma(b + 1.0)
        )
    return 0.5 * (
        math.log(2.0 * n + s + 1.0)
        + log_gamma(n + 1.0)
        + log_gamma(n + s + 1.0)
        - (s + 1.0) * math.log(2.0)
        - log_gamma(n + a + 1.0)
        - log_gamma(n + b + 1.0)
    )


def norm_constant(params, n):
    """``w_n = 1 / ||P_n||``, assembled in log space."""
    return math.exp(log_norm_constant(params, n))


def total_mass(params):
    """``mu(-1, 1) = 2^(a+b+1) B(a+1, b+1)``."""
    p = as_params(params)
    a, b = p.alpha, p.beta
    return math.exp(
        (a + b + 1.0) * math.log(2.0)
        + log_gamma(a + 1.0)
        + log_gamma(b + 1.0)
        - log_gamma(a + b + 2.0)
    )


def eval_p_table(params, nmax, x):
    """Rows ``p_0(x), ..., p_nmax(x)`` as an array of shape ``(nmax+1,) + x.shape``."""
    p = as_params(params)
    nmax = _check_index(nmax)
    x = np.asarray(x, dtype=float)
    a, b = recurrence_table(p, nmax + 1)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = math.exp(log_norm_constant(p, 0))
    if nmax >= 1:
        out[1] = (x - b[0]) * out[0] / a[0]
    for n in range(1, nmax):
        out[n + 1] = ((x - b[n]) * out[n] - a[n - 1] * out[n - 1]) / a[n]
    return out


def eval_p(params, n, x):
    """Normalized Jacobi polynomial ``p_n(x)``; scalar or array ``x``."""
    n = _check_index(n)
    p = as_params(params)
    x = np.asarray(x, dtype=float)
    a, b = recurrence_table(p, n + 1)
    prev = np.zeros_like(x)
    cur = np.full_like(x, math.exp(log_norm_constant(p, 0)))
    for k in range(n):
        a_prev = a[k - 1] if k > 0 else 0.0
        prev, cur = cur, ((x - b[k]) * cur - a_prev * prev) / a[k]
    return cur if cur.ndim else float(cur)


def eval_P_unnormalized(params, n, x):
    """Classical Jacobi polynomial ``P_n(x)`` with ``P_0 = 1``.

    Uses the textbook unnormalized recurrence, independent of the Jacobi
    matrix path.
    """
    n = _check_index(n)
    p = as_params(params)
    al, be = p.alpha, p.beta
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = (al + 1.0) + (al + be + 2.0) * (x - 1.0) / 2.0
    for k in range(2, n + 1):
        c = 2.0 * k + al + be
        a1 = 2.0 * k * (k + al + be) * (c - 2.0)
        a2 = (c - 1.0) * (c * (c - 2.0) * x + al * al - be * be)
        a3 = 2.0 * (k + al - 1.0) * (k + be - 1.0) * c
        prev, cur = cur, (a2 * cur - a3 * prev) / a1
    return cur if cur.ndim else float(cur)


def eval_p_derivative(params, n, x):
    """``d/dx p_n(x) = w_n (n+a+b+1)/2 P_{n-1}^{(a+1,b+1)}(x)``.

    The constant ``w_n^{(a,b)} / w_{n-1}^{(a+1,b+1)}`` collapses to
    ``sqrt(4n/(n+a+b+1))``, so the derivative is
    ``sqrt(n(n+a+b+1)) p_{n-1}^{(a+1,b+1)}(x)``.
    """
    n = _check_index(n)
    p = as_params(params)
    x = np.asarray(x, dtype=float)
    if n == 0:
        out = np.zeros_like(x)
        return out if out.ndim else 0.0
    lam = n * (n + p.alpha + p.beta + 1.0)
    out = math.sqrt(lam) * np.asarray(eval_p(p.shifted(1.0, 1.0), n - 1, x))
    return out if out.ndim else float(out)


def _bound_regions(n, x):
    eps = 1.0 / (n + 1.0) ** 2
    right = x > 1.0 - eps
    left = x < -1.0 + eps
    return right, left


def uniform_bound(params, n, x):
    """Piecewise majorant of ``|p_n(x)|`` on (-1, 1), without its constant.

    ``(n+1)^(a+1/2)`` near x=1, ``(n+1)^(b+1/2)`` near x=-1 and
    ``(1-x)^(-a/2-1/4) (1+x)^(-b/2-1/4)`` in between; the cut points are
    ``+-(1 - 1/(n+1)^2)`` with the middle branch closed.
    """
    p = as_params(params)
    n = _check_index(n)
    x = np.asarray(x, dtype=float)
    if np.any((x <= -1.0) | (x >= 1.0)):
        raise DomainError("uniform_bound is defined on the open interval (-1, 1)")
    right, left = _bound_regions(n, x)
    with np.errstate(divide="ignore"):
        middle = (1.0 - x) ** (-p.alpha / 2 - 0.25) * (1.0 + x) ** (-p.beta / 2 - 0.25)
    out = np.where(right, (n + 1.0) ** (p.alpha + 0.5), middle)
    out = np.where(left, (n + 1.0) ** (p.beta + 0.5), out)
    return out if out.ndim else float(out)
