"""Gauss-Jacobi rules from the truncated Jacobi matrix (Golub-Welsch)."""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError, NumericError
from .jacobi import (
    JacobiParams,
    as_params,
    eval_p,
    eval_p_derivative,
    eval_p_table,
    recurrence_table,
    total_mass,
)
from .tridiagonal import tridiagonal_eigen

ADAPTIVE_START = 32
ADAPTIVE_CAP = 2**15


@dataclass(frozen=True)
class QuadratureRule:
    params: JacobiParams
    order: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    total_mass: float

    def integrate(self, f):
        return integrate(self, f)


@lru_cache(maxsize=64)
def _gauss_jacobi(alpha, beta, order):
    params = JacobiParams(alpha, beta)
    a, b = recurrence_table(params, order)
    nodes, _ = tridiagonal_eigen(b, a[: order - 1], first_row=False)
    # one Newton step on p_N removes the few-ulp QL node error, which
    # otherwise shows up as ~1e-13 drift in high-degree exact integrals
    if order > 1:
        polished = nodes - eval_p(params, order, nodes) / eval_p_derivative(params, order, nodes)
        if np.all(np.diff(polished) > 0) and np.all(np.abs(polished) < 1.0):
            nodes = polished
    # The eigenvector of the truncated Jacobi matrix at a node is
    # (p_0(x), ..., p_{N-1}(x)) up to scale, so its squared first component
    # is p_0^2 / sum p_k^2.  This keeps full relative accuracy in tiny
    # endpoint weights, unlike the rotated first row.
    table = eval_p_table(params, order - 1, nodes)
    weights = 1.0 / np.sum(table * table, axis=0)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def gauss_jacobi(params, order):
    """Gauss rule with ``order`` nodes for ``(1-x)^a (1+x)^b dx``."""
    p = as_params(params)
    order = int(order)
    if order < 1:
        raise DomainError("quadrature order must be >= 1")
    nodes, weights = _gauss_jacobi(p.alpha, p.beta, order)
    return QuadratureRule(p, order, nodes, weights, total_mass(p))


def integrate(rule, f):
    """``sum_i weights_i f(nodes_i)``; ``f`` is called once on the node array."""
    values = np.asarray(f(rule.nodes), dtype=float)
    if values.shape != rule.nodes.shape:
        values = np.broadcast_to(values, rule.nodes.shape)
    if not np.all(np.isfinite(values)):
        raise NumericError("integrand is not finite at every node")
    return float(np.dot(rule.weights, values))


def _converged(new, old, scale, rel_tol):
    return abs(new - old) <= rel_tol * max(abs(new), scale)


def adaptive_integrate(params, f, rel_tol=1e-11, start=ADAPTIVE_START, cap=ADAPTIVE_CAP):
    """Integrate ``f`` against the measure, doubling the order until stable.

    Successive values are compared relative to ``max(|I|, int |f| dmu)``,
    which avoids chasing rounding noise when the integral cancels to ~0.
    Returns ``(value, order)`` where ``order`` is the smallest order whose
    value the next doubling confirmed; ``value`` is the finer estimate.
    """
    if rel_tol <= 0:
        raise DomainError("rel_tol must be positive")
    p = as_params(params)
    order = start
    rule = gauss_jacobi(p, order)
    vals = np.asarray(f(rule.nodes), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise NumericError("integrand is not finite at every node")
    prev = float(np.dot(rule.weights, vals))
    prev_prev = None
    while True:
        if 2 * order > cap:
            raise ConvergenceError(
                f"no convergence to rel_tol={rel_tol} below order {cap}",
                previous=prev_prev,
                last=prev,
            )
        rule = gauss_jacobi(p, 2 * order)
        vals = np.asarray(f(rule.nodes), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise NumericError("integrand is not finite at every node")
        cur = float(np.dot(rule.weights, vals))
        scale = float(np.dot(rule.weights, np.abs(vals)))
        if _converged(cur, prev, scale, rel_tol):
            return cur, order
        prev_prev, prev = prev, cur
        order *= 2


def jacobi_moments(params, kmax):
    """Moments ``int x^k dmu`` for k = 0..kmax from a two-term recursion.

    Integrating the derivative of ``x^k (1-x)^(a+1) (1+x)^(b+1)`` gives
    ``(k+a+b+2) m_{k+1} = (b-a) m_k + k m_{k-1}``.
    """
    p = as_params(params)
    a, b = p.alpha, p.beta
    m = np.empty(kmax + 1)
    m[0] = total_mass(p)
    if kmax >= 1:
        m[1] = (b - a) * m[0] / (a + b + 2.0)
    for k in range(1, kmax):
        m[k + 1] = ((b - a) * m[k] + k * m[k - 1]) / (k + a + b + 2.0)
    return m


def gauss_legendre_panel(lo, hi, order):
    """Nodes/weights for ``int_lo^hi g(t) dt`` from the (0,0) rule."""
    rule = gauss_jacobi(JacobiParams(0.0, 0.0), order)
    half = 0.5 * (hi - lo)
    return lo + half * (rule.nodes + 1.0), half * rule.weights


def power_singular_panel(hi, exponent, order):
    """Nodes/weights for ``int_0^hi t^exponent g(t) dt`` (exponent > -1).

    Maps t = hi (1+y)/2 so the power becomes the ``(1+y)^exponent`` factor
    of a Gauss-Jacobi rule with parameters (0, exponent).
    """
    rule = gauss_jacobi(JacobiParams(0.0, exponent), order)
    scale = (hi / 2.0) ** (exponent + 1.0)
    return hi * (rule.nodes + 1.0) / 2.0, scale * rule.weights


__all__ = [
    "QuadratureRule",
    "gauss_jacobi",
    "integrate",
    "adaptive_integrate",
    "jacobi_moments",
    "gauss_legendre_panel",
    "power_singular_panel",
]
