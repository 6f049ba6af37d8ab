"""Heat, fractional-integral and Riesz kernels on N x N.

All kernels are integrals of products of normalized Jacobi polynomials.
The Riesz and fractional kernels carry a power of (1-x) which is folded
into the measure: ``(1-x)^(1/2) dmu_{a,b} = dmu_{a+1/2,b}`` and
``(1-x)^(-s) dmu_{a,b} = dmu_{a-s,b}``.  The remaining integrand is a
polynomial, so a Gauss rule of sufficient order is exact.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np

from ._parallel import map_row_blocks
from .errors import ConvergenceError, DomainError
from .jacobi import JacobiParams, as_params, eval_p_table, log_norm_constant, require_riesz_admissible
from .quadrature import adaptive_integrate, gauss_jacobi, gauss_legendre_panel, power_singular_panel
from .special import log_gamma

HEAT_REL_TOL = 1e-11
KINDS = ("heat", "fractional", "riesz")


@dataclass(frozen=True)
class KernelMatrix:
    kind: str
    params: JacobiParams
    entries: np.ndarray = field(repr=False)
    quadrature_order: int
    exact: bool
    t: float = None
    sigma: float = None

    @property
    def size(self):
        return self.entries.shape[0]

    def __getitem__(self, idx):
        return self.entries[idx]

    def metadata(self):
        meta = {
            "kind": self.kind,
            "params": {"alpha": self.params.alpha, "beta": self.params.beta},
            "N": int(self.entries.shape[0]),
            "quadrature_order": int(self.quadrature_order),
            "exact": bool(self.exact),
        }
        if self.t is not None:
            meta["t"] = self.t
        if self.sigma is not None:
            meta["sigma"] = self.sigma
        return meta


def exact_order(max_degree):
    """Smallest Gauss order integrating degree ``max_degree`` exactly."""
    return max_degree // 2 + 1 if max_degree > 0 else 1


@lru_cache(maxsize=128)
def _basis_at_nodes(alpha, beta, rule_alpha, rule_beta, order, nmax):
    rule = gauss_jacobi((rule_alpha, rule_beta), order)
    table = eval_p_table((alpha, beta), nmax, rule.nodes)
    table.flags.writeable = False
    return table


def _basis(family, rule_params, order, nmax):
    return _basis_at_nodes(family.alpha, family.beta, rule_params.alpha, rule_params.beta, order, nmax)


def accumulate_products(left, right, weights):
    """``out[i, j] = sum_k weights[k] left[i, k] right[j, k]`` summed in ascending k.

    Neumaier-compensated; the fixed summation order makes each entry
    bitwise reproducible no matter how rows are distributed across workers.
    """
    total = np.zeros((left.shape[0], right.shape[0]))
    comp = np.zeros_like(total)
    for k in range(left.shape[1]):
        term = np.multiply.outer(weights[k] * left[:, k], right[:, k])
        new = total + term
        big = np.abs(total) >= np.abs(term)
        comp += np.where(big, (total - new) + term, (term - new) + total)
        total = new
    return total + comp


def _check_sigma(sigma):
    if not 0.0 < sigma < 0.5:
        raise DomainError(
            f"fractional integral of order sigma={sigma} is only defined for 0 < sigma < 1/2"
        )


def _product_block(row_family, col_family, rule_params, rows, cols, order, threads=None, extra=None):
    rule = gauss_jacobi(rule_params, order)
    left = _basis(row_family, rule_params, order, rows - 1)
    right = _basis(col_family, rule_params, order, cols - 1)
    w = rule.weights if extra is None else rule.weights * extra(rule.nodes)

    def block(lo, hi):
        return accumulate_products(left[lo:hi], right, w)

    return map_row_blocks(block, rows, threads)


# -- Riesz --------------------------------------------------------------------


def riesz_kernel(params, m, n, order=None):
    """``R(m, n) = int (1-x)^(1/2) p_m^{(a,b)} p_n^{(a+1,b)} dmu_{a,b}``, exactly."""
    p = as_params(params)
    require_riesz_admissible(p)
    if order is None:
        order = exact_order(m + n)
    rule_params = p.shifted(0.5)
    rule = gauss_jacobi(rule_params, order)
    pm = eval_p_table(p, m, rule.nodes)[m]
    pn = eval_p_table(p.shifted(1.0), n, rule.nodes)[n]
    return float(accumulate_products(pm[None, :], pn[None, :], rule.weights)[0, 0])


def riesz_kernel_block(params, rows, cols, order=None, threads=None):
    """Array of ``R(m, n)`` for ``m < rows``, ``n < cols``."""
    p = as_params(params)
    require_riesz_admissible(p)
    if order is None:
        order = exact_order(rows + cols - 2)
    return _product_block(p, p.shifted(1.0), p.shifted(0.5), rows, cols, order, threads)


def riesz_kernel_matrix(params, size, order=None, threads=None):
    if size < 1:
        raise DomainError("size must be >= 1")
    p = as_params(params)
    order = order or exact_order(2 * size - 2)
    entries = riesz_kernel_block(p, size, size, order, threads)
    return KernelMatrix("riesz", p, entries, order, True)


# -- fractional integral --------------------------------------------------------


def fractional_kernel(params, sigma, m, n, order=None):
    """``int p_m p_n (1-x)^(-sigma) dmu_{a,b}`` for 0 < sigma < 1/2, exactly."""
    _check_sigma(sigma)
    p = as_params(params)
    require_riesz_admissible(p)
    if order is None:
        order = exact_order(m + n)
    rule = gauss_jacobi(p.shifted(-sigma), order)
    top = max(m, n)
    table = eval_p_table(p, top, rule.nodes)
    return float(accumulate_products(table[m][None, :], table[n][None, :], rule.weights)[0, 0])


def fractional_kernel_block(params, sigma, rows, cols, order=None, threads=None):
    _check_sigma(sigma)
    p = as_params(params)
    require_riesz_admissible(p)
    if order is None:
        order = exact_order(rows + cols - 2)
    return _product_block(p, p, p.shifted(-sigma), rows, cols, order, threads)


def fractional_kernel_matrix(params, sigma, size, order=None, threads=None):
    p = as_params(params)
    order = order or exact_order(2 * size - 2)
    entries = fractional_kernel_block(p, sigma, size, size, order, threads)
    return KernelMatrix("fractional", p, entries, order, True, sigma=float(sigma))


# -- heat -------------------------------------------------------------------------


def heat_kernel(params, t, m, n, rel_tol=HEAT_REL_TOL):
    """``K_t(m, n) = int exp(-(1-x) t) p_m p_n dmu`` by adaptive Gauss-Jacobi."""
    if t < 0:
        raise DomainError("heat kernel needs t >= 0")
    p = as_params(params)
    lo, hi = min(m, n), max(m, n)

    def integrand(x):
        table = eval_p_table(p, hi, x)
        return np.exp(-(1.0 - x) * t) * table[lo] * table[hi]

    value, _ = adaptive_integrate(p, integrand, rel_tol)
    return value


def _heat_start_order(rows, cols, tmax):
    return max(32, exact_order(rows + cols - 2) + int(math.ceil(math.sqrt(80.0 * tmax))))


def heat_kernel_stack(params, ts, rows, cols, rel_tol=HEAT_REL_TOL, threads=None, cap=2**14):
    """``K_t(m, n)`` for every t in ``ts``; shape ``(len(ts), rows, cols)``.

    One rule serves every t; its order doubles until the largest entry
    change is below ``rel_tol`` (entries are bounded by 1 in modulus).
    """
    p = as_params(params)
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    if np.any(ts < 0):
        raise DomainError("heat kernel needs t >= 0")
    order = _heat_start_order(rows, cols, float(ts.max()))

    def evaluate(q):
        rule = gauss_jacobi(p, q)
        left = _basis(p, p, q, rows - 1)
        right = _basis(p, p, q, cols - 1)
        weights = rule.weights * np.exp(-np.multiply.outer(ts, 1.0 - rule.nodes))
        if rows * cols * q <= 4_000_000:
            # einsum without optimize never dispatches to BLAS; deterministic
            prods = np.einsum("ik,jk->kij", left, right)
            return np.einsum("tk,kij->tij", weights, prods)
        out = np.empty((len(ts), rows, cols))
        for i, w in enumerate(weights):
            out[i] = map_row_blocks(
                lambda lo, hi: accumulate_products(left[lo:hi], right, w), rows, threads
            )
        return out

    prev = evaluate(order)
    while True:
        if 2 * order > cap:
            raise ConvergenceError("heat kernel quadrature did not converge", last=prev)
        cur = evaluate(2 * order)
        if np.max(np.abs(cur - prev)) <= rel_tol:
            return cur, order
        prev = cur
        order *= 2


def heat_kernel_matrix(params, t, size, rel_tol=HEAT_REL_TOL, threads=None):
    p = as_params(params)
    if size < 1:
        raise DomainError("size must be >= 1")
    stack, order = heat_kernel_stack(p, [t], size, size, rel_tol, threads)
    return KernelMatrix("heat", p, stack[0], order, False, t=float(t))


# -- even / odd splitting ------------------------------------------------------


def split_even_odd(kernel):
    """The four parity sub-kernels, keyed ``"ee"``, ``"eo"``, ``"oe"``, ``"oo"``.

    ``ee[m, n] = R(2m, 2n)``, ``eo[m, n] = R(2m+1, 2n)``,
    ``oe[m, n] = R(2m, 2n+1)``, ``oo[m, n] = R(2m+1, 2n+1)``.
    """
    entries = kernel.entries if isinstance(kernel, KernelMatrix) else np.asarray(kernel)
    size = entries.shape[0]
    if size < 2:
        raise DomainError("splitting needs a kernel of size >= 2")
    half = size // 2
    even = np.arange(half) * 2
    odd = even + 1
    parts = {
        "ee": entries[np.ix_(even, even)],
        "eo": entries[np.ix_(odd, even)],
        "oe": entries[np.ix_(even, odd)],
        "oo": entries[np.ix_(odd, odd)],
    }
    if isinstance(kernel, KernelMatrix):
        return {
            k: KernelMatrix(kernel.kind, kernel.params, v, kernel.quadrature_order, kernel.exact,
                            kernel.t, kernel.sigma)
            for k, v in parts.items()
        }
    return parts


# -- time-domain route to the fractional kernel ---------------------------------


def _taylor_at_one(params, n, kmax):
    """Coefficients c_k with ``p_n(1 - u) = sum_k c_k u^k``.

    From ``P_n^{(k)}(1) = Gamma(n+a+b+1+k) / (2^k Gamma(n+a+b+1)) P_{n-k}^{(a+k,b+k)}(1)``
    and ``P_j^{(c,d)}(1) = Gamma(j+c+1) / (Gamma(c+1) j!)``.
    """
    a, b = params.alpha, params.beta
    out = np.zeros(kmax + 1)
    log_w = log_norm_constant(params, n)
    for k in range(min(n, kmax) + 1):
        if k == 0:
            log_deriv = 0.0
        else:
            log_deriv = log_gamma(n + a + b + 1 + k) - log_gamma(n + a + b + 1) - k * math.log(2.0)
        j = n - k
        log_at_one = log_gamma(j + a + k + 1) - log_gamma(a + k + 1) - log_gamma(j + 1)
        out[k] = (-1) ** k * math.exp(log_w + log_deriv + log_at_one - log_gamma(k + 1))
    return out


def heat_tail_integral(params, sigma, rows, cols, T, terms=40):
    """``int_T^inf t^(sigma-1) K_t(m, n) dt`` from the large-t expansion of K_t.

    Near x = 1 write u = 1 - x, so ``K_t = int_0^2 e^(-ut) u^a h(u) du`` with
    ``h(u) = p_m(1-u) p_n(1-u) (2-u)^b``.  Term-by-term Laplace asymptotics
    give ``K_t ~ sum_k h_k Gamma(a+k+1) t^(-a-k-1)``; the u = 2 end is
    O(e^(-2t)) and is dropped.
    """
    p = as_params(params)
    a, b = p.alpha, p.beta
    if sigma >= a + 1:
        raise DomainError("tail integral diverges for sigma >= alpha + 1")
    kmax = terms
    taylor = [_taylor_at_one(p, n, kmax) for n in range(max(rows, cols))]
    # (2-u)^b = 2^b sum_k binom(b, k) (-u/2)^k
    binom = np.empty(kmax + 1)
    binom[0] = 2.0**b
    for k in range(kmax):
        binom[k + 1] = binom[k] * (b - k) / (k + 1) * (-0.5)
    k = np.arange(kmax + 1)
    moments = np.array(
        [math.exp(log_gamma(a + kk + 1) + (sigma - a - kk - 1) * math.log(T)) / (a + kk + 1 - sigma)
         for kk in k]
    )
    out = np.empty((rows, cols))
    for m in range(rows):
        for n in range(cols):
            h = np.convolve(np.convolve(taylor[m], taylor[n])[: kmax + 1], binom)[: kmax + 1]
            out[m, n] = float(np.sum(h * moments))
    return out


def fractional_kernel_time_domain(params, sigma, size, T=200.0, panel_order=40, tail=True,
                                  threads=None):
    """``(1/Gamma(sigma)) int_0^inf t^(sigma-1) K_t(m, n) dt`` for m, n < size.

    (0, 1] uses a Gauss-Jacobi rule absorbing ``t^(sigma-1)``; [1, T] is
    split into dyadic Gauss-Legendre panels.  With ``tail`` the remainder
    beyond T comes from ``heat_tail_integral``.
    """
    _check_sigma(sigma)
    p = as_params(params)
    t0, w0 = power_singular_panel(1.0, sigma - 1.0, panel_order)
    ts, ws = [t0], [w0]
    edges = [1.0]
    while edges[-1] * 2 < T:
        edges.append(edges[-1] * 2)
    edges.append(float(T))
    for lo, hi in zip(edges[:-1], edges[1:]):
        tn, wn = gauss_legendre_panel(lo, hi, panel_order)
        ts.append(tn)
        ws.append(wn * tn ** (sigma - 1.0))
    ts = np.concatenate(ts)
    ws = np.concatenate(ws)
    stack, _ = heat_kernel_stack(p, ts, size, size, threads=threads)
    total = np.tensordot(ws, stack, axes=(0, 0))
    if tail:
        total = total + heat_tail_integral(p, sigma, size, size, T)
    return total / math.exp(log_gamma(sigma))
