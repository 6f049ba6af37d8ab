"""Numerical checks of the kernel estimates and weighted-norm experiments.

Bounds whose constants are unspecified are checked by dyadic stability:
the scanned supremum is recorded at N/4, N/2 and N, and the last step
must grow by less than ``STABILITY_TOL``.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .jacobi import (
    as_params,
    eval_p_table,
    recurrence_table,
    require_riesz_admissible,
    uniform_bound,
)
from .kernels import heat_kernel_stack, riesz_kernel_block
from .quadrature import gauss_jacobi, gauss_legendre_panel
from .sequences import delta_table, truncate_operator
from .transforms import apply_kernel_rows
from .weights import in_ap_range

STABILITY_TOL = 0.05
ESTIMATES = ("size", "smooth_m", "smooth_n", "heat", "lemma_diff", "lemma_diff_der", "unif_bound")


@dataclass
class ScanReport:
    estimate_id: str
    params: tuple
    N: int
    empirical_sup: float
    argmax: tuple
    dyadic_history: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def last_step_increase(self):
        if len(self.dyadic_history) < 2:
            return 0.0
        prev, last = self.dyadic_history[-2][1], self.dyadic_history[-1][1]
        return (last - prev) / prev if prev > 0 else (0.0 if last == 0 else math.inf)

    @property
    def passed(self):
        return math.isfinite(self.empirical_sup) and self.last_step_increase < STABILITY_TOL

    def to_dict(self):
        return {
            "estimate_id": self.estimate_id,
            "params": {"alpha": self.params[0], "beta": self.params[1]},
            "N": self.N,
            "sup": self.empirical_sup,
            "argmax": [int(v) if float(v).is_integer() else float(v) for v in self.argmax],
            "dyadic_history": [[int(n), float(s)] for n, s in self.dyadic_history],
            "pass": bool(self.passed),
            **({"details": self.extra} if self.extra else {}),
        }


def dyadic_levels(N):
    levels = sorted({k for k in (N // 4, N // 2, N) if k >= 2})
    return levels or [N]


def _report(estimate_id, params, levels, sups, args, extra=None):
    history = [(n, float(s)) for n, s in zip(levels, sups)]
    return ScanReport(
        estimate_id,
        (params.alpha, params.beta),
        int(levels[-1]),
        float(sups[-1]),
        tuple(args[-1]),
        history,
        extra or {},
    )


def _masked_argmax(values):
    idx = np.unravel_index(int(np.argmax(values)), values.shape)
    return float(values[idx]), tuple(int(i) for i in idx)


# -- exact identities ----------------------------------------------------------------


def check_orthonormality(params, nmax=50):
    """``max |<p_i, p_j> - delta_ij|`` for i, j <= nmax via an exact Gauss rule."""
    p = as_params(params)
    rule = gauss_jacobi(p, nmax + 2)
    table = eval_p_table(p, nmax, rule.nodes)
    gram = (table * rule.weights[None, :]) @ table.T
    return float(np.max(np.abs(gram - np.eye(nmax + 1))))


def check_recurrence(params, nmax=50, x=None):
    """Pointwise residual of ``(J p)(n) = x p_n(x)`` for n <= nmax."""
    p = as_params(params)
    x = np.linspace(-1.0, 1.0, 101) if x is None else np.asarray(x, dtype=float)
    table = eval_p_table(p, nmax + 1, x)
    a, b = recurrence_table(p, nmax + 2)
    res = []
    for n in range(nmax + 1):
        lhs = b[n] * table[n] + a[n] * table[n + 1]
        if n > 0:
            lhs = lhs + a[n - 1] * table[n - 1]
        res.append(np.max(np.abs(lhs - x * table[n])))
    return float(max(res))


def check_factorization(params, N=256):
    """Max entry of ``calJ + delta* delta`` on the interior block [0, N-1)^2."""
    p = as_params(params)
    calJ = truncate_operator(p, "calJ", N).matrix
    delta = truncate_operator(p, "delta", N).matrix
    delta_star = truncate_operator(p, "delta_star", N).matrix
    diff = calJ + delta_star @ delta
    return float(np.max(np.abs(diff[: N - 1, : N - 1])))


def check_intertwining(params, nmax=50, x=None):
    """Residual of ``d_n p_n - e_n p_{n+1} = (1-x) p_n^{(a+1,b)}`` for n <= nmax."""
    p = as_params(params)
    x = np.linspace(-1.0, 1.0, 101) if x is None else np.asarray(x, dtype=float)
    P = eval_p_table(p, nmax + 1, x)
    Q = eval_p_table(p.shifted(1.0), nmax, x)
    d, e = delta_table(p, nmax + 1)
    lhs = d[: nmax + 1, None] * P[: nmax + 1] - e[: nmax + 1, None] * P[1 : nmax + 2]
    return float(np.max(np.abs(lhs - (1.0 - x) * Q)))


def isometry_experiment(params, N=4096, trials=50, support=16, seed=7, levels=None, threads=None):
    """``||Rf||_2 / ||f||_2`` on prefixes of length ``levels`` for seeded random f.

    f has i.i.d. standard normal entries on [0, support).
    """
    p = as_params(params)
    require_riesz_admissible(p)
    levels = sorted(levels or [N // 4, N // 2, N])
    block = riesz_kernel_block(p, support, levels[-1], threads=threads)
    rng = np.random.default_rng(seed)
    ratios = np.empty((trials, len(levels)))
    for i in range(trials):
        f = rng.standard_normal(support)
        out = apply_kernel_rows(f, block)
        fn = math.sqrt(float(np.sum(f * f)))
        for k, n in enumerate(levels):
            ratios[i, k] = math.sqrt(float(np.sum(out[:n] ** 2))) / fn
    top = ratios[:, -1]
    report = {
        "params": {"alpha": p.alpha, "beta": p.beta},
        "N": int(levels[-1]),
        "levels": [int(n) for n in levels],
        "trials": int(trials),
        "support": int(support),
        "seed": int(seed),
        "max_ratio": float(np.max(top)),
        "max_relative_defect": float(np.max(1.0 - top)),
        "monotone": bool(np.all(np.diff(ratios, axis=1) >= 0)),
    }
    report["pass"] = bool(
        report["max_ratio"] <= 1.0 + 1e-10
        and report["max_relative_defect"] < 1e-3
        and report["monotone"]
    )
    return report


# -- Riesz kernel estimates -----------------------------------------------------


def size_sup(block, N):
    m, n = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    dist = np.abs(m - n)
    return _masked_argmax(np.where(dist > 0, np.abs(block[:N, :N]) * dist, 0.0))


def scan_size(params, N, threads=None):
    """Empirical constant in ``|R(m, n)| <= C / |m - n|`` over m != n < N."""
    p = as_params(params)
    require_riesz_admissible(p)
    block = riesz_kernel_block(p, N, N, threads=threads)
    levels = dyadic_levels(N)
    sups, args = zip(*(size_sup(block, k) for k in levels))
    return _report("size", p, levels, sups, args)


def band_mask(N):
    """Pairs with m != n and m/2 <= n <= 3m/2, as an (N, N) boolean array."""
    m, n = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    return (m != n) & (2 * n >= m) & (2 * n <= 3 * m)


def smooth_sup(block, N, direction):
    m, n = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    if direction == "m":
        diff = block[2 : N + 2, :N] - block[:N, :N]
    elif direction == "n":
        diff = block[:N, 2 : N + 2] - block[:N, :N]
    else:
        raise ValueError("direction must be 'm' or 'n'")
    vals = np.where(band_mask(N), np.abs(diff) * (m - n) ** 2, 0.0)
    return _masked_argmax(vals)


def scan_smooth(params, N, direction="m", threads=None):
    """Empirical constant in ``|R(m+2, n) - R(m, n)| <= C / |m - n|^2`` on the band."""
    p = as_params(params)
    require_riesz_admissible(p)
    block = riesz_kernel_block(p, N + 2, N + 2, threads=threads)
    levels = dyadic_levels(N)
    sups, args = zip(*(smooth_sup(block, k, direction) for k in levels))
    return _report(f"smooth_{direction}", p, levels, sups, args)


# -- heat kernel ----------------------------------------------------------------------


def scan_heat_bound(params, t_grid, N, threads=None):
    """Sup of ``|K_t(m, n)| |m - n|^2 t^(-1/2)`` over m != n < N and t in ``t_grid``."""
    p = as_params(params)
    ts = np.asarray(t_grid, dtype=float)
    if np.any((ts <= 0) | (ts > 1)):
        raise ValueError("t_grid must lie in (0, 1]")
    stack, _ = heat_kernel_stack(p, ts, N, N, threads=threads)
    m, n = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    dist2 = (m - n) ** 2.0
    scaled = np.abs(stack) * dist2[None] / np.sqrt(ts)[:, None, None]
    diag = float(np.max(np.abs(np.diagonal(stack, axis1=1, axis2=2))))
    levels = dyadic_levels(N)
    sups, args = [], []
    for k in levels:
        s, (ti, mi, ni) = _masked_argmax(scaled[:, :k, :k])
        sups.append(s)
        args.append((mi, ni, float(ts[ti])))
    return _report("heat", p, levels, sups, args, {"max_diagonal": diag})


# -- polynomial difference lemmas ------------------------------------------------


def default_x_grid(size=4001):
    theta = np.linspace(0.0, math.pi, size + 2)[1:-1]
    return np.sort(np.cos(theta))


def lemma_diff_majorant(params, n, x):
    """``(n+1)^(a-1/2)`` / ``(1-x)^(-a/2+1/4) (1+x)^(-b/2+1/4)`` / ``(n+1)^(b-1/2)``.

    Cut points match ``uniform_bound``: ``+-(1 - 1/(n+1)^2)``, middle closed.
    """
    a, b = params.alpha, params.beta
    eps = 1.0 / (n + 1.0) ** 2
    middle = (1.0 - x) ** (-a / 2 + 0.25) * (1.0 + x) ** (-b / 2 + 0.25)
    out = np.where(x > 1.0 - eps, (n + 1.0) ** (a - 0.5), middle)
    return np.where(x < -1.0 + eps, (n + 1.0) ** (b - 0.5), out)


def _ratio_by_n(params, N, derivative, x):
    p = as_params(params)
    if derivative:
        # (p_n)' = sqrt(n (n+a+b+1)) p_{n-1}^{(a+1,b+1)}
        shifted = eval_p_table(p.shifted(1.0, 1.0), N + 1, x)
        k = np.arange(N + 3, dtype=float)
        lam = np.sqrt(k * (k + p.alpha + p.beta + 1.0))
        vals = np.zeros((N + 3,) + x.shape)
        vals[1:] = lam[1:, None] * shifted
    else:
        vals = eval_p_table(p, N + 2, x)
    ratios = np.empty((N + 1, x.size))
    for n in range(N + 1):
        diff = np.abs(vals[n + 2] - vals[n])
        if derivative:
            ratios[n] = diff / ((n + 1.0) * uniform_bound(p, n, x))
        else:
            ratios[n] = diff / lemma_diff_majorant(p, n, x)
    return ratios


def scan_lemma_diff(params, N, derivative=False, x=None):
    """Sup over n <= N and an x-grid of the difference ``p_{n+2} - p_n`` over its majorant."""
    p = as_params(params)
    x = default_x_grid() if x is None else np.asarray(x, dtype=float)
    ratios = _ratio_by_n(p, N, derivative, x)
    levels = dyadic_levels(N)
    sups, args = [], []
    for k in levels:
        s, (ni, xi) = _masked_argmax(ratios[: k + 1])
        sups.append(s)
        args.append((ni, float(x[xi])))
    return _report("lemma_diff_der" if derivative else "lemma_diff", p, levels, sups, args)


def scan_uniform_bound(params, N, x=None):
    """Empirical constant C in ``|p_n(x)| <= C uniform_bound(n, x)`` for n <= N."""
    p = as_params(params)
    x = default_x_grid() if x is None else np.asarray(x, dtype=float)
    table = eval_p_table(p, N, x)
    ratios = np.vstack([np.abs(table[n]) / uniform_bound(p, n, x) for n in range(N + 1)])
    levels = dyadic_levels(N)
    sups, args = [], []
    for k in levels:
        s, (ni, xi) = _masked_argmax(ratios[: k + 1])
        sups.append(s)
        args.append((ni, float(x[xi])))
    return _report("unif_bound", p, levels, sups, args)


# -- divergence of the fractional integral at sigma >= 1/2 -----------------------------


def heat_time_integral(params, j, sigma, T_list, panel_order=24, threads=None):
    """``I(T) = int_1^T t^(sigma-1) K_t(j, j) dt`` for each T in ``T_list``.

    Dyadic Gauss-Legendre panels from 1; every cutoff is a panel edge.
    """
    p = as_params(params)
    T_list = sorted(float(T) for T in T_list)
    edges = [1.0]
    for T in T_list:
        while edges[-1] * 2 < T:
            edges.append(edges[-1] * 2)
        if T > edges[-1]:
            edges.append(T)
    ts, ws, owner = [], [], []
    for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        tn, wn = gauss_legendre_panel(lo, hi, panel_order)
        ts.append(tn)
        ws.append(wn * tn ** (sigma - 1.0))
        owner.append(np.full(tn.size, i))
    ts, ws, owner = np.concatenate(ts), np.concatenate(ws), np.concatenate(owner)
    stack, _ = heat_kernel_stack(p, ts, j + 1, j + 1, threads=threads)
    contrib = ws * stack[:, j, j]
    panel_sums = np.array([float(np.sum(contrib[owner == i])) for i in range(len(edges) - 1)])
    cumulative = np.concatenate([[0.0], np.cumsum(panel_sums)])
    return [float(cumulative[edges.index(T)]) for T in T_list]


def growth_exponents(T_list, values, decade=10.0):
    """Exponents of I(T) over the top decade of cutoffs.

    ``loglog``: least-squares slope of log I against log T.
    ``increment``: slope of log(dI/dlog T) against log T, estimated from
    consecutive cutoffs.  For ``I(T) = A + B T^r`` with r != 0 it equals r
    regardless of A; r = 0 signals logarithmic growth.
    """
    T = np.asarray(T_list, dtype=float)
    v = np.asarray(values, dtype=float)
    top = T >= T[-1] / decade
    loglog = float(np.polyfit(np.log(T[top]), np.log(v[top]), 1)[0])
    idx = np.flatnonzero(top)
    idx = np.concatenate([[idx[0] - 1], idx]) if idx[0] > 0 else idx
    Tm = np.sqrt(T[idx][1:] * T[idx][:-1])
    rate = np.abs(np.diff(v[idx])) / np.diff(np.log(T[idx]))
    increment = float(np.polyfit(np.log(Tm), np.log(rate), 1)[0]) if len(Tm) >= 2 else float("nan")
    return {"loglog": loglog, "increment": increment}


def _halving_change(T_list, values):
    """``|I(T) - I(T/2)| / I(T/2)`` at the largest T; previous cutoff if T/2 is absent."""
    half = T_list[-1] / 2
    k = T_list.index(half) if half in T_list else len(T_list) - 2
    return abs(values[-1] - values[k]) / abs(values[k])


def sigma_boundary_experiment(params, j_list, sigma_list, T_list, threads=None):
    """Growth of ``int_1^T t^(sigma-1) K_t(j, j) dt`` for sigma on both sides of 1/2."""
    p = as_params(params)
    T_list = sorted(float(T) for T in T_list)
    rows = []
    for j in np.atleast_1d(j_list):
        for sigma in sigma_list:
            values = heat_time_integral(p, int(j), float(sigma), T_list, threads=threads)
            fits = growth_exponents(T_list, values)
            rows.append(
                {
                    "j": int(j),
                    "sigma": float(sigma),
                    "T": T_list,
                    "I": values,
                    "loglog_exponent": fits["loglog"],
                    "growth_exponent": fits["increment"],
                    "relative_change": _halving_change(T_list, values),
                }
            )
    return {"params": {"alpha": p.alpha, "beta": p.beta}, "results": rows}


# -- weighted norms of finite sections -----------------------------------------------


def weighted_section(block, gamma):
    """Matrix of ``f -> Rf`` on l^2((n+1)^gamma) conjugated to plain l^2."""
    N = block.shape[0]
    d = (np.arange(N) + 1.0) ** (gamma / 2.0)
    return d[:, None] * block.T / d[None, :]


def power_iteration_norm(mat, iters=2000, tol=1e-13):
    """Largest singular value via power iteration on ``mat^T mat``; fixed start vector."""
    v = np.ones(mat.shape[1]) / math.sqrt(mat.shape[1])
    est = 0.0
    for _ in range(iters):
        u = (mat * v[None, :]).sum(axis=1)
        w = (mat * u[:, None]).sum(axis=0)
        norm_w = float(np.sqrt(np.sum(w * w)))
        if norm_w == 0.0:
            return 0.0
        new = math.sqrt(norm_w)
        v = w / norm_w
        if abs(new - est) <= tol * new:
            return new
        est = new
    return est


def _lp_norm(v, p, w):
    return float(np.sum(np.abs(v) ** p * w) ** (1.0 / p))


def _probe(block, p, gamma, trials, rng):
    N = block.shape[0]
    w = (np.arange(N) + 1.0) ** gamma
    best = 0.0
    for _ in range(trials):
        f = rng.standard_normal(N)
        f /= _lp_norm(f, p, w)
        out = np.zeros(N)
        for m in range(N):
            out += f[m] * block[m]
        best = max(best, _lp_norm(out, p, w))
    return best


def weighted_norm_experiment(params, p, gamma, N, trials=20, seed=0, threads=None):
    """Finite-section size of R on l^p((n+1)^gamma) at N and N/2.

    Random probing (fixed seed) at every p; at p = 2 the exact section norm
    is also estimated by power iteration.
    """
    if p <= 1:
        raise ValueError("weighted_norm_experiment needs p > 1")
    if N < 64:
        raise ValueError("weighted_norm_experiment needs N >= 64")
    prm = as_params(params)
    require_riesz_admissible(prm)
    block = riesz_kernel_block(prm, N, N, threads=threads)
    rng = np.random.default_rng(seed)
    probe_half = _probe(block[: N // 2, : N // 2], p, gamma, trials, rng)
    probe_full = _probe(block, p, gamma, trials, rng)
    report = {
        "params": {"alpha": prm.alpha, "beta": prm.beta},
        "p": float(p),
        "gamma": float(gamma),
        "N": int(N),
        "trials": int(trials),
        "seed": int(seed),
        "in_ap_range": in_ap_range(gamma, p),
        "probe_max_half": probe_half,
        "probe_max": probe_full,
        "probe_growth": probe_full / probe_half,
    }
    if p == 2:
        half = power_iteration_norm(weighted_section(block[: N // 2, : N // 2], gamma))
        full = power_iteration_norm(weighted_section(block, gamma))
        report.update({"norm_half": half, "norm": full, "growth_ratio": full / half})
    else:
        report["growth_ratio"] = report["probe_growth"]
    return report
