"""Discrete Muckenhoupt A_p weights on the non-negative integers."""

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class WeightSeq:
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).copy()
        if v.ndim != 1 or v.size == 0:
            raise DomainError("a weight is a non-empty one-dimensional sequence")
        if not np.all(np.isfinite(v)) or np.any(v <= 0):
            raise DomainError("weights must be finite and strictly positive")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class ApReport:
    p: float
    N: int
    constant: float
    argmax: tuple

    def to_dict(self):
        return {"p": self.p, "N": self.N, "constant": self.constant, "argmax": list(self.argmax)}


def power_weight(gamma, N):
    """``w(n) = (n+1)^gamma`` on [0, N); in A_p exactly when -1 < gamma < p-1."""
    return WeightSeq((np.arange(N) + 1.0) ** gamma)


def in_ap_range(gamma, p):
    return -1.0 < gamma < p - 1.0 if p > 1 else -1.0 < gamma <= 0.0


def _values(w, N):
    v = w.values if isinstance(w, WeightSeq) else WeightSeq(w).values
    if N is None:
        N = len(v)
    if N > len(v):
        raise DomainError(f"weight has {len(v)} entries, need {N}")
    return v[:N]


def ap_constant(w, p, N=None):
    """Supremum of the A_p averages over all integer intervals [n, m] in [0, N).

    p > 1: ``(mean of w) * (mean of w^(-1/(p-1)))^(p-1)``.
    p = 1: ``(mean of w) * max w^(-1)``.
    Prefix sums give each interval in O(1); p = 1 uses running maxima.
    """
    if p < 1:
        raise DomainError("A_p needs p >= 1")
    v = _values(w, N)
    N = len(v)
    s1 = np.concatenate([[0.0], np.cumsum(v)])
    if p > 1:
        s2 = np.concatenate([[0.0], np.cumsum(v ** (-1.0 / (p - 1.0)))])
    else:
        inv = 1.0 / v
    best, arg = -np.inf, (0, 0)
    for n in range(N):
        length = np.arange(1, N - n + 1, dtype=float)
        mean_w = (s1[n + 1 :] - s1[n]) / length
        if p > 1:
            dual = ((s2[n + 1 :] - s2[n]) / length) ** (p - 1.0)
        else:
            dual = np.maximum.accumulate(inv[n:])
        vals = mean_w * dual
        k = int(np.argmax(vals))
        if vals[k] > best:
            best, arg = float(vals[k]), (n, n + k)
    return ApReport(float(p), N, best, arg)


def weight_comparability(w, N=None):
    """``max_n max(w(n)/w(n+1), w(n+1)/w(n))`` over consecutive pairs in [0, N)."""
    v = _values(w, N)
    if len(v) < 2:
        return 1.0
    r = v[1:] / v[:-1]
    return float(np.max(np.maximum(r, 1.0 / r)))
