"""Finitely supported sequences and the banded operators J, J - I, delta, delta*."""

from dataclasses import dataclass, field
import json
import math

import numpy as np

from .errors import DomainError
from .jacobi import as_params, recurrence_table

OPERATORS = ("J", "calJ", "delta", "delta_star")


@dataclass(frozen=True)
class FiniteSequence:
    """Real sequence on {0, 1, ...} stored densely up to its last non-zero entry."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.values, dtype=float)).copy()
        if v.ndim != 1:
            raise DomainError("sequence values must be one-dimensional")
        if not np.all(np.isfinite(v)):
            raise DomainError("sequence entries must be finite")
        nz = np.flatnonzero(v)
        v = v[: nz[-1] + 1] if nz.size else v[:1] * 0.0
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def support_bound(self):
        nz = np.flatnonzero(self.values)
        return int(nz[-1]) if nz.size else 0

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n):
        return float(self.values[n]) if 0 <= n < len(self.values) else 0.0

    def dense(self, size):
        """Values on [0, size); entries beyond the support are zero."""
        out = np.zeros(size)
        k = min(size, len(self.values))
        out[:k] = self.values[:k]
        return out

    def norm(self, p=2.0, weight=None):
        v = np.abs(self.values)
        if weight is not None:
            w = np.asarray(weight, dtype=float)[: len(v)]
            return float(np.sum(v**p * w) ** (1.0 / p))
        return float(np.sum(v**p) ** (1.0 / p))

    def __add__(self, other):
        size = max(len(self), len(other))
        return FiniteSequence(self.dense(size) + other.dense(size))

    def __sub__(self, other):
        size = max(len(self), len(other))
        return FiniteSequence(self.dense(size) - other.dense(size))

    @classmethod
    def delta(cls, j):
        v = np.zeros(j + 1)
        v[j] = 1.0
        return cls(v)

    @classmethod
    def zero(cls):
        return cls(np.zeros(1))

    # JSON interchange: {"offset": k, "values": [...]} places values at k, k+1, ...
    @classmethod
    def from_dict(cls, data):
        offset = int(data.get("offset", 0))
        if offset < 0:
            raise DomainError("sequence offset must be >= 0")
        vals = [float(v) for v in data["values"]]
        return cls(np.concatenate([np.zeros(offset), vals]) if vals else np.zeros(1))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_dict(self):
        return {"offset": 0, "values": [float(v) for v in self.values]}

    def to_json(self):
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class DeltaCoeffs:
    d: float
    e: float


@dataclass(frozen=True)
class OperatorMatrix:
    which: str
    size: int
    matrix: np.ndarray = field(repr=False)


def _d_coeff(alpha, beta, n):
    s = alpha + beta
    if n == 0:
        return math.sqrt(2.0 * (alpha + 1.0) / (s + 2.0))
    return math.sqrt(
        2.0 * (n + s + 1.0) * (n + alpha + 1.0) / ((2.0 * n + s + 1.0) * (2.0 * n + s + 2.0))
    )


def _e_coeff(alpha, beta, n):
    s = alpha + beta
    return math.sqrt(2.0 * (n + beta + 1.0) * (n + 1.0) / ((2.0 * n + s + 2.0) * (2.0 * n + s + 3.0)))


def delta_coeffs(params, n):
    p = as_params(params)
    if n < 0:
        raise DomainError("index must be non-negative")
    return DeltaCoeffs(_d_coeff(p.alpha, p.beta, n), _e_coeff(p.alpha, p.beta, n))


def delta_table(params, size):
    p = as_params(params)
    d = np.array([_d_coeff(p.alpha, p.beta, n) for n in range(size)])
    e = np.array([_e_coeff(p.alpha, p.beta, n) for n in range(size)])
    return d, e


def _as_seq(f):
    return f if isinstance(f, FiniteSequence) else FiniteSequence(f)


def apply_J(params, f):
    """``Jf(n) = a_{n-1} f(n-1) + b_n f(n) + a_n f(n+1)``; ``Jf(0) = b_0 f(0) + a_0 f(1)``."""
    f = _as_seq(f)
    size = len(f) + 1
    a, b = recurrence_table(as_params(params), size)
    v = f.dense(size + 1)
    g = b * v[:size]
    g += a * v[1 : size + 1]
    g[1:] += a[:-1] * v[: size - 1]
    return FiniteSequence(g)


def apply_calJ(params, f):
    f = _as_seq(f)
    return apply_J(params, f) - f


def apply_delta(params, f):
    """``delta f(n) = d_n f(n) - e_n f(n+1)``."""
    f = _as_seq(f)
    size = len(f)
    d, e = delta_table(params, size)
    v = f.dense(size + 1)
    return FiniteSequence(d * v[:size] - e * v[1:])


def apply_delta_star(params, f):
    """``delta* f(n) = d_n f(n) - e_{n-1} f(n-1)``; ``delta* f(0) = d_0 f(0)``."""
    f = _as_seq(f)
    size = len(f) + 1
    d, e = delta_table(params, size)
    v = f.dense(size)
    g = d * v
    g[1:] -= e[:-1] * v[:-1]
    return FiniteSequence(g)


def truncate_operator(params, which, size):
    """The ``size x size`` section acting on indices [0, size); index ``size`` is dropped."""
    if which not in OPERATORS:
        raise DomainError(f"unknown operator {which!r}; expected one of {OPERATORS}")
    if size < 1:
        raise DomainError("size must be >= 1")
    p = as_params(params)
    if which in ("J", "calJ"):
        a, b = recurrence_table(p, size)
        mat = np.diag(np.asarray(b, dtype=float))
        off = np.asarray(a[: size - 1], dtype=float)
        mat += np.diag(off, 1) + np.diag(off, -1)
        if which == "calJ":
            mat -= np.eye(size)
    else:
        d, e = delta_table(p, size)
        mat = np.diag(d) - np.diag(e[: size - 1], 1)
        if which == "delta_star":
            mat = mat.T.copy()
    mat.flags.writeable = False
    return OperatorMatrix(which, size, mat)
