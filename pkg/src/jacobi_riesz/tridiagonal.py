"""Implicit-shift QL iteration for symmetric tridiagonal matrices.

Only the first row of the eigenvector matrix is accumulated, which is all
a Golub-Welsch construction needs.
"""

import math

import numpy as np

from .errors import ConvergenceError


def tridiagonal_eigen(diag, offdiag, first_row=True, max_sweeps_per_size=30):
    """Eigenvalues (ascending) and first eigenvector components.

    Parameters
    ----------
    diag : sequence of N floats
    offdiag : sequence of N-1 floats (sub/super diagonal)
    first_row : bool
        Accumulate the first component of every eigenvector.

    Returns
    -------
    (eigenvalues, first_components) ; the latter is None if not requested.
    """
    d = [float(v) for v in diag]
    size = len(d)
    if len(offdiag) != max(size - 1, 0):
        raise ValueError("offdiag must have length len(diag) - 1")
    e = [float(v) for v in offdiag] + [0.0]
    z = [0.0] * size
    if size:
        z[0] = 1.0
    budget = max_sweeps_per_size * max(size, 1)
    sweeps = 0

    for l in range(size):
        while True:
            m = l
            while m < size - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= 2.2e-16 * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > budget:
                raise ConvergenceError(
                    f"QL iteration exceeded {budget} sweeps", previous=None, last=d[l]
                )
            # Wilkinson-type shift
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if first_row:
                    f = z[i + 1]
                    z[i + 1] = s * z[i] + c * f
                    z[i] = c * z[i] - s * f
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    vals = np.array(d)
    order = np.argsort(vals, kind="stable")
    vecs = np.array(z)[order] if first_row else None
    return vals[order], vecs
