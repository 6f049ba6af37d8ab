"""Log-gamma via the Lanczos approximation (g=7, nine coefficients)."""

import math

_G = 7.0
_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma(x):
    """Return log|Gamma(x)| for real x that is not a non-positive integer."""
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise ValueError(f"log_gamma has a pole at {x}")
    if x < 0.5:
        # reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return math.log(math.pi / abs(math.sin(math.pi * x))) - log_gamma(1.0 - x)
    x -= 1.0
    acc = _COEFFS[0]
    for i in range(1, len(_COEFFS)):
        acc += _COEFFS[i] / (x + i)
    t = x + _G + 0.5
    return _HALF_LOG_2PI + (x + 0.5) * math.log(t) - t + math.log(acc)


def gamma(x):
    """Gamma function for positive arguments, through ``log_gamma``."""
    if x <= 0:
        raise ValueError("gamma is only provided for positive arguments")
    return math.exp(log_gamma(x))


def log_beta(a, b):
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)
