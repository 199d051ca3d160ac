"""Special functions and base-2 entropy kernels.

Every entropy in the package is measured in ebits (base-2 logarithms).
Natural logarithms appear only internally and are converted explicitly.
"""

import math

import numpy as np

from pcsent.errors import DomainError, SeriesCapError

LN2 = math.log(2.0)

#: Relative size of the next series term below which summation stops.
SERIES_RTOL = 1e-16
#: Hard cap on the number of series terms; hitting it is an error.
SERIES_CAP = 500

_DOMAIN_TOL = 1e-12

# ln(k!) for k = 0..20 from exact integer factorials, extended on demand
# by cumulative summation of ln(k).
_LOG_FACT = [math.log(math.factorial(k)) for k in range(21)]


def xlog2x(x):
    """Return ``x * log2(x)`` with the continuous extension ``0 log 0 = 0``.

    Values up to ``1 + 1e-12`` are accepted to absorb rounding in
    probabilities that should be at most one.
    """
    x = float(x)
    if not (0.0 <= x <= 1.0 + _DOMAIN_TOL):
        raise DomainError(f"xlog2x requires 0 <= x <= 1, got {x!r}")
    if x == 0.0:
        return 0.0
    return x * math.log2(x)


def binary_entropy(x):
    """Binary entropy ``h(x) = -x log2 x - (1-x) log2 (1-x)`` in ebits.

    Parameters
    ----------
    x : float
        Probability in ``[0, 1]``.

    Returns
    -------
    float
        Entropy in ``[0, 1]``; the maximum ``1`` is reached at ``x = 1/2``.
    """
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"binary_entropy requires 0 <= x <= 1, got {x!r}")
    return -(xlog2x(x) + xlog2x(1.0 - x))


def log_factorial(n):
    """Natural logarithm of ``n!``."""
    n = int(n)
    if n < 0:
        raise DomainError(f"log_factorial requires n >= 0, got {n}")
    while len(_LOG_FACT) <= n:
        _LOG_FACT.append(_LOG_FACT[-1] + math.log(len(_LOG_FACT)))
    return _LOG_FACT[n]


def log_factorials(n_max):
    """Array of ``ln(k!)`` for ``k = 0..n_max``."""
    log_factorial(n_max)
    return np.array(_LOG_FACT[: n_max + 1], dtype=float)


def bessel_i0(x):
    """Modified Bessel function of the first kind of order zero.

    Sums ``sum_k (x/2)**(2k) / (k!)**2`` until the next term falls below
    ``SERIES_RTOL`` relative to the partial sum.

    Raises
    ------
    DomainError
        If ``x`` is negative or not finite.
    OverflowError
        If the result is not representable as a float.
    SeriesCapError
        If more than ``SERIES_CAP`` terms would be needed.
    """
    x = _check_bessel_arg(x)
    q = 0.25 * x * x
    term = 1.0
    total = 1.0
    for k in range(1, SERIES_CAP + 1):
        term *= q / (k * k)
        if math.isinf(term):
            raise OverflowError(f"bessel_i0({x!r}) overflows")
        total += term
        # Terms decrease once k exceeds x/2; stop when they no longer matter.
        if k > 0.5 * x and term <= SERIES_RTOL * total:
            return total
    raise SeriesCapError(f"bessel_i0({x!r}) needs more than {SERIES_CAP} terms")


def log_bessel_i0(x):
    """Natural logarithm of ``I0(x)``, evaluated without overflow.

    Uses the same power series as :func:`bessel_i0` with each term kept in
    log space and accumulated by log-sum-exp.
    """
    x = _check_bessel_arg(x)
    if x == 0.0:
        return 0.0
    log_q = 2.0 * math.log(0.5 * x)
    log_total = 0.0
    log_term = 0.0
    log_rtol = math.log(SERIES_RTOL)
    for k in range(1, SERIES_CAP + 1):
        log_term += log_q - 2.0 * math.log(k)
        log_total = np.logaddexp(log_total, log_term)
        if k > 0.5 * x and log_term - log_total <= log_rtol:
            return float(log_total)
    raise SeriesCapError(f"log_bessel_i0({x!r}) needs more than {SERIES_CAP} terms")


def _check_bessel_arg(x):
    x = float(x)
    if not math.isfinite(x) or x < 0.0:
        raise DomainError(f"bessel_i0 requires finite x >= 0, got {x!r}")
    return x
