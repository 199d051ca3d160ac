"""Pair-coherent-state entanglement built up one number state at a time.

``|S_n>`` is the normalized prefix ``sum_{k<=n} zeta^k/k! |k,k>``.  It is a
superposition of ``|S_{n-1}>`` and ``|n,n>``, which are biorthogonal, so

    E(S_n) = r_n E(S_{n-1}) + h(r_n),      r_n = t_n / t_{n-1},

where ``t_n = 1 / sum_{k<=n} |zeta|^(2k)/(k!)^2`` is the squared
normalization (``N0^2 gamma_Sn^2``) and ``h`` the binary entropy.  The
recursion starts from the separable ``|S_0> = |0,0>``.
"""

import math
from dataclasses import dataclass

import numpy as np

from pcsent.errors import DomainError, SeriesCapError
from pcsent.special import LN2, SERIES_CAP, binary_entropy, log_factorials


@dataclass(frozen=True)
class TraceStep:
    """One superposition step: ``|S_n>`` from ``|S_{n-1}>`` and ``|n,n>``."""

    n: int
    gamma_sq: float
    ratio_sq: float
    gain: float
    entropy: float


@dataclass(frozen=True)
class SuperpositionTrace:
    zeta: complex
    steps: tuple

    @property
    def entropy(self):
        return self.steps[-1].entropy if self.steps else 0.0


def _log_terms(zeta, n):
    """``ln(|zeta|^(2k) / (k!)^2)`` for ``k = 0..n``; ``-inf`` for zero terms."""
    r = abs(complex(zeta))
    k = np.arange(n + 1)
    if r == 0.0:
        out = np.full(n + 1, -np.inf)
        out[0] = 0.0
        return out
    return 2.0 * k * math.log(r) - 2.0 * log_factorials(n)


def _log_partial_sums(log_terms):
    return np.logaddexp.accumulate(log_terms)


def gamma_sn_sq(zeta, n):
    """Squared normalization ``N0^2 gamma_Sn^2 = 1 / sum_{k<=n} |zeta|^(2k)/(k!)^2``."""
    n = int(n)
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    return math.exp(-_log_partial_sums(_log_terms(zeta, n))[-1])


def _steps(zeta, n_max):
    log_t = _log_terms(zeta, n_max)
    log_s = _log_partial_sums(log_t)
    entropy = 0.0
    for n in range(1, n_max + 1):
        # 1 - r_n = term_n / sum_n, kept separately for precision near r_n = 1.
        mix = math.exp(log_t[n] - log_s[n])
        ratio_sq = math.exp(log_s[n - 1] - log_s[n])
        gain = binary_entropy(min(mix, 1.0))
        entropy = ratio_sq * entropy + gain
        yield TraceStep(n, math.exp(-log_s[n]), ratio_sq, gain, entropy)


def iterate_superposition(zeta, n_max):
    """Run the superposition recursion for steps ``n = 1..n_max``."""
    n_max = int(n_max)
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    return SuperpositionTrace(complex(zeta), tuple(_steps(zeta, n_max)))


def esn_closed_form(zeta, n):
    """Entropy of ``|S_n>`` computed directly from its Schmidt weights.

    The weights are ``p_k = gamma_sq(n) |zeta|^(2k) / (k!)^2`` for
    ``k = 0..n``; they sum to one by construction.
    """
    n = int(n)
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    log_t = _log_terms(zeta, n)
    log_p = log_t - _log_partial_sums(log_t)[-1]
    p = np.exp(log_p)
    mask = p > 0.0
    return float(-np.sum(p[mask] * log_p[mask]) / LN2)


def gain_decomposition(trace):
    """Re-sum ``E(S_n)`` as gains weighted by ``gamma_sq(n) / gamma_sq(k)``.

    Every earlier gain is diluted by each later superposition, so the
    weights are required; the plain sum of gains overshoots.
    """
    if not trace.steps:
        raise DomainError("empty trace")
    final = trace.steps[-1].gamma_sq
    return sum(final / step.gamma_sq * step.gain for step in trace.steps)


def converged_entropy(zeta, tol, cap=SERIES_CAP):
    """Iterate until a step's gain and entropy change both fall below ``tol``.

    Returns
    -------
    tuple of (float, int)
        The entropy and the step ``n`` at which iteration stopped.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    previous = 0.0
    for step in _steps(zeta, cap):
        if step.gain < tol and abs(step.entropy - previous) < tol:
            return step.entropy, step.n
        previous = step.entropy
    raise SeriesCapError(f"no convergence to {tol} within {cap} steps for zeta = {zeta}")


def trace_to_csv(trace):
    """CSV text with columns ``n,gamma_sq,ratio_sq,gain_ebits,entropy_ebits``."""
    lines = ["n,gamma_sq,ratio_sq,gain_ebits,entropy_ebits"]
    for s in trace.steps:
        lines.append(f"{s.n},{s.gamma_sq:.17g},{s.ratio_sq:.17g},{s.gain:.17g},{s.entropy:.17g}")
    return "\n".join(lines) + "\n"
