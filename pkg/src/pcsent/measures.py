"""Entanglement measures for pair coherent states and their superpositions.

Entropies are von Neumann entropies of the reduced state in ebits.  The
negativity of ``|zeta,0>`` is exposed in two conventions:

``"ordered"``
    sums the negative partial-transpose eigenvalue over ordered pairs
    ``n != m``, so every 2x2 block is counted twice.  Its closed form is
    ``exp(2|zeta|) / I0(2|zeta|) - 1``.
``"unordered"``
    the usual sum of absolute negative eigenvalues, one per block; exactly
    half the ordered value.
"""

import math
from dataclasses import dataclass

import numpy as np

from pcsent.errors import DomainError
from pcsent.special import LN2, log_bessel_i0, xlog2x
from pcsent.states import (
    DEFAULT_POLICY,
    choose_truncation,
    log_weights,
    schmidt_probabilities,
    tail_mass,
    weights,
)

CONVENTIONS = ("ordered", "unordered")


@dataclass(frozen=True)
class EntanglementReport:
    """Summary of the entanglement of one state.

    ``gain`` is ``None`` for states that are not a superposition.
    """

    entropy: float
    negativity: float
    gain: float = None
    truncation: int = 0
    tail_mass: float = 0.0


def _entropy(probs):
    return -sum(xlog2x(min(p, 1.0)) for p in np.asarray(probs, dtype=float).tolist())


def _xlog2x_any(x):
    # Unbounded variant for weights that may exceed one (norms, F2 argument).
    return x * math.log2(x) if x > 0.0 else 0.0


def _check_convention(convention):
    if convention not in CONVENTIONS:
        raise DomainError(f"unknown negativity convention {convention!r}; use one of {CONVENTIONS}")


def entanglement_entropy(state):
    """Entropy of entanglement ``-sum p_n log2 p_n`` of a Schmidt-diagonal state."""
    return _entropy(schmidt_probabilities(state))


def pcs_entropy_closed_form(zeta, policy=DEFAULT_POLICY):
    """Entropy of ``|zeta,0>`` summed directly from the weights ``f_n``.

    The weights are not renormalized after truncation; the discarded tail
    is below ``policy.eps``.
    """
    cutoff = choose_truncation(zeta, policy)
    log_f = log_weights(zeta, cutoff)
    f = np.exp(log_f)
    mask = f > 0.0
    return float(-np.sum(f[mask] * log_f[mask]) / LN2)


def negativity_closed_form(zeta, convention="ordered"):
    """Negativity ``|1 - exp(2|zeta|)/I0(2|zeta|)|`` of the pair coherent state.

    The ratio is formed in log space, so large ``|zeta|`` does not overflow.
    ``convention="unordered"`` returns half the value.
    """
    _check_convention(convention)
    x = 2.0 * abs(complex(zeta))
    value = abs(math.expm1(x - log_bessel_i0(x)))
    return value if convention == "ordered" else 0.5 * value


def pt_spectrum(zeta, cutoff, renormalize=True):
    """Analytic partial-transpose spectrum of ``|zeta,0>`` cut at ``cutoff``.

    Returns the ``(cutoff+1)**2`` eigenvalues: ``f_n`` for each ``n`` and a
    pair ``+-sqrt(f_n f_m)`` for each ``n < m``, in that order.  With
    ``renormalize=True`` the weights are those of the truncated, normalized
    state, so the spectrum has unit trace.  ``renormalize=False`` keeps the
    untruncated ``1/I0(2|zeta|)`` normalization.
    """
    cutoff = int(cutoff)
    if cutoff < 0:
        raise DomainError(f"cutoff must be >= 0, got {cutoff}")
    f = weights(zeta, cutoff)
    if renormalize:
        f = f / f.sum()
    root = np.sqrt(f)
    n, m = np.triu_indices(cutoff + 1, k=1)
    off = root[n] * root[m]
    pairs = np.empty(2 * off.size)
    pairs[0::2] = off
    pairs[1::2] = -off
    return np.concatenate([f, pairs])


def negativity_from_spectrum(spectrum, convention="ordered"):
    """Negativity from a partial-transpose spectrum.

    The unordered convention is the absolute sum of the negative
    eigenvalues; the ordered convention doubles it.
    """
    _check_convention(convention)
    spectrum = np.asarray(spectrum, dtype=float)
    value = float(-np.sum(spectrum[spectrum < 0.0]))
    return 2.0 * value if convention == "ordered" else value


def gamma_spectrum(params, policy=DEFAULT_POLICY):
    """Reduced-state eigenvalues of ``|Gamma_s>`` from their closed form.

    ``lambda_n = (cos^2(theta) f_n + delta_{nm} g2f_m) / norm^2`` with
    ``g2f_m = sin^2(theta) + sin(2 theta) sqrt(f_m)`` and
    ``norm^2 = 1 + sin(2 theta) sqrt(f_m)``.  The ``m``-th entry equals
    ``(cos(theta) sqrt(f_m) + sin(theta))^2 / norm^2`` and is never negative.
    """
    norm_sq = params.check()
    cutoff = max(choose_truncation(params.zeta, policy), params.m)
    f = weights(params.zeta, cutoff)
    c, s = math.cos(params.theta), math.sin(params.theta)
    lam = c * c * f
    lam[params.m] = (c * math.sqrt(f[params.m]) + s) ** 2
    return lam / norm_sq


def gamma_entropy_direct(params, policy=DEFAULT_POLICY):
    """Entropy ``-sum lambda_n log2 lambda_n`` of ``|Gamma_s>``."""
    return _entropy(gamma_spectrum(params, policy))


def gamma_entropy_closed_form(params, policy=DEFAULT_POLICY):
    """Entropy of ``|Gamma_s>`` rebuilt from the pair-coherent-state entropy.

    Evaluates

        norm^2 E = norm^2 log2 norm^2 - (1 - f_m) a log2 a + a E_pcs
                   + a F1 + F2,

    with ``a = cos^2(theta)``, ``F1 = f_m log2 f_m`` and
    ``F2 = -G log2 G`` for ``G = (cos(theta) sqrt(f_m) + sin(theta))^2``.
    """
    norm_sq = params.check()
    c, s = math.cos(params.theta), math.sin(params.theta)
    a = c * c
    f_m = params.f_m
    big_g = (c * math.sqrt(f_m) + s) ** 2
    e_pcs = pcs_entropy_closed_form(params.zeta, _policy_reaching(params, policy))
    f1 = xlog2x(f_m)
    f2 = -_xlog2x_any(big_g)
    total = _xlog2x_any(norm_sq) - (1.0 - f_m) * xlog2x(a) + a * e_pcs + a * f1 + f2
    return total / norm_sq


def _policy_reaching(params, policy):
    # Ensure the pcs sum covers index m, like gamma_spectrum does.
    cutoff = choose_truncation(params.zeta, policy)
    if cutoff >= params.m:
        return policy
    return type(policy).fixed(params.m, cap=max(policy.cap, params.m))


def entanglement_gain(params, policy=DEFAULT_POLICY):
    """Gain ``E(Gamma_s) - cos^2(theta) E(|zeta,0>)``; may be negative.

    The number state ``|m,m>`` is separable and contributes no term.
    """
    e_gamma = gamma_entropy_direct(params, policy)
    e_pcs = pcs_entropy_closed_form(params.zeta, _policy_reaching(params, policy))
    return e_gamma - math.cos(params.theta) ** 2 * e_pcs


def pcs_report(zeta, policy=DEFAULT_POLICY, convention="ordered"):
    """:class:`EntanglementReport` for the pair coherent state."""
    cutoff = choose_truncation(zeta, policy)
    return EntanglementReport(
        entropy=pcs_entropy_closed_form(zeta, policy),
        negativity=negativity_closed_form(zeta, convention),
        truncation=cutoff,
        tail_mass=tail_mass(zeta, cutoff),
    )


def gamma_report(params, policy=DEFAULT_POLICY):
    """:class:`EntanglementReport` for ``|Gamma_s>``.

    Negativity is the unordered sum over the spectrum of the truncated
    state, ``sum_{n<m} sqrt(lambda_n lambda_m)``.
    """
    lam = gamma_spectrum(params, policy)
    cutoff = lam.size - 1
    # sqrt(lambda_n) decays like sqrt of the mass tail, so square the tolerance.
    fine = policy
    if policy.mode == "tolerance":
        fine = type(policy).tolerance(max(policy.eps**2, 1e-300), cap=policy.cap)
    root = np.sqrt(gamma_spectrum(params, fine))
    negativity = 0.5 * (float(root.sum()) ** 2 - 1.0)
    return EntanglementReport(
        entropy=_entropy(lam),
        negativity=negativity,
        gain=entanglement_gain(params, policy),
        truncation=cutoff,
        tail_mass=math.cos(params.theta) ** 2 * tail_mass(params.zeta, cutoff) / params.norm_sq,
    )
