"""Schmidt-diagonal two-mode states on the ladder ``|n,n>``.

All states here have support only on ``|n,n>``, so a state is a vector of
Schmidt amplitudes ``c_n``.  The pair coherent state (degeneracy ``q = 0``)
has ``c_n`` proportional to ``zeta**n / n!`` and squared amplitudes

    f_n = |zeta|**(2n) / (I0(2|zeta|) (n!)**2),

which are evaluated in log space so that large ``|zeta|`` and ``n`` do not
overflow.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from pcsent.errors import DegenerateNormError, DomainError, TruncationError
from pcsent.special import log_bessel_i0, log_factorial, log_factorials

#: Smallest admissible squared norm of the number-state superposition.
NORM_FLOOR = 1e-12
#: Default truncation cap, matching the series term cap.
DEFAULT_CAP = 500


@dataclass(frozen=True)
class TruncationPolicy:
    """Rule that maps ``zeta`` to a finite Fock cutoff ``N``.

    Use :meth:`fixed` for a fixed cutoff or :meth:`tolerance` to choose the
    smallest ``N`` whose discarded tail mass is below ``eps``.
    """

    mode: str = "tolerance"
    cutoff: int = 0
    eps: float = 1e-16
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.mode not in ("fixed", "tolerance"):
            raise DomainError(f"unknown truncation mode {self.mode!r}")
        if self.cap < 0:
            raise DomainError("truncation cap must be non-negative")
        if self.mode == "fixed" and not 0 <= self.cutoff <= self.cap:
            raise DomainError(f"fixed cutoff {self.cutoff} outside [0, {self.cap}]")
        if self.mode == "tolerance" and not self.eps > 0:
            raise DomainError(f"tail tolerance must be positive, got {self.eps}")

    @classmethod
    def fixed(cls, cutoff, cap=DEFAULT_CAP):
        return cls(mode="fixed", cutoff=int(cutoff), cap=max(cap, int(cutoff)))

    @classmethod
    def tolerance(cls, eps=1e-16, cap=DEFAULT_CAP):
        return cls(mode="tolerance", eps=float(eps), cap=cap)


DEFAULT_POLICY = TruncationPolicy.tolerance()


@dataclass(frozen=True)
class SchmidtDiagonalState:
    """Normalized pure state ``sum_n c_n |n,n>`` for ``n = 0..truncation``.

    ``tail_mass`` records the probability discarded by truncation before
    renormalization; it is zero for states that are exact as stored.
    """

    amplitudes: np.ndarray
    zeta: complex = None
    truncation: int = field(default=-1)
    tail_mass: float = 0.0

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).copy()
        if amps.ndim != 1 or amps.size == 0:
            raise DomainError("amplitudes must be a non-empty 1-d sequence")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"state is not normalized (norm**2 = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        if self.truncation < 0:
            object.__setattr__(self, "truncation", amps.size - 1)
        elif self.truncation != amps.size - 1:
            raise DomainError("truncation must equal len(amplitudes) - 1")

    @property
    def dim(self):
        return self.amplitudes.size


@dataclass(frozen=True)
class GammaParams:
    """Superposition ``cos(theta) |zeta,0> + sin(theta) e^{i m arg zeta} |m,m>``.

    This is the pair-coherent-plus-number-state superposition written with
    ``alpha = cos(theta)`` and ``beta = sin(theta) / sqrt(f_m)``; the number
    state carries the same phase as the ``m``-th term of ``|zeta,0>``.
    """

    zeta: complex
    m: int = 0
    theta: float = math.pi / 4

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 0:
            raise DomainError(f"number-state index must be a non-negative integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "zeta", complex(self.zeta))
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def alpha(self):
        return math.cos(self.theta)

    @property
    def f_m(self):
        return weight(self.zeta, self.m)

    @property
    def norm_sq(self):
        """Squared norm ``1 + sin(2 theta) sqrt(f_m)`` of the superposition."""
        return 1.0 + 2.0 * math.cos(self.theta) * math.sin(self.theta) * math.sqrt(self.f_m)

    def check(self):
        norm_sq = self.norm_sq
        if norm_sq <= NORM_FLOOR:
            raise DegenerateNormError(
                f"superposition norm**2 = {norm_sq!r} vanishes for {self!r}"
            )
        return norm_sq


def log_weights(zeta, n_max):
    """``ln f_n`` for ``n = 0..n_max``; ``-inf`` where ``f_n = 0``."""
    r = abs(complex(zeta))
    n = np.arange(n_max + 1)
    if r == 0.0:
        out = np.full(n_max + 1, -np.inf)
        out[0] = 0.0
        return out
    return 2.0 * n * math.log(r) - log_bessel_i0(2.0 * r) - 2.0 * log_factorials(n_max)


def weights(zeta, n_max):
    """Schmidt probabilities ``f_n`` of ``|zeta,0>`` for ``n = 0..n_max``."""
    return np.exp(log_weights(zeta, n_max))


def weight(zeta, n):
    """Probability ``f_n = |zeta|^(2n) / (I0(2|zeta|) (n!)^2)`` of ``|n,n>``."""
    n = int(n)
    if n < 0:
        raise DomainError(f"weight requires n >= 0, got {n}")
    r = abs(complex(zeta))
    if r == 0.0:
        return 1.0 if n == 0 else 0.0
    return math.exp(2.0 * n * math.log(r) - log_bessel_i0(2.0 * r) - 2.0 * log_factorial(n))


def tail_mass(zeta, cutoff):
    """Exact probability ``sum_{n > cutoff} f_n`` discarded by a cutoff."""
    r = abs(complex(zeta))
    if r == 0.0:
        return 0.0
    log_norm = log_bessel_i0(2.0 * r)
    total = 0.0
    n = cutoff + 1
    while True:
        term = math.exp(2.0 * n * math.log(r) - log_norm - 2.0 * log_factorial(n))
        total += term
        if n > r and term <= 1e-17 * total:
            return total
        if total == 0.0 and n > r:
            return 0.0
        n += 1


def choose_truncation(zeta, policy=DEFAULT_POLICY):
    """Smallest cutoff ``N`` whose discarded tail mass is below ``policy.eps``.

    The tail past ``N`` is bounded by a geometric series using the ratio
    ``f_{n+1} / f_n = |zeta|^2 / (n+1)^2``, which decreases with ``n``.
    A fixed policy returns its cutoff unchanged.
    """
    if policy.mode == "fixed":
        return policy.cutoff
    r = abs(complex(zeta))
    if r == 0.0:
        return 0
    r2 = r * r
    log_eps = math.log(policy.eps)
    log_norm = log_bessel_i0(2.0 * r)
    for n in range(policy.cap + 1):
        ratio = r2 / (n + 2) ** 2
        if ratio >= 1.0:
            continue
        log_next = 2.0 * (n + 1) * math.log(r) - log_norm - 2.0 * log_factorial(n + 1)
        if log_next - math.log1p(-ratio) < log_eps:
            return n
    raise TruncationError(
        f"tail below {policy.eps} for |zeta| = {r} needs a cutoff above {policy.cap}"
    )


def _ladder_state(zeta, cutoff, tail=0.0):
    zeta = complex(zeta)
    log_mag = 0.5 * log_weights(zeta, cutoff)
    log_mag = log_mag - _log_sum_exp(2.0 * log_mag) / 2.0
    phases = np.exp(1j * np.arange(cutoff + 1) * np.angle(zeta))
    amps = np.exp(log_mag) * phases
    return SchmidtDiagonalState(amps, zeta=zeta, truncation=cutoff, tail_mass=tail)


def pair_coherent_state(zeta, policy=DEFAULT_POLICY):
    """Pair coherent state ``|zeta,0>`` truncated by ``policy`` and renormalized."""
    cutoff = choose_truncation(zeta, policy)
    return _ladder_state(zeta, cutoff, tail=tail_mass(zeta, cutoff))


def truncated_partial_state(zeta, n):
    """Normalized prefix state ``|S_n>`` built from the first ``n+1`` terms.

    ``|S_n>`` is an exact state in its own right, so its tail mass is zero.
    """
    n = int(n)
    if n < 0:
        raise DomainError(f"partial state index must be >= 0, got {n}")
    return _ladder_state(zeta, n)


def number_state_superposition(params, policy=DEFAULT_POLICY):
    """Normalized ``|Gamma_s>`` for the given :class:`GammaParams`.

    Amplitudes are ``cos(theta) sqrt(f_n) e^{i n phi}`` plus
    ``sin(theta) e^{i m phi}`` on ``n = m``, truncated at
    ``max(N, m)`` and renormalized.
    """
    params.check()
    cutoff = max(choose_truncation(params.zeta, policy), params.m)
    phases = np.exp(1j * np.arange(cutoff + 1) * np.angle(params.zeta))
    amps = math.cos(params.theta) * np.sqrt(weights(params.zeta, cutoff))
    amps[params.m] += math.sin(params.theta)
    amps = amps * phases
    norm_sq = float(np.sum(np.abs(amps) ** 2))
    # Discarded mass relative to the untruncated norm.
    tail = math.cos(params.theta) ** 2 * tail_mass(params.zeta, cutoff) / params.norm_sq
    return SchmidtDiagonalState(
        amps / math.sqrt(norm_sq), zeta=params.zeta, truncation=cutoff, tail_mass=tail
    )


def schmidt_probabilities(state):
    """Reduced-state eigenvalues ``|c_n|^2`` of a Schmidt-diagonal state."""
    return np.abs(state.amplitudes) ** 2


def export_state(state):
    """Serialize a state as lines ``n,re(c_n),im(c_n)``."""
    return "".join(
        f"{n},{c.real!r},{c.imag!r}\n" for n, c in enumerate(state.amplitudes.tolist())
    )


def read_state(text, zeta=None):
    """Parse the ``n,re,im`` format written by :func:`export_state`."""
    rows = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise DomainError(f"line {lineno}: expected 'n,re,im', got {line!r}")
        n = int(parts[0])
        if n < 0 or n in rows:
            raise DomainError(f"line {lineno}: bad or repeated index {n}")
        rows[n] = complex(float(parts[1]), float(parts[2]))
    if not rows:
        raise DomainError("no amplitudes found")
    amps = np.zeros(max(rows) + 1, dtype=complex)
    for n, c in rows.items():
        amps[n] = c
    return SchmidtDiagonalState(amps, zeta=zeta)


def _log_sum_exp(values):
    top = np.max(values)
    return float(top + np.log(np.sum(np.exp(values - top))))
