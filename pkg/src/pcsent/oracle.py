"""Brute-force cross-checks on dense two-mode vectors.

Nothing here uses :mod:`pcsent.measures` or :mod:`pcsent.iterate`.  States
are lifted to a dense ``(N+1) x (N+1)`` amplitude matrix ``psi[n_a, n_b]``,
the reduced density matrix is formed by an explicit partial trace, and the
partial transpose is read off element by element.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from pcsent.errors import DomainError
from pcsent.states import read_state

#: Largest per-mode cutoff the dense oracle accepts.
MAX_CUTOFF = 64
OFFDIAG_TOL = 1e-14


class OracleAssertionError(AssertionError):
    """The oracle found structure it was told could not exist."""


@dataclass(frozen=True)
class DenseTwoModeVector:
    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DomainError("entries must be a square (dim, dim) array")
        if entries.shape[0] - 1 > MAX_CUTOFF:
            raise DomainError(f"dense oracle limited to cutoff {MAX_CUTOFF}")
        norm = float(np.sum(np.abs(entries) ** 2))
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"vector is not normalized (norm**2 = {norm!r})")
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self):
        return self.entries.shape[0]

    @property
    def is_schmidt_diagonal(self):
        off = self.entries - np.diag(np.diag(self.entries))
        return not np.any(off)


def lift(state):
    """Embed a Schmidt-diagonal state as ``psi[n, n] = c_n``."""
    return DenseTwoModeVector(np.diag(np.asarray(state.amplitudes, dtype=complex)))


def brute_reduced_density(vec, keep="A"):
    """Reduced density matrix of mode ``keep`` by explicit partial trace.

    ``rho_A[n, n'] = sum_k psi[n, k] conj(psi[n', k])``.  For a
    Schmidt-diagonal input the off-diagonal entries must vanish; this is
    checked rather than assumed.
    """
    psi = vec.entries
    if keep == "A":
        rho = np.einsum("ik,jk->ij", psi, psi.conj())
    elif keep == "B":
        rho = np.einsum("ki,kj->ij", psi, psi.conj())
    else:
        raise DomainError(f"keep must be 'A' or 'B', got {keep!r}")
    if vec.is_schmidt_diagonal:
        off = rho - np.diag(np.diag(rho))
        worst = float(np.max(np.abs(off))) if off.size else 0.0
        if worst > OFFDIAG_TOL:
            raise OracleAssertionError(f"reduced state has off-diagonal entry {worst:.3e}")
    return rho


def brute_entropy(vec, keep="A"):
    """Entropy in ebits of the diagonal of the reduced density matrix.

    Only valid when the reduced state is diagonal, which is asserted.
    """
    rho = brute_reduced_density(vec, keep)
    off = rho - np.diag(np.diag(rho))
    if off.size and np.max(np.abs(off)) > OFFDIAG_TOL:
        raise OracleAssertionError("reduced state is not diagonal; diagonal entropy undefined")
    p = np.real(np.diag(rho))
    p = p[p > 0.0]
    return float(-np.sum(p * np.log2(p)))


def brute_pt_blocks(state):
    """All eigenvalues of the partial transpose of ``|psi><psi|`` on mode B.

    ``rho^{T_B}[(i,j), (k,l)] = psi[i,l] conj(psi[k,j])``.  For a
    Schmidt-diagonal vector it splits into 1x1 blocks on ``|n,n>`` and
    2x2 blocks on ``span{|n,m>, |m,n>}``; each block is diagonalized in
    closed form.
    """
    psi = lift(state).entries
    dim = psi.shape[0]

    def pt(i, j, k, l):
        return psi[i, l] * np.conj(psi[k, j])

    eigs = [float(np.real(pt(n, n, n, n))) for n in range(dim)]
    for n in range(dim):
        for m in range(n + 1, dim):
            a = np.real(pt(n, m, n, m))
            d = np.real(pt(m, n, m, n))
            b = pt(n, m, m, n)
            mid = 0.5 * (a + d)
            rad = np.sqrt((0.5 * (a - d)) ** 2 + abs(b) ** 2)
            eigs.extend([float(mid + rad), float(mid - rad)])
    return np.array(eigs)


def load_state_file(path, zeta=None):
    """Read a state written in the ``n,re,im`` export format."""
    return read_state(Path(path).read_text(), zeta=zeta)
