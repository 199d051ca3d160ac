"""Entanglement of pair coherent states and their superpositions.

Entropies are in ebits.  The main entry points::

    from pcsent import pair_coherent_state, entanglement_entropy
    entanglement_entropy(pair_coherent_state(1.0))
"""

from pcsent.errors import (
    DegenerateNormError,
    DomainError,
    PcsentError,
    SeriesCapError,
    TruncationError,
)
from pcsent.iterate import (
    SuperpositionTrace,
    TraceStep,
    converged_entropy,
    esn_closed_form,
    gain_decomposition,
    gamma_sn_sq,
    iterate_superposition,
)
from pcsent.measures import (
    EntanglementReport,
    entanglement_entropy,
    entanglement_gain,
    gamma_entropy_closed_form,
    gamma_entropy_direct,
    gamma_spectrum,
    negativity_closed_form,
    negativity_from_spectrum,
    pcs_entropy_closed_form,
    pt_spectrum,
)
from pcsent.special import bessel_i0, binary_entropy, log_factorial, xlog2x
from pcsent.states import (
    GammaParams,
    SchmidtDiagonalState,
    TruncationPolicy,
    choose_truncation,
    number_state_superposition,
    pair_coherent_state,
    schmidt_probabilities,
    truncated_partial_state,
    weight,
)

__version__ = "0.1.0"
