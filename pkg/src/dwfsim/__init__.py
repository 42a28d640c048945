"""Discrete-phase-space simulation of negative quantum states under
(non-)Markovian noise, with weak-measurement protection and the full suite of
two-qubit correlation measures."""

from .linalg import (
    dm,
    herm_eigen,
    matrix_sqrt_psd,
    partial_trace,
    tensor,
)
from .galois import build_field, build_striations, field_trace
from .phasespace import (
    DwfGrid,
    QuantumNet,
    canonical_net,
    depolarizing_robustness,
    dwf,
    mana,
    mub_tables,
    ns1_net,
    phase_point_operator,
    point_operator_census,
    reconstruct,
    wigner_negativity,
)
from .states import (
    bell,
    decompose_two_qubit,
    negative_qubit,
    negative_qutrit,
    ns_from_operator,
    ns_source_operator,
    two_qubit_negative,
)
from .channels import (
    AdParams,
    KrausSet,
    RtnParams,
    ad,
    ad_lambda,
    apply_channel,
    depolarizing,
    kraus_set,
    regime,
    rtn,
    rtn_kernel,
)
from .protect import (
    FilterStrengths,
    ProtectedOutcome,
    optimize_pq,
    protect_evolve,
    qmr_operator,
    success_surface,
    wm_operator,
)
from .measures import (
    CorrelationReport,
    OutOfDomainError,
    UqtVerdict,
    chsh_smax,
    coherence_l1,
    concurrence,
    correlation_matrix_from_dwf,
    discord,
    fidelity_deviation,
    maximal_fidelity,
    report,
    steering,
    teleportation_fidelity,
    uqt_check,
)

__version__ = "0.1.0"
