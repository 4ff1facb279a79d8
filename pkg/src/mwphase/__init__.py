"""Unitary matter-wave phase-difference operators for bosons in a double well."""

__version__ = "0.1.0"

from .fock import (  # noqa: E402
    DomainError,
    FockBasis,
    Operator,
    StateVector,
    commutator,
    expectation,
    fock_state,
    hop_op,
    identity_op,
    imbalance_op,
    make_basis,
    number_op,
    variance,
)
from .phase import (  # noqa: E402
    PhaseOperatorSet,
    PhaseRecord,
    bp_cos,
    bp_sin,
    cn_cos,
    cn_sin,
    commutator_residuals,
    edge_cos,
    edge_sin,
    exp_phase,
    phase_observables,
    phase_operators,
    phase_spectrum,
    uncertainty_check,
)
from .dynamics import (  # noqa: E402
    WellParams,
    evolve,
    half_transfer_time,
    hamiltonian,
    trajectory,
)
from .experiment import (  # noqa: E402
    FringeParams,
    SweepConfig,
    SweepResult,
    classical_reference,
    export,
    fringe_profile,
    mandel_sweep,
)
