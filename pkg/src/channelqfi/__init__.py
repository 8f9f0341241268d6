"""Precision bounds for estimating damping and temperature of Gaussian dissipative channels."""

from .errors import DomainError, InvalidStateError, SingularDError, SingularParameterError
from .gaussian import (
    ChannelParams,
    GaussianState,
    ProbeClass,
    StateDiagnostics,
    apply_channel,
    make_probe,
    mean_photon_number,
    validate_state,
)
from .yields import (
    Param,
    RegimeCoefficients,
    WeightMatrix,
    YieldVariables,
    dominance_report,
    high_energy_expansion,
    improvement_thresholds,
    low_energy_expansion,
    qfi,
    qfi_zero_temperature,
    weighted_cr_bound,
)
from .sld import (
    AlphaPair,
    QuadraticObservable,
    alpha_matrices,
    build_sld,
    commutator_expectation,
    qfi_matrix,
    wick_expectation,
)
from .fock import (
    FockDensityMatrix,
    PureFockState,
    ScatterRecord,
    entanglement_entropy,
    loss_kraus,
    max_entangled,
    propagate,
    qfi_gamma_fock,
    sample_haar_state,
    scatter_experiment,
)

__version__ = "0.1.0"
