"""Two-qubit separability from thermodynamically extractable work."""

from .qcore import (
    BlochDirection,
    ClassicalMix,
    ConfigurationError,
    Dense,
    DemonworkError,
    InvalidStateError,
    OutOfModelError,
    PureSchmidt,
    StateSpec,
    TwoQubitState,
    Werner,
    build_state,
    hermitian_eigensystem,
    hermitian_eigenvalues,
    partial_transpose,
    projector,
    random_directions,
    von_neumann_entropy,
)
from .workext import (
    BlochForm,
    EntropyBundle,
    JointDistribution,
    binary_entropy,
    entropy_bundle,
    joint_distribution,
    shannon_entropy,
    xi,
)
from .criteria import (
    ChainReport,
    CircleMaxResult,
    GreatCircleFrame,
    SeparableDecomposition,
    WitnessVerdict,
    assemble_state,
    chained_inequality,
    chsh_horodecki,
    chsh_violated,
    maximize_great_circle,
    pcs_bound,
    ppt_separable,
    product_state,
    random_separable_decomposition,
    werner_xi_closed_form,
    witness_bloch_sphere,
    witness_great_circle,
    xi_bloch_sphere,
    xi_circle_average,
    xz_frame,
)
from .thermocycle import CycleReport, cycle_balance, second_law_scan
from .protocol_sim import ProtocolConfig, SimResult, convergence_curve, simulate

__version__ = "0.1.0"

__all__ = [
    "BlochDirection",
    "BlochForm",
    "ChainReport",
    "CircleMaxResult",
    "ClassicalMix",
    "ConfigurationError",
    "CycleReport",
    "Dense",
    "DemonworkError",
    "EntropyBundle",
    "GreatCircleFrame",
    "InvalidStateError",
    "JointDistribution",
    "OutOfModelError",
    "ProtocolConfig",
    "PureSchmidt",
    "SeparableDecomposition",
    "SimResult",
    "StateSpec",
    "TwoQubitState",
    "Werner",
    "WitnessVerdict",
    "assemble_state",
    "binary_entropy",
    "build_state",
    "chained_inequality",
    "chsh_horodecki",
    "chsh_violated",
    "convergence_curve",
    "cycle_balance",
    "entropy_bundle",
    "hermitian_eigensystem",
    "hermitian_eigenvalues",
    "joint_distribution",
    "maximize_great_circle",
    "partial_transpose",
    "pcs_bound",
    "ppt_separable",
    "product_state",
    "projector",
    "random_directions",
    "random_separable_decomposition",
    "second_law_scan",
    "shannon_entropy",
    "simulate",
    "von_neumann_entropy",
    "werner_xi_closed_form",
    "witness_bloch_sphere",
    "witness_great_circle",
    "xi",
    "xi_bloch_sphere",
    "xi_circle_average",
    "xz_frame",
]
