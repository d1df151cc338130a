"""Work statistics, weak-measurement quasi-probabilities and contextuality
witnesses for driven finite-dimensional quantum systems."""

from .core import (
    DensityMatrix,
    HamiltonianSpec,
    ThermalConfig,
    UnitarySpec,
    commutator_norm,
    dephase,
    eigh,
    evolve,
    gibbs_state,
    partition_function,
    pure_state,
    time_ordered_unitary,
    validate_density,
)
from .work import (
    ProtocolSpec,
    WorkDistribution,
    WorkPoint,
    average_work,
    finite_s_distribution,
    merge_by_work,
    tpm_distribution,
    tpm_povm,
    weak_distribution,
    work_support,
)
from .pointer import (
    PointerConfig,
    closed_form_pointer_mean,
    gaussian_amplitude,
    kraus_nx,
    postselected_pointer_mean,
)
from .fluctuation import (
    FtReport,
    allahverdyan_check,
    average_work_check,
    delta_f,
    exp_beta_work,
    jarzynski_check,
    tail_bound_check,
)
from .contextuality import (
    ContextualityReport,
    OntologicalModel,
    build_tpm_model,
    find_negative_state,
    lemma1_report,
    negativity,
    s_matrix,
    s_threshold,
    verify_model,
    weak_value,
)

__version__ = "0.1.0"

__all__ = [
    "DensityMatrix",
    "HamiltonianSpec",
    "ThermalConfig",
    "UnitarySpec",
    "commutator_norm",
    "dephase",
    "eigh",
    "evolve",
    "gibbs_state",
    "partition_function",
    "pure_state",
    "time_ordered_unitary",
    "validate_density",
    "ProtocolSpec",
    "WorkDistribution",
    "WorkPoint",
    "average_work",
    "finite_s_distribution",
    "merge_by_work",
    "tpm_distribution",
    "tpm_povm",
    "weak_distribution",
    "work_support",
    "PointerConfig",
    "closed_form_pointer_mean",
    "gaussian_amplitude",
    "kraus_nx",
    "postselected_pointer_mean",
    "FtReport",
    "allahverdyan_check",
    "average_work_check",
    "delta_f",
    "exp_beta_work",
    "jarzynski_check",
    "tail_bound_check",
    "ContextualityReport",
    "OntologicalModel",
    "build_tpm_model",
    "find_negative_state",
    "lemma1_report",
    "negativity",
    "s_matrix",
    "s_threshold",
    "verify_model",
    "weak_value",
]
