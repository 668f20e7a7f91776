"""Truncated Fock-space simulator for heralded non-Gaussian state generation
with an optical parametric amplifier."""

from .fock import (
    Cutoff,
    CutoffCapExceeded,
    DensityMatrix,
    DimensionMismatch,
    FockOperator,
    SimulationError,
    StateVector,
    TruncationWarning,
    annihilator,
    auto_cutoff,
    compact,
    creator,
    displacement_operator,
    inner_product,
    matrix_exponential,
    number_operator,
    partial_trace_idler,
    tensor,
)
from .states import (
    CatSpec,
    SqueezeParam,
    cat,
    coherent,
    fock_state,
    fock_superposition,
    squeezed_cat_target,
    squeezed_fock,
    squeezed_vacuum,
    squeeze_operator,
    tmsv,
    vacuum,
)
from .herald import (
    GainParam,
    HeraldFailed,
    HeraldOutcome,
    Su11Coefficients,
    SvOutputForm,
    cat_output_closed_form,
    coherent_output_closed_form,
    critical_gain,
    herald_single_photon,
    photon_subtract,
    su11_disentangle,
    sv_output_closed_form,
    two_mode_squeezer_apply,
    two_mode_squeezer_factored_apply,
)
from .fidelity import (
    FitResult,
    fidelity,
    fidelity_closed_form,
    fit_named_targets,
    optimize_cat_fit,
)
from .wigner import (
    PhaseSpaceWindow,
    WignerGrid,
    WindowNotConverged,
    auto_window,
    negativity_of_state,
    negativity_sweep,
    negativity_volume,
    sweep_window,
    wigner_of_state,
)
from .loss import LossSchedule, evolve_loss, negativity_decay_curve

__version__ = "0.1.0"
