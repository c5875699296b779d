"""Quench dynamics and entanglement generation in engineered XX spin chains."""

__version__ = "0.1.0"

from .chain import (  # noqa: E402
    CouplingProfile,
    HoppingMatrix,
    Model,
    NoiseConfig,
    NoiseVariant,
    ProfileKind,
    SpinHamiltonianSpec,
    build_profile,
    hopping_matrix,
    ion_longrange_matrix,
    nmr_perturbed_matrix,
    spin_hamiltonian,
)
from .entanglement import (  # noqa: E402
    TwoSpinXState,
    bell_generation_fidelity,
    end_pair_state,
    end_to_end_F_closed_form,
    fully_entangled_fraction,
    fully_entangled_fraction_matrix,
    nested_bell_target,
    pseudo_pure_F,
)
from .fermions import (  # noqa: E402
    CorrelationMatrix,
    InitialStateSpec,
    InitKind,
    Propagator,
    Spectrum,
    block_entropy,
    diagonalize,
    initial_state_spec,
    multiparticle_amplitude,
    propagator,
    quench_correlations,
    wigner_d_propagator,
)
from .optimizer import (  # noqa: E402
    EnsembleSummary,
    OptimizationResult,
    Scenario,
    ensemble_run,
    optimal_boundary_coupling,
    peak_search,
    transfer_time_estimate,
)
