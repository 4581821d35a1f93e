"""Intrinsic damping of Rabi oscillations in the optical Stern-Gerlach model.

A two-level atom crossing an optical cavity with one excitation splits into
two dressed-branch wavepackets with opposite mean acceleration.  Their
decreasing overlap damps the Rabi oscillations without any reservoir, and
the same overlap controls wave-particle duality and the atom-field
entanglement criteria.  This package provides the closed-form dynamics, the
duality and two-qubit criterion toolboxes, and an independent split-operator
grid propagator that cross-validates everything.
"""

from .params import (
    HBAR,
    DEFAULTS,
    PhysicalConfig,
    ModelParams,
    derive_params,
    to_physical,
    config_from_mapping,
    load_config,
    default_config,
)
from .analytic import (
    BranchLabel,
    branch_centroid,
    branch_momentum_amplitude,
    branch_overlap,
    excited_population,
    momentum_distribution,
    overlap_envelope,
    rabi_frequency,
    separation_time,
)
from .complementarity import (
    DualityPair,
    distinguishability,
    duality_identity_residual,
    duality_pair,
    visibility,
)
from .entanglement import (
    BellVerdict,
    SeparabilityVerdict,
    TwoQubitDensity,
    density_family,
    horodecki_m,
    m_closed_form,
    partial_transpose,
    pauli_correlation_matrix,
    read_density_csv,
    reduced_density,
    separability_test,
    write_density_csv,
)
from .grid import (
    BranchGridState,
    GridSpec,
    PotentialKind,
    default_grid_spec,
    dump_snapshot,
    evolve,
    init_gaussian,
    observables,
    propagate_snapshots,
    step,
)
from .grid import overlap as grid_overlap

__version__ = "0.1.0"
