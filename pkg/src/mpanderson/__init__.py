"""Numerical laboratory for the multi-particle Anderson tight-binding model.

Builds finite-volume n-particle Hamiltonians with bounded random potentials
and decaying inter-particle interaction, evaluates Green-function
singularity criteria and cube-pair separability, and measures localization
observables (eigenfunction decay rates, Hilbert-Schmidt dynamical moments,
pair-singularity probabilities across growing scales).
"""

__version__ = "0.1.0"

from .geometry import (
    ConfigPoint,
    Cube,
    Rectangle,
    external_boundary,
    internal_boundary,
    is_J_separable,
    is_separable_pair,
    l1_norm,
    sites,
    sup_norm,
)
from .disorder import (
    DisorderRealization,
    DisorderSpec,
    multi_particle_potential,
    sample,
    validate_assumption_P,
)
from .hamiltonian import (
    HamiltonianMatrix,
    InteractionSpec,
    apply,
    build,
    interaction_energy,
    validate_interaction_bound,
)
from .spectral import (
    GreenSolver,
    NearSpectrumError,
    NsVerdict,
    Spectrum,
    classify_cube,
    eigensolve,
    gamma,
    green,
)
from .msa import (
    MsaParams,
    NonSeparablePairError,
    PairEstimate,
    estimate_pair_probability,
    msa_report,
    pair_singular_event,
    scale_sequence,
)
from .observables import (
    DecayFit,
    MomentResult,
    decay_fit,
    disorder_averaged_moment,
    eigenfunction_correlator,
    hs_moment,
)
from .harness import ExperimentConfig, RunManifest, parse_config, run

__all__ = [
    "ConfigPoint",
    "Cube",
    "Rectangle",
    "external_boundary",
    "internal_boundary",
    "is_J_separable",
    "is_separable_pair",
    "l1_norm",
    "sites",
    "sup_norm",
    "DisorderRealization",
    "DisorderSpec",
    "multi_particle_potential",
    "sample",
    "validate_assumption_P",
    "HamiltonianMatrix",
    "InteractionSpec",
    "apply",
    "build",
    "interaction_energy",
    "validate_interaction_bound",
    "GreenSolver",
    "NearSpectrumError",
    "NsVerdict",
    "Spectrum",
    "classify_cube",
    "eigensolve",
    "gamma",
    "green",
    "MsaParams",
    "NonSeparablePairError",
    "PairEstimate",
    "estimate_pair_probability",
    "msa_report",
    "pair_singular_event",
    "scale_sequence",
    "DecayFit",
    "MomentResult",
    "decay_fit",
    "disorder_averaged_moment",
    "eigenfunction_correlator",
    "hs_moment",
    "ExperimentConfig",
    "RunManifest",
    "parse_config",
    "run",
]
