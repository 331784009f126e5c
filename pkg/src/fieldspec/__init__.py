"""fieldspec: irregular sampling of bandlimited fields.

Reconstruction via Hermitian Toeplitz normal equations, Monte Carlo
characterisation of the random sampling matrix's spectrum, and exact
closed-form moments of the asymptotic eigenvalue distribution via set
partition enumeration.
"""

from .field import (
    BandlimitedSignal,
    GapProfile,
    SampleSet,
    evaluate_signal,
    gap_profile,
    random_signal,
    random_topology,
    sample_signal,
)
from .linsys import (
    EigenSolveError,
    EigenSpectrum,
    SolveDiagnostics,
    ToeplitzSystem,
    build_system,
    eig_hermitian,
    precond_bound,
    solve,
    toeplitz_matrix,
)
from .moments import MomentPolynomial, finite_moment, mgf_partial, moment_polynomial
from .partitions import (
    ConstraintSystem,
    InterpolationGuardError,
    RankInvariantError,
    RationalPolynomial,
    SetPartition,
    build_constraints,
    count_lattice_points,
    enumerate_partitions,
    partition_from_index_vector,
    volume_coefficient,
    zeta_polynomial,
)
from .reconstruct import ReconstructionReport, SweepCell, reconstruct, sweep
from .spectral import (
    EnsembleSpec,
    FitError,
    SpectralEnsemble,
    TailFit,
    check_min_eig_bound,
    empirical_cdf,
    fit_tail,
    kappa_mirror_check,
    linear_histogram,
    log_histogram,
    run_ensemble,
)

__version__ = "0.1.0"

__all__ = [
    "BandlimitedSignal",
    "GapProfile",
    "SampleSet",
    "evaluate_signal",
    "gap_profile",
    "random_signal",
    "random_topology",
    "sample_signal",
    "EigenSolveError",
    "EigenSpectrum",
    "SolveDiagnostics",
    "ToeplitzSystem",
    "build_system",
    "eig_hermitian",
    "precond_bound",
    "solve",
    "toeplitz_matrix",
    "MomentPolynomial",
    "finite_moment",
    "mgf_partial",
    "moment_polynomial",
    "ConstraintSystem",
    "InterpolationGuardError",
    "RankInvariantError",
    "RationalPolynomial",
    "SetPartition",
    "build_constraints",
    "count_lattice_points",
    "enumerate_partitions",
    "partition_from_index_vector",
    "volume_coefficient",
    "zeta_polynomial",
    "ReconstructionReport",
    "SweepCell",
    "reconstruct",
    "sweep",
    "EnsembleSpec",
    "FitError",
    "SpectralEnsemble",
    "TailFit",
    "check_min_eig_bound",
    "empirical_cdf",
    "fit_tail",
    "kappa_mirror_check",
    "linear_histogram",
    "log_histogram",
    "run_ensemble",
]
