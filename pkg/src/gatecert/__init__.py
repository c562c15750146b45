"""Worst-case (diamond-distance) certification of coherent gate errors from
the average gate fidelity F and the fidelity deviation D."""

from .certify import (
    CertFlags,
    CertificateBundle,
    bound_fd,
    bound_fidelity_only,
    bound_hybrid,
    bound_ru,
    certificate_bundle,
    certified_overlap,
    diamond_exact,
    min_overlap_exact,
    tightness_witness,
)
from .estimate import (
    EstimationResult,
    ShotRecord,
    certify_from_estimates,
    estimate_moments,
    run_protocol,
    sample_haar_state,
    simulate_protocol,
    substream,
)
from .gates import (
    CircuitSpec,
    GateSpec,
    build_cz_error,
    build_model_error,
    build_qft_pair,
    build_toffoli_pair,
    circuit_unitary,
    error_unitary,
    ideal_gate,
    overrotated_gate,
    qft_circuit,
    toffoli_circuit,
)
from .geometry import convex_hull, distance_origin_to_hull
from .linalg import (
    EigensolverError,
    UnitarityError,
    UnitaryOperator,
    adjoint,
    eigenvalues_unitary,
    embed_gate,
    exp_involutory,
    exp_projector_squared,
    haar_random_unitary,
    kron,
    multiply,
    trace,
    trace_of_square,
)
from .moments import (
    HaarMCResult,
    MomentSummary,
    PQInvariants,
    d2_deviation,
    fd_from_unitary,
    haar_mc_moments,
    pq_from_fd,
    single_fidelity,
    symmetric_subspace_dim,
)

__version__ = "0.1.0"

__all__ = [
    "CertFlags",
    "CertificateBundle",
    "CircuitSpec",
    "EigensolverError",
    "EstimationResult",
    "GateSpec",
    "HaarMCResult",
    "MomentSummary",
    "PQInvariants",
    "ShotRecord",
    "UnitarityError",
    "UnitaryOperator",
    "adjoint",
    "bound_fd",
    "bound_fidelity_only",
    "bound_hybrid",
    "bound_ru",
    "build_cz_error",
    "build_model_error",
    "build_qft_pair",
    "build_toffoli_pair",
    "certificate_bundle",
    "certified_overlap",
    "certify_from_estimates",
    "circuit_unitary",
    "convex_hull",
    "d2_deviation",
    "diamond_exact",
    "distance_origin_to_hull",
    "eigenvalues_unitary",
    "embed_gate",
    "error_unitary",
    "estimate_moments",
    "exp_involutory",
    "exp_projector_squared",
    "fd_from_unitary",
    "haar_mc_moments",
    "haar_random_unitary",
    "ideal_gate",
    "kron",
    "min_overlap_exact",
    "multiply",
    "overrotated_gate",
    "pq_from_fd",
    "qft_circuit",
    "run_protocol",
    "sample_haar_state",
    "simulate_protocol",
    "single_fidelity",
    "substream",
    "symmetric_subspace_dim",
    "tightness_witness",
    "toffoli_circuit",
    "trace",
    "trace_of_square",
]
