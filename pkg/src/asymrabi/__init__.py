"""Desk-scale numerics for the driven (asymmetric) quantum Rabi model.

Dense spectra, eigenstate entanglement entropy, avoided-crossing loci,
coupling-regime classification, and two analytic cross-checks: the
displaced-oscillator (polaron) ladder and degenerate perturbation theory
of the driven Jaynes-Cummings model.
"""

from .entanglement import (
    EntropyCurve,
    ReducedDensity,
    count_resonance_extrema,
    entropy_of_eigenstate,
    entropy_of_state,
    reduced_density_atom,
    reduced_density_field,
    von_neumann_entropy,
)
from .fock import OperatorMatrix, TruncatedSpace, annihilation, kron, number, pauli
from .jc_analytic import (
    DegeneratePerturbation,
    JCLevel,
    NoDegeneracyError,
    degenerate_perturbation,
    find_degenerate_coupling,
    jc_ground_energy,
    jc_spectrum,
    perturbed_entropy,
)
from .models import (
    HamiltonianMatrix,
    ModelParams,
    build_asym_qjc,
    build_asym_qrm,
    build_h0_h1_split,
    build_hamiltonian,
    build_polaron_frame,
)
from .polaron import PolaronLadder, crossing_partners, polaron_energies, predicted_preservation_points
from .spectra import (
    CrossingEvent,
    EigenSolution,
    RegimeBoundaries,
    SweepResult,
    classify_regimes,
    converged_truncation,
    detect_avoided_crossings,
    diagonalize,
    sweep,
    sweep_2d,
)

__version__ = "0.1.0"

__all__ = [
    "CrossingEvent",
    "DegeneratePerturbation",
    "EigenSolution",
    "EntropyCurve",
    "HamiltonianMatrix",
    "JCLevel",
    "ModelParams",
    "NoDegeneracyError",
    "OperatorMatrix",
    "PolaronLadder",
    "ReducedDensity",
    "RegimeBoundaries",
    "SweepResult",
    "TruncatedSpace",
    "annihilation",
    "build_asym_qjc",
    "build_asym_qrm",
    "build_h0_h1_split",
    "build_hamiltonian",
    "build_polaron_frame",
    "classify_regimes",
    "converged_truncation",
    "count_resonance_extrema",
    "crossing_partners",
    "degenerate_perturbation",
    "detect_avoided_crossings",
    "diagonalize",
    "entropy_of_eigenstate",
    "entropy_of_state",
    "find_degenerate_coupling",
    "jc_ground_energy",
    "jc_spectrum",
    "kron",
    "number",
    "pauli",
    "perturbed_entropy",
    "polaron_energies",
    "predicted_preservation_points",
    "reduced_density_atom",
    "reduced_density_field",
    "sweep",
    "sweep_2d",
    "von_neumann_entropy",
]
