"""Reduced density matrices and base-2 von Neumann entropy of pure eigenstates.

For the qubit (x) mode bipartition used throughout, the entropy of any pure
eigenstate lives in [0, 1] bits: 0 for a product state, 1 for a maximally
entangled one.  The atom-side reduced matrix is 2x2, so that path is the
default; the field-side spectrum (squared singular values of the coefficient
matrix) is available as a consistency check, since both subsystems of a pure
state share the same nonzero Schmidt spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.signal import find_peaks

from .fock import TruncatedSpace

NORM_TOL = 1e-10
TRACE_TOL = 1e-9
# Rounding can leave eigenvalues a hair negative; anything at or below this
# floor is treated as an exact zero before the log.
EIGENVALUE_FLOOR = 1e-14


@dataclass(frozen=True)
class ReducedDensity:
    """Reduced density matrix of one subsystem of a pure state."""

    subsystem: str  # "atom" or "field"
    matrix: np.ndarray


@dataclass(frozen=True)
class EntropyCurve:
    """Entropy of one eigenstate along a 1D parameter grid."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if len(self.grid) != len(self.values):
            raise ValueError("grid and values length mismatch")


def _check_normalized(state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=float).ravel()
    norm = float(np.linalg.norm(state))
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"state is not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")
    return state


def coefficient_matrix(state: np.ndarray, space: TruncatedSpace) -> np.ndarray:
    """Coefficients c[m, s] of the state in the fixed |m, s> ordering."""
    state = np.asarray(state, dtype=float).ravel()
    if state.size != space.total_dim:
        raise ValueError(f"state length {state.size} != space dimension {space.total_dim}")
    return state.reshape(space.field_dim, 2)


def reduced_density_atom(state: np.ndarray, space: TruncatedSpace) -> ReducedDensity:
    """Atomic reduced density matrix rho[s, s'] = sum_m c[m,s] c[m,s']."""
    c = coefficient_matrix(_check_normalized(state), space)
    return ReducedDensity(subsystem="atom", matrix=c.T @ c)


def reduced_density_field(state: np.ndarray, space: TruncatedSpace) -> ReducedDensity:
    """Field reduced density matrix rho[m, m'] = sum_s c[m,s] c[m',s]."""
    c = coefficient_matrix(_check_normalized(state), space)
    return ReducedDensity(subsystem="field", matrix=c @ c.T)


def entropy_from_eigenvalues(eigs: np.ndarray) -> float:
    eigs = np.asarray(eigs, dtype=float)
    eigs = np.clip(eigs, 0.0, None)
    eigs = eigs[eigs > EIGENVALUE_FLOOR]
    return float(-np.sum(eigs * np.log2(eigs)) + 0.0)  # normalize -0.0


def von_neumann_entropy(rho: ReducedDensity) -> float:
    """S = -Tr(rho log2 rho) in bits, with 0 log 0 := 0."""
    trace = float(np.trace(rho.matrix))
    if abs(trace - 1.0) > TRACE_TOL:
        raise ValueError(f"density matrix trace deviates from 1 by {abs(trace - 1.0):.3e}")
    return entropy_from_eigenvalues(np.linalg.eigvalsh(rho.matrix))


def entropy_of_state(state: np.ndarray, space: TruncatedSpace, check_field_side: bool = False) -> float:
    """Entanglement entropy of a pure state via the 2x2 atomic path.

    With ``check_field_side`` the field Schmidt spectrum (squared singular
    values of the coefficient matrix) is computed as well and the two
    entropies are required to agree to 1e-9 bits.
    """
    rho_a = reduced_density_atom(state, space)
    s_atom = von_neumann_entropy(rho_a)
    if check_field_side:
        c = coefficient_matrix(state, space)
        s_field = entropy_from_eigenvalues(np.linalg.svd(c, compute_uv=False) ** 2)
        if abs(s_atom - s_field) > 1e-9:
            raise AssertionError(
                f"atom/field entropy mismatch: {s_atom!r} vs {s_field!r}"
            )
    return s_atom


def entropy_of_eigenstate(solution, n: int, check_field_side: bool = False) -> float:
    """Entropy of level ``n`` (1-based) of an EigenSolution."""
    if not (1 <= n <= solution.energies.size):
        raise ValueError(f"level {n} outside solution with {solution.energies.size} levels")
    return entropy_of_state(solution.states[:, n - 1], solution.space, check_field_side)


def count_resonance_extrema(
    curve: EntropyCurve,
    kind: str,
    prominence: float,
    window: Optional[tuple] = None,
    pad: float = 0.0,
):
    """Count salient local extrema of an entropy curve.

    Parameters
    ----------
    curve : EntropyCurve
    kind : "valley" or "peak"
    prominence : minimum prominence in bits; raw local extrema below it are
        treated as ripple and ignored.
    window : optional (lo, hi) restriction in parameter units.  Must lie
        inside the curve's grid.  Extrema are located on the full curve
        (so window edges still have two-sided neighborhoods) and then
        filtered by locus.
    pad : widen the window by this amount on both sides before filtering;
        lets a caller count an extremum sitting exactly on a regime
        boundary as inside.

    Returns
    -------
    (count, loci) : int and ndarray of extremum locations.
    """
    if prominence <= 0:
        raise ValueError(f"prominence must be positive, got {prominence}")
    if kind not in ("valley", "peak"):
        raise ValueError(f"kind must be 'valley' or 'peak', got {kind!r}")
    grid = np.asarray(curve.grid, dtype=float)
    values = np.asarray(curve.values, dtype=float)
    signal = -values if kind == "valley" else values
    idx, _ = find_peaks(signal, prominence=prominence)
    loci = grid[idx]
    if window is not None:
        lo, hi = float(window[0]), float(window[1])
        if lo > hi:
            raise ValueError(f"empty window ({lo}, {hi})")
        if lo < grid[0] - 1e-12 or hi > grid[-1] + 1e-12:
            raise ValueError(
                f"window ({lo}, {hi}) outside grid [{grid[0]}, {grid[-1]}]"
            )
        keep = (loci >= lo - pad) & (loci <= hi + pad)
        loci = loci[keep]
    return len(loci), loci
