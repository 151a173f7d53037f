"""Diagonalization, parameter sweeps, avoided-crossing detection, regimes.

Levels are labeled by sorted energy index throughout (1-based in the public
API), not by state continuity: an avoided crossing then shows up as a local
minimum of the adjacent-level gap rather than as a label swap.  Crossing
loci are refined by golden-section minimization of the gap with fresh
diagonalizations inside the bracket; interpolating eigenvalues across a
narrow anticrossing is unreliable, so no interpolation is ever used.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.linalg

from .entanglement import EntropyCurve, entropy_of_state
from .fock import TruncatedSpace
from .models import (
    MODEL_ASYM_QRM,
    MODEL_POLARON,
    MODEL_QRM,
    HamiltonianMatrix,
    ModelParams,
    build_hamiltonian,
)

SWEEP_AXES = ("g", "epsilon", "omega0")

ORTHONORMALITY_TOL = 1e-10
RESIDUAL_TOL = 1e-8
DEFAULT_REFINE_REL_WIDTH = 1e-6
# A refined gap below this is indistinguishable from an exact crossing.
EXACT_CROSSING_TOL = 1e-8
QUASI_DEGENERACY_TOL = 1e-3

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class DiagonalizationError(Exception):
    """Eigensolver failure, carrying a fingerprint of the offending matrix."""

    def __init__(self, message: str, fingerprint: Optional[dict] = None):
        super().__init__(message)
        self.fingerprint = fingerprint or {}


class SweepPointError(Exception):
    """Failure at one grid point of a sweep."""

    def __init__(self, index, value, original: Exception):
        super().__init__(f"sweep failed at grid index {index} (value {value}): {original}")
        self.index = index
        self.value = value
        self.original = original


class TruncationCapError(Exception):
    """Truncation doubling hit the configured cap without converging."""

    def __init__(self, cap: int, last: np.ndarray, previous: np.ndarray):
        super().__init__(
            f"energies not converged at n_trunc cap {cap}; "
            f"last max change {np.max(np.abs(last - previous)):.3e}"
        )
        self.cap_reached = True
        self.last_energies = last
        self.previous_energies = previous


class RegimeNotFoundError(Exception):
    """Requested regime boundary does not occur below the scanned g_max."""


@dataclass(frozen=True)
class EigenSolution:
    """Lowest levels of one Hamiltonian: ascending energies and coefficients.

    ``states[:, k]`` holds the coefficients c^(n)_{m,p} of level k+1 in the
    fixed |m, p> basis, sign-fixed so the largest-magnitude coefficient is
    positive.
    """

    params: ModelParams
    space: TruncatedSpace
    model_tag: str
    energies: np.ndarray
    states: np.ndarray

    @property
    def n_trunc(self) -> int:
        return self.space.n_trunc

    @property
    def n_levels(self) -> int:
        return int(self.energies.size)


@dataclass(frozen=True)
class SweepResult:
    """Energies and entropies of the lowest levels over a 1D or 2D grid."""

    model_tag: str
    base: ModelParams
    axes: tuple
    grids: tuple
    energies: np.ndarray  # grid shape + (n_levels,)
    entropies: np.ndarray
    n_trunc_used: np.ndarray

    @property
    def is_1d(self) -> bool:
        return len(self.axes) == 1

    @property
    def n_levels(self) -> int:
        return int(self.energies.shape[-1])

    def level_energies(self, level: int) -> np.ndarray:
        self._check_level(level)
        return self.energies[..., level - 1]

    def gap(self, level_low: int) -> np.ndarray:
        """Adjacent gap E_{level_low + 1} - E_{level_low} (always >= 0)."""
        self._check_level(level_low + 1)
        return self.energies[..., level_low] - self.energies[..., level_low - 1]

    def entropy_curve(self, level: int) -> EntropyCurve:
        if not self.is_1d:
            raise ValueError("entropy_curve is defined for 1D sweeps only")
        self._check_level(level)
        return EntropyCurve(grid=self.grids[0], values=self.entropies[:, level - 1])

    def _check_level(self, level: int):
        if not (1 <= level <= self.n_levels):
            raise ValueError(f"level {level} outside 1..{self.n_levels}")

    def iter_records(self):
        """Rows in lexicographic grid order then level order (1-based levels)."""
        if self.is_1d:
            for i, x in enumerate(self.grids[0]):
                for lev in range(self.n_levels):
                    yield {
                        "axis1": float(x),
                        "axis2": None,
                        "level": lev + 1,
                        "energy": float(self.energies[i, lev]),
                        "energy_rel": float(self.energies[i, lev] - self.energies[i, 0]),
                        "entropy": float(self.entropies[i, lev]),
                        "n_trunc": int(self.n_trunc_used[i]),
                    }
        else:
            for i, x in enumerate(self.grids[0]):
                for j, y in enumerate(self.grids[1]):
                    for lev in range(self.n_levels):
                        yield {
                            "axis1": float(x),
                            "axis2": float(y),
                            "level": lev + 1,
                            "energy": float(self.energies[i, j, lev]),
                            "energy_rel": float(self.energies[i, j, lev] - self.energies[i, j, 0]),
                            "entropy": float(self.entropies[i, j, lev]),
                            "n_trunc": int(self.n_trunc_used[i, j]),
                        }


@dataclass(frozen=True)
class CrossingEvent:
    """Refined locus and minimal gap of one avoided crossing."""

    level_low: int
    level_high: int
    locus: float
    min_gap: float
    bracket: tuple
    refined: bool = True


@dataclass(frozen=True)
class RegimeBoundaries:
    """Coupling-regime boundaries of the undriven model.

    ``g_cross1`` separates the perturbative ultrastrong regime from the
    nonperturbative window (first exact level crossing); ``g_coalesce``
    marks where all tracked adjacent doublets become quasidegenerate
    (gap below ``quasi_degeneracy_tol``) for the rest of the scan.
    """

    g_cross1: float
    g_coalesce: float
    quasi_degeneracy_tol: float

    def __post_init__(self):
        if not (0 < self.g_cross1 < self.g_coalesce):
            raise ValueError(
                f"boundaries must satisfy 0 < g_cross1 < g_coalesce, got "
                f"{self.g_cross1} and {self.g_coalesce}"
            )

    @property
    def window(self) -> tuple:
        return (self.g_cross1, self.g_coalesce)


def _fingerprint(matrix: np.ndarray) -> dict:
    return {
        "dim": int(matrix.shape[0]),
        "trace": float(np.trace(matrix)),
        "frobenius": float(np.linalg.norm(matrix)),
    }


def diagonalize(H: HamiltonianMatrix, n_levels: int) -> EigenSolution:
    """Lowest ``n_levels`` eigenpairs of a real symmetric Hamiltonian.

    Energies come out ascending; each eigenvector is sign-fixed so its
    largest-magnitude coefficient is positive.  Orthonormality and
    eigenresiduals are verified before returning.
    """
    dense = H.matrix.entries
    dim = dense.shape[0]
    if not (1 <= n_levels <= dim):
        raise ValueError(f"n_levels must be in 1..{dim}, got {n_levels}")
    try:
        energies, states = scipy.linalg.eigh(dense, subset_by_index=[0, n_levels - 1])
    except scipy.linalg.LinAlgError as exc:
        raise DiagonalizationError(
            f"eigensolver failed: {exc}", fingerprint=_fingerprint(dense)
        ) from exc

    # Deterministic sign: largest-magnitude coefficient positive.
    lead = np.argmax(np.abs(states), axis=0)
    flip = states[lead, np.arange(states.shape[1])] < 0
    states[:, flip] *= -1.0

    overlap = states.T @ states
    ortho_err = float(np.max(np.abs(overlap - np.eye(n_levels))))
    if ortho_err > ORTHONORMALITY_TOL:
        raise DiagonalizationError(
            f"eigenvectors not orthonormal: max|S^T S - I| = {ortho_err:.3e}",
            fingerprint=_fingerprint(dense),
        )
    residual = dense @ states - states * energies
    res_norms = np.linalg.norm(residual, axis=0)
    bound = RESIDUAL_TOL * (1.0 + np.abs(energies))
    if np.any(res_norms > bound):
        worst = int(np.argmax(res_norms - bound))
        raise DiagonalizationError(
            f"eigenresidual too large at level {worst + 1}: {res_norms[worst]:.3e}",
            fingerprint=_fingerprint(dense),
        )
    return EigenSolution(
        params=H.params,
        space=H.space,
        model_tag=H.model_tag,
        energies=energies,
        states=states,
    )


def _lowest_energies(model_tag: str, params: ModelParams, n_trunc: int, n_levels: int) -> np.ndarray:
    space = TruncatedSpace(n_trunc)
    H = build_hamiltonian(model_tag, params, space)
    return scipy.linalg.eigvalsh(H.matrix.entries, subset_by_index=[0, n_levels - 1])


def nearest_adjacent_pair(energies: np.ndarray, target: float) -> int:
    """0-based index i of the adjacent pair (i, i+1) whose midpoint is nearest target."""
    energies = np.asarray(energies, dtype=float)
    if energies.size < 2:
        raise ValueError("need at least two energies")
    midpoints = 0.5 * (energies[1:] + energies[:-1])
    return int(np.argmin(np.abs(midpoints - target)))


def converged_truncation(
    params: ModelParams,
    n_levels: int,
    rel_tol: float,
    n_start: int,
    model_tag: str = MODEL_ASYM_QRM,
    max_n_trunc: int = 1600,
) -> int:
    """Smallest tested truncation whose lowest levels are stable under doubling.

    Starting from ``n_start`` and doubling, returns the first n_trunc whose
    lowest ``n_levels`` energies each move by less than
    ``rel_tol * max(|E|, omega)`` when n_trunc doubles.  Raises
    :class:`TruncationCapError` (carrying the last two energy lists) if the
    cap is hit first.
    """
    if rel_tol <= 0:
        raise ValueError(f"rel_tol must be positive, got {rel_tol}")
    if n_start < 1:
        raise ValueError(f"n_start must be >= 1, got {n_start}")
    if n_levels > 2 * (n_start + 1):
        raise ValueError(
            f"n_start {n_start} too small to resolve {n_levels} levels"
        )
    if 2 * n_start > max_n_trunc:
        raise ValueError(
            f"max_n_trunc {max_n_trunc} leaves no room to double from n_start {n_start}"
        )
    n = n_start
    energies = _lowest_energies(model_tag, params, n, n_levels)
    while True:
        doubled = 2 * n
        energies_next = _lowest_energies(model_tag, params, doubled, n_levels)
        scale = np.maximum(np.abs(energies_next), params.omega)
        if np.all(np.abs(energies - energies_next) < rel_tol * scale):
            return n
        if 2 * doubled > max_n_trunc:
            raise TruncationCapError(max_n_trunc, energies_next, energies)
        n = doubled
        energies = energies_next


def _run_grid(worker: Callable, n_points: int, jobs: int):
    if jobs <= 1:
        return [worker(i) for i in range(n_points)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, range(n_points)))


def _check_grid(grid: np.ndarray, name: str) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValueError(f"{name} grid must be a nonempty 1D sequence")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ValueError(f"{name} grid must be strictly increasing")
    return grid


def _point_params(base: ModelParams, axis: str, value: float) -> ModelParams:
    if axis not in SWEEP_AXES:
        raise ValueError(f"axis must be one of {SWEEP_AXES}, got {axis!r}")
    return base.replace(**{axis: float(value)})


def _verify_polaron_equivalence(model_tag, params, n_trunc, energies, rel_tol=1e-9):
    """Debug check: the rotated-frame builder must reproduce the spectrum."""
    if model_tag not in (MODEL_QRM, MODEL_ASYM_QRM):
        return
    rotated = _lowest_energies(MODEL_POLARON, params, n_trunc, energies.size)
    scale = np.maximum(np.abs(energies), params.omega)
    worst = float(np.max(np.abs(rotated - energies) / scale))
    if worst > rel_tol:
        raise DiagonalizationError(
            f"rotated-frame spectrum deviates by {worst:.3e} (rel) from the lab frame"
        )


def sweep(
    model_tag: str,
    base: ModelParams,
    axis: str,
    grid: Sequence[float],
    n_levels: int,
    n_trunc: int,
    jobs: int = 1,
    debug_checks: bool = False,
) -> SweepResult:
    """Diagonalize and compute entropies along a 1D parameter grid.

    Grid points are independent; with ``jobs > 1`` they are evaluated
    concurrently and merged in grid order, so the result is identical to a
    serial run.  ``debug_checks`` additionally verifies, at every point,
    the field-side entropy path and (for the Rabi-type models) spectral
    agreement with the rotated-frame builder.
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"axis must be one of {SWEEP_AXES}, got {axis!r}")
    grid = _check_grid(grid, axis)
    space = TruncatedSpace(n_trunc)
    energies = np.empty((grid.size, n_levels))
    entropies = np.empty((grid.size, n_levels))

    def worker(i: int):
        try:
            params = _point_params(base, axis, grid[i])
            sol = diagonalize(build_hamiltonian(model_tag, params, space), n_levels)
            ent = [
                entropy_of_state(sol.states[:, k], space, check_field_side=debug_checks)
                for k in range(n_levels)
            ]
            if debug_checks:
                _verify_polaron_equivalence(model_tag, params, n_trunc, sol.energies)
        except Exception as exc:
            raise SweepPointError(i, grid[i], exc) from exc
        return sol.energies, np.asarray(ent)

    for i, (e, s) in enumerate(_run_grid(worker, grid.size, jobs)):
        energies[i] = e
        entropies[i] = s

    return SweepResult(
        model_tag=model_tag,
        base=base,
        axes=(axis,),
        grids=(grid,),
        energies=energies,
        entropies=entropies,
        n_trunc_used=np.full(grid.size, n_trunc, dtype=int),
    )


def sweep_2d(
    model_tag: str,
    base: ModelParams,
    axes: tuple,
    grids: tuple,
    n_levels: int,
    n_trunc: int,
    jobs: int = 1,
    debug_checks: bool = False,
) -> SweepResult:
    """Two-axis sweep; axis order is (slow, fast) in the output arrays."""
    if len(axes) != 2 or len(grids) != 2:
        raise ValueError("sweep_2d needs exactly two axes and two grids")
    ax1, ax2 = axes
    if ax1 == ax2:
        raise ValueError("the two sweep axes must differ")
    for ax in (ax1, ax2):
        if ax not in SWEEP_AXES:
            raise ValueError(f"axis must be one of {SWEEP_AXES}, got {ax!r}")
    grid1 = _check_grid(grids[0], ax1)
    grid2 = _check_grid(grids[1], ax2)
    space = TruncatedSpace(n_trunc)
    shape = (grid1.size, grid2.size)
    energies = np.empty(shape + (n_levels,))
    entropies = np.empty(shape + (n_levels,))

    def worker(flat: int):
        i, j = divmod(flat, grid2.size)
        try:
            params = _point_params(_point_params(base, ax1, grid1[i]), ax2, grid2[j])
            sol = diagonalize(build_hamiltonian(model_tag, params, space), n_levels)
            ent = [
                entropy_of_state(sol.states[:, k], space, check_field_side=debug_checks)
                for k in range(n_levels)
            ]
            if debug_checks:
                _verify_polaron_equivalence(model_tag, params, n_trunc, sol.energies)
        except Exception as exc:
            raise SweepPointError((i, j), (grid1[i], grid2[j]), exc) from exc
        return sol.energies, np.asarray(ent)

    for flat, (e, s) in enumerate(_run_grid(worker, grid1.size * grid2.size, jobs)):
        i, j = divmod(flat, grid2.size)
        energies[i, j] = e
        entropies[i, j] = s

    return SweepResult(
        model_tag=model_tag,
        base=base,
        axes=(ax1, ax2),
        grids=(grid1, grid2),
        energies=energies,
        entropies=entropies,
        n_trunc_used=np.full(shape, n_trunc, dtype=int),
    )


def _golden_section_minimize(f: Callable, lo: float, hi: float, rel_width: float):
    """Golden-section search for a minimum of a unimodal f on [lo, hi].

    Shrinks the bracket to ``rel_width`` of its initial width and returns
    the best evaluated point (x, f(x)).
    """
    a, b = float(lo), float(hi)
    h = b - a
    if h <= 0:
        return a, f(a)
    tol = rel_width * h
    c = b - _INVPHI * h
    d = a + _INVPHI * h
    fc, fd = f(c), f(d)
    best = (c, fc) if fc <= fd else (d, fd)
    n_steps = int(math.ceil(math.log(tol / h) / math.log(_INVPHI))) if tol < h else 0
    for _ in range(n_steps):
        if fc < fd:
            b, d, fd = d, c, fc
            h = _INVPHI * h
            c = b - _INVPHI * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = _INVPHI * h
            d = a + _INVPHI * h
            fd = f(d)
        candidate = (c, fc) if fc <= fd else (d, fd)
        if candidate[1] < best[1]:
            best = candidate
    return best


def _local_minima_indices(gap: np.ndarray, threshold: float):
    """Indices of gap minima below threshold, including one-sided edge minima."""
    idx = []
    n = gap.size
    if n >= 2 and gap[0] < gap[1] and gap[0] < threshold:
        idx.append(0)
    for i in range(1, n - 1):
        if gap[i] < gap[i - 1] and gap[i] < gap[i + 1] and gap[i] < threshold:
            idx.append(i)
    if n >= 2 and gap[-1] < gap[-2] and gap[-1] < threshold:
        idx.append(n - 1)
    return idx


def detect_avoided_crossings(
    sweep_result: SweepResult,
    level: int,
    gap_threshold: float,
    rel_width: float = DEFAULT_REFINE_REL_WIDTH,
    refine: bool = True,
) -> list:
    """Avoided crossings of one level with its nearest neighbours.

    Both adjacent gaps, (level-1, level) and (level, level+1), are scanned
    for local minima below ``gap_threshold`` (a minimum sitting on a grid
    edge counts, with a one-sided neighborhood).  Each event's locus is
    refined by golden-section minimization with fresh diagonalizations in
    the grid bracket; if refinement cannot beat the grid minimum the grid
    point is kept and the event is flagged unrefined.  ``refine=False``
    skips the minimization and reports grid-resolution events.
    """
    if gap_threshold <= 0:
        raise ValueError(f"gap_threshold must be positive, got {gap_threshold}")
    if not sweep_result.is_1d:
        raise ValueError("crossing detection is defined for 1D sweeps only")
    if level + 1 > sweep_result.n_levels:
        raise ValueError(
            f"sweep holds {sweep_result.n_levels} levels; need level + 1 = {level + 1}"
        )
    axis = sweep_result.axes[0]
    grid = sweep_result.grids[0]
    n_trunc = int(np.max(sweep_result.n_trunc_used))
    pairs = [(level, level + 1)]
    if level >= 2:
        pairs.append((level - 1, level))

    events = []
    for lo_level, hi_level in pairs:
        gap = sweep_result.gap(lo_level)

        def gap_at(x: float) -> float:
            params = _point_params(sweep_result.base, axis, x)
            e = _lowest_energies(sweep_result.model_tag, params, n_trunc, hi_level)
            return float(e[hi_level - 1] - e[lo_level - 1])

        for i in _local_minima_indices(gap, gap_threshold):
            b_lo = grid[max(i - 1, 0)]
            b_hi = grid[min(i + 1, grid.size - 1)]
            if refine:
                x_best, f_best = _golden_section_minimize(gap_at, b_lo, b_hi, rel_width)
                refined = f_best <= gap[i]
            else:
                refined = False
            if not refined:
                x_best, f_best = float(grid[i]), float(gap[i])
            events.append(
                CrossingEvent(
                    level_low=lo_level,
                    level_high=hi_level,
                    locus=float(x_best),
                    min_gap=float(f_best),
                    bracket=(float(b_lo), float(b_hi)),
                    refined=refined,
                )
            )
    events.sort(key=lambda ev: ev.locus)
    return events


def classify_regimes(
    base: ModelParams,
    g_max: float,
    n_levels: int = 8,
    n_trunc: int = 400,
    grid_points: int = 241,
    quasi_degeneracy_tol: float = QUASI_DEGENERACY_TOL,
    exact_crossing_tol: float = EXACT_CROSSING_TOL,
    g_min: Optional[float] = None,
) -> RegimeBoundaries:
    """Locate the two coupling-regime boundaries of the undriven model.

    ``g_cross1`` is the smallest coupling where any adjacent pair among the
    lowest ``n_levels`` levels truly crosses (refined gap minimum below
    ``exact_crossing_tol``); ``g_coalesce`` is the smallest coupling beyond
    which every tracked doublet gap (levels (1,2), (3,4), ...) stays below
    ``quasi_degeneracy_tol`` for the rest of the scan.  Classification is
    defined for the undriven model only (epsilon = 0), and the scan starts
    just above g = 0 to skip the decoupled-limit degeneracies.
    """
    if base.epsilon != 0:
        raise ValueError("regime classification is defined for epsilon = 0")
    if base.omega0 <= 0:
        raise ValueError("degenerate input: omega0 = 0 has level degeneracies at every g")
    if n_levels < 2:
        raise ValueError("need at least two levels to track crossings")
    if g_min is None:
        g_min = g_max / grid_points
    grid = np.linspace(g_min, g_max, grid_points)
    energies = np.empty((grid.size, n_levels))
    for i, g in enumerate(grid):
        energies[i] = _lowest_energies(MODEL_ASYM_QRM, base.replace(g=g), n_trunc, n_levels)

    def gap_pair_at(g: float, lo_level: int, hi_level: int) -> float:
        e = _lowest_energies(MODEL_ASYM_QRM, base.replace(g=g), n_trunc, hi_level)
        return float(e[hi_level - 1] - e[lo_level - 1])

    # First exact crossing: interior gap minima, refined in locus order
    # until one dips below the exact-crossing tolerance.  Grid minima above
    # the prefilter cannot hide an exact crossing at this grid resolution.
    prefilter = 0.1 * base.omega
    candidates = []
    for pair_lo in range(1, n_levels):
        gap = energies[:, pair_lo] - energies[:, pair_lo - 1]
        for i in range(1, grid.size - 1):
            if gap[i] < gap[i - 1] and gap[i] < gap[i + 1] and gap[i] < prefilter:
                candidates.append((grid[i], i, pair_lo))
    candidates.sort()

    g_cross1 = None
    for _, i, pair_lo in candidates:
        x_best, f_best = _golden_section_minimize(
            lambda x: gap_pair_at(x, pair_lo, pair_lo + 1),
            grid[i - 1],
            grid[i + 1],
            rel_width=1e-9,
        )
        if f_best < exact_crossing_tol:
            g_cross1 = x_best
            break
    if g_cross1 is None:
        raise RegimeNotFoundError(
            f"no exact level crossing among the lowest {n_levels} levels below g = {g_max}"
        )

    # Coalescence: last grid point where any tracked doublet is still open,
    # then bisection on the threshold crossing in the bracketing cell.
    doublet_lows = list(range(1, n_levels, 2))

    def max_doublet_gap_at(g: float) -> float:
        e = _lowest_energies(MODEL_ASYM_QRM, base.replace(g=g), n_trunc, n_levels)
        return float(max(e[lo] - e[lo - 1] for lo in doublet_lows))

    max_gap = np.max(
        np.stack([energies[:, lo] - energies[:, lo - 1] for lo in doublet_lows], axis=1),
        axis=1,
    )
    above = np.nonzero(max_gap >= quasi_degeneracy_tol)[0]
    if above.size == 0:
        raise RegimeNotFoundError(
            f"doublets already quasidegenerate at the scan start g = {g_min}"
        )
    last_above = int(above[-1])
    if last_above == grid.size - 1:
        raise RegimeNotFoundError(f"no level coalescence below g = {g_max}")
    lo_g, hi_g = grid[last_above], grid[last_above + 1]
    while hi_g - lo_g > 1e-8:
        mid = 0.5 * (lo_g + hi_g)
        if max_doublet_gap_at(mid) >= quasi_degeneracy_tol:
            lo_g = mid
        else:
            hi_g = mid
    g_coalesce = 0.5 * (lo_g + hi_g)

    return RegimeBoundaries(
        g_cross1=float(g_cross1),
        g_coalesce=float(g_coalesce),
        quasi_degeneracy_tol=quasi_degeneracy_tol,
    )
