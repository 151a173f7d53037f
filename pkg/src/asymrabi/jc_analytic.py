"""Closed-form Jaynes-Cummings solution and degenerate perturbation theory.

The undriven JC model conserves the excitation number N = a^dag a + |e><e|
and diagonalizes in 2x2 blocks, so everything here is exact arithmetic:

    E_{n,+-} = (n + 1/2) w +- Omega_n / 2,   Omega_n = sqrt(D^2 + 4 g^2 (n+1))

with detuning D = w0 - w, dressed states

    |n,+> = C_n |n,e> + D_n |n+1,g>,   |n,-> = D_n |n,e> - C_n |n+1,g>,

C_n = cos(alpha_n/2), D_n = sin(alpha_n/2), alpha_n = atan2(2 g sqrt(n+1), D),
and the isolated ground level E = -w0/2 at |g, 0>.  The atan2 branch keeps
alpha in (0, pi), so C and D stay nonnegative for D > 0 and the states pass
smoothly through resonance (alpha = pi/2 at D = 0).

At the coupling g* where E_{n,+} = E_{n+1,-} the drive eps sx lifts the
degeneracy at first order by +- eps D_n D_{n+1}; the zeroth-order states are
the symmetric/antisymmetric combinations of the two crossing dressed states.
These closed forms serve as the analytic oracle for the dense numerics.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .entanglement import entropy_from_eigenvalues
from .fock import TruncatedSpace
from .models import ModelParams


class NoDegeneracyError(Exception):
    """No coupling in the search bracket makes the two levels degenerate."""


@dataclass(frozen=True)
class JCLevel:
    """One dressed level of the undriven JC model."""

    n: int
    branch: str  # "+" or "-"
    energy: float
    c_n: float
    d_n: float
    alpha_n: float


@dataclass(frozen=True)
class DegeneratePerturbation:
    """First-order splitting data at a JC degeneracy under the drive eps sx."""

    n: int
    g_star: float
    e0: float
    e1_plus: float
    e1_minus: float
    entropy: float


def rabi_splitting(n: int, delta: float, g: float) -> float:
    """Omega_n = sqrt(delta^2 + 4 g^2 (n+1))."""
    return float(np.sqrt(delta**2 + 4.0 * g**2 * (n + 1)))


def mixing_angle(n: int, delta: float, g: float) -> float:
    return float(np.arctan2(2.0 * g * np.sqrt(n + 1.0), delta))


def jc_ground_energy(params: ModelParams) -> float:
    """Energy of the isolated zero-excitation level |g, 0>."""
    return -0.5 * params.omega0


def jc_spectrum(params: ModelParams, n: int, branch: str) -> JCLevel:
    """Closed-form dressed level of the undriven JC model (epsilon must be 0)."""
    if params.epsilon != 0:
        raise ValueError("closed-form JC solution requires epsilon = 0")
    if n < 0:
        raise ValueError(f"sector index must be >= 0, got {n}")
    if branch not in ("+", "-"):
        raise ValueError(f"branch must be '+' or '-', got {branch!r}")
    delta = params.omega0 - params.omega
    omega_n = rabi_splitting(n, delta, params.g)
    sign = 1.0 if branch == "+" else -1.0
    energy = (n + 0.5) * params.omega + sign * 0.5 * omega_n
    alpha = mixing_angle(n, delta, params.g)
    return JCLevel(
        n=n,
        branch=branch,
        energy=energy,
        c_n=float(np.cos(alpha / 2.0)),
        d_n=float(np.sin(alpha / 2.0)),
        alpha_n=alpha,
    )


def jc_energies_sorted(params: ModelParams, count: int) -> np.ndarray:
    """Lowest ``count`` JC energies (ground level included), ascending."""
    sectors = count + 2
    energies = [jc_ground_energy(params)]
    for n in range(sectors):
        energies.append(jc_spectrum(params, n, "+").energy)
        energies.append(jc_spectrum(params, n, "-").energy)
    return np.sort(np.asarray(energies))[:count]


def jc_state_vector(level: JCLevel, space: TruncatedSpace) -> np.ndarray:
    """Dressed state |n,+-> as a vector in the truncated product basis."""
    if level.n + 1 > space.n_trunc:
        raise ValueError(f"sector {level.n} needs n_trunc >= {level.n + 1}")
    vec = np.zeros(space.total_dim)
    if level.branch == "+":
        vec[space.basis_index(level.n, 1)] = level.c_n
        vec[space.basis_index(level.n + 1, 0)] = level.d_n
    else:
        vec[space.basis_index(level.n, 1)] = level.d_n
        vec[space.basis_index(level.n + 1, 0)] = -level.c_n
    return vec


def find_degenerate_coupling(n: int, delta: float, omega: float = 1.0) -> float:
    """Coupling g* > 0 at which E_{n,+} = E_{n+1,-}.

    Solves Omega_n(g) + Omega_{n+1}(g) = 2 w by bisection on (0, w] to
    1e-10 relative precision.  The left-hand side grows monotonically in g
    from 2|delta|, so a solution exists iff |delta| < w; the bracket sign
    check is performed rather than assumed.  Detunings <= 0 are rejected:
    the crossing being perturbed exists on the delta > 0 side.
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if n < 0:
        raise ValueError(f"sector index must be >= 0, got {n}")

    def excess(g: float) -> float:
        return rabi_splitting(n, delta, g) + rabi_splitting(n + 1, delta, g) - 2.0 * omega

    lo, hi = 0.0, omega
    if excess(lo) >= 0.0 or excess(hi) <= 0.0:
        raise NoDegeneracyError(
            f"no degeneracy of ({n},+) and ({n + 1},-) for delta = {delta}: "
            "no sign change on (0, omega]"
        )
    while hi - lo > 1e-10 * hi:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def degenerate_perturbation(n: int, delta: float, epsilon: float, omega: float = 1.0) -> DegeneratePerturbation:
    """First-order degenerate perturbation theory at the (n,+)/(n+1,-) crossing.

    The drive couples the two crossing dressed states through their shared
    |n+1> photon component only, giving off-diagonal element
    eps D_n D_{n+1} and zero diagonal elements, hence the symmetric
    first-order splitting +- eps D_n D_{n+1}.  Perturbation theory needs
    eps well below every other scale; eps >= 0.2 g* is rejected and
    eps > 0.1 g* draws a warning.
    """
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    g_star = find_degenerate_coupling(n, delta, omega)
    if epsilon >= 0.2 * g_star:
        raise ValueError(
            f"epsilon too large for first-order treatment: "
            f"epsilon/g_star = {epsilon / g_star:.3f} >= 0.2"
        )
    if epsilon > 0.1 * g_star:
        warnings.warn(
            f"epsilon/g_star = {epsilon / g_star:.3f} > 0.1: "
            "first-order splitting may be visibly inaccurate",
            stacklevel=2,
        )
    params = ModelParams(omega0=omega + delta, g=g_star, epsilon=0.0, omega=omega)
    lower = jc_spectrum(params, n, "+")
    upper = jc_spectrum(params, n + 1, "-")
    shift = epsilon * lower.d_n * upper.d_n
    return DegeneratePerturbation(
        n=n,
        g_star=g_star,
        e0=lower.energy,
        e1_plus=shift,
        e1_minus=-shift,
        entropy=perturbed_entropy(n, delta, omega),
    )


def perturbed_reduced_density(n: int, delta: float, omega: float = 1.0, combination: str = "plus") -> np.ndarray:
    """Atomic reduced density matrix of a zeroth-order state at the crossing.

    For phi = (|n,+> +- |n+1,->)/sqrt(2) the atomic matrix in the (|e>, |g>)
    ordering is

        1/2 [[C_n^2 + D_{n+1}^2,  +- D_n D_{n+1}],
             [+- D_n D_{n+1},     D_n^2 + C_{n+1}^2]].

    The leading 1/2 makes the trace one, as required for a state built from
    the normalized combination.
    """
    if combination not in ("plus", "minus"):
        raise ValueError(f"combination must be 'plus' or 'minus', got {combination!r}")
    g_star = find_degenerate_coupling(n, delta, omega)
    params = ModelParams(omega0=omega + delta, g=g_star, epsilon=0.0, omega=omega)
    lo = jc_spectrum(params, n, "+")
    hi = jc_spectrum(params, n + 1, "-")
    off = lo.d_n * hi.d_n
    if combination == "minus":
        off = -off
    return 0.5 * np.array(
        [
            [lo.c_n**2 + hi.d_n**2, off],
            [off, lo.d_n**2 + hi.c_n**2],
        ]
    )


def perturbed_entropy(n: int, delta: float, omega: float = 1.0, combination: str = "plus") -> float:
    """Entropy in bits of the zeroth-order state at the (n,+)/(n+1,-) crossing."""
    rho = perturbed_reduced_density(n, delta, omega, combination)
    return entropy_from_eigenvalues(np.linalg.eigvalsh(rho))
