"""Displaced-oscillator (polaron) predictions for the deep-strong regime.

When the coupling dominates, the rotated Hamiltonian separates into two
harmonic wells V_+- displaced by x_+- = +-sqrt(2w) g / w^2 and shifted by
+-eps, with the spin-flip term (w0/2) sx as the perturbation that reopens
the well-to-well level crossings.  To leading order the eigenenergies are
the interleaved ladders

    E0_{n,+-} = n w +- eps  (up to the constant e0 = (w0 - w)/2 - g^2/w),

so crossings between the wells, and with them the entanglement
preservation of sorted level n, occur exactly at eps = m w / 2 for
m = 0 .. n-1.  Everything here is pure ladder arithmetic; the cross-check
against full diagonalization lives in the test suite, not in this module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import ModelParams


@dataclass(frozen=True)
class PolaronLadder:
    """Leading-order eigenenergies n w +- eps of the two displaced wells.

    ``energies`` has shape (n_max + 1, 2); column 0 is the lower (-) branch,
    column 1 the upper (+) branch.  Energies are relative to the constant
    ``e0_const``; absolute values are e0_const + energies.
    """

    params: ModelParams
    e0_const: float
    displacement: float  # x_+ ; the minus well sits at -displacement
    energies: np.ndarray

    def branch(self, sign: str) -> np.ndarray:
        if sign not in ("+", "-"):
            raise ValueError(f"branch must be '+' or '-', got {sign!r}")
        return self.energies[:, 1 if sign == "+" else 0]


def polaron_energies(params: ModelParams, n_max: int) -> PolaronLadder:
    """Ladder energies E0_{n,+-} = n w +- eps for n = 0 .. n_max."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    w, g, eps = params.omega, params.g, params.epsilon
    n = np.arange(n_max + 1, dtype=float)
    energies = np.stack([n * w - eps, n * w + eps], axis=1)
    return PolaronLadder(
        params=params,
        e0_const=0.5 * (params.omega0 - w) - g**2 / w,
        displacement=np.sqrt(2.0 * w) * g / w**2,
        energies=energies,
    )


def predicted_preservation_points(n: int, omega: float = 1.0) -> np.ndarray:
    """Drive amplitudes m w/2, m = 0 .. n-1, where level n keeps its entanglement."""
    if n < 1:
        raise ValueError(f"level index must be >= 1, got {n}")
    return 0.5 * omega * np.arange(n, dtype=float)


def crossing_partners(n: int, m: int):
    """Ladder states that become degenerate at eps = m w / 2 for level n.

    In 1-based well labels (k-th level of a well has ladder index k - 1),
    the k = n state of the lower well meets the k = n - m state of the upper
    well: (n - m)w/... explicitly, (n)w - eps = (n - m)w + eps at
    eps = m w / 2.  Returns ((n - m, "+"), (n, "-")).
    """
    if n < 1:
        raise ValueError(f"level index must be >= 1, got {n}")
    if not (0 <= m <= n - 1):
        raise ValueError(f"m must satisfy 0 <= m <= n - 1 = {n - 1}, got {m}")
    return ((n - m, "+"), (n, "-"))
