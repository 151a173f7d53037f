"""Hamiltonian builders for the driven Rabi / Jaynes-Cummings family.

Four closely related models of one bosonic mode coupled to a driven
two-level atom, all assembled as dense real symmetric matrices on a
:class:`~asymrabi.fock.TruncatedSpace`:

* ``asym_qrm``   : H = w0 s+s-  + w a^dag a + [g (a^dag + a) + eps] sx
* ``asym_qjc``   : H = (w0/2) sz + w a^dag a + g (a^dag s- + a s+) + eps sx
* ``polaron``    : the pi/4 y-rotated form of ``asym_qrm``,
                   H = eps sz + (w0/2) sx + w a^dag a + g (a^dag + a) sz + w0/2
* ``qrm`` / ``qjc`` : the undriven (eps = 0) special cases.

The two families carry different constant offsets in the atomic term
(w0 s+s- versus (w0/2) sz differ by w0/2); each built matrix records its
offset convention so cross-model comparisons can be made on energy
differences E_n - E_1.

The y-rotation is never applied numerically.  The rotated Hamiltonian is
rebuilt from its closed form, which keeps every matrix real; the two
builders are unitarily equivalent, so their full spectra agree (the atom
rotation commutes with the field truncation).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import (
    OperatorMatrix,
    TruncatedSpace,
    annihilation,
    excited_projector,
    identity,
    kron,
    number,
    pauli,
    position,
)

# Truncation used for the published figures; overridable everywhere.
DEFAULT_N_TRUNC = 400

CONVENTION_SIGMA_PLUS_MINUS = "sigma_plus_minus"
CONVENTION_HALF_SIGMA_Z = "half_sigma_z"

MODEL_QRM = "qrm"
MODEL_ASYM_QRM = "asym_qrm"
MODEL_QJC = "qjc"
MODEL_ASYM_QJC = "asym_qjc"
MODEL_POLARON = "asym_qrm_polaron_frame"


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters; all energies in units of the field frequency.

    ``omega`` is kept as an explicit scale (default 1.0) so formulas stay
    dimensionally honest.  Negative drive amplitudes are not accepted: the
    spectrum is invariant under eps -> -eps (combined with the parity
    relabeling of the field), so eps >= 0 loses nothing.
    """

    omega0: float
    g: float
    epsilon: float = 0.0
    omega: float = 1.0

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.omega0 < 0:
            raise ValueError(f"omega0 must be >= 0, got {self.omega0}")
        if self.g < 0:
            raise ValueError(f"g must be >= 0, got {self.g}")
        if self.epsilon < 0:
            raise ValueError(
                f"epsilon must be >= 0, got {self.epsilon} "
                "(the spectrum is even in epsilon; use the mirror)"
            )

    def replace(self, **kw) -> "ModelParams":
        fields = {"omega0": self.omega0, "g": self.g, "epsilon": self.epsilon, "omega": self.omega}
        fields.update(kw)
        return ModelParams(**fields)


@dataclass(frozen=True)
class HamiltonianMatrix:
    params: ModelParams
    space: TruncatedSpace
    matrix: OperatorMatrix
    model_tag: str
    energy_offset_convention: str

    @property
    def dense(self) -> np.ndarray:
        return self.matrix.entries


def _field_and_atom_ops(space: TruncatedSpace):
    a = annihilation(space.n_trunc)
    adag = OperatorMatrix(a.entries.T)
    If = identity(space.field_dim)
    I2 = identity(2)
    return a, adag, If, I2


def build_asym_qrm(params: ModelParams, space: TruncatedSpace) -> HamiltonianMatrix:
    """Driven Rabi Hamiltonian w0 s+s- + w a^dag a + [g (a^dag + a) + eps] sx."""
    a, adag, If, I2 = _field_and_atom_ops(space)
    sx = pauli("x")
    x_field = OperatorMatrix(adag.entries + a.entries, hermitian=True)

    H = (
        params.omega0 * kron(If, excited_projector()).entries
        + params.omega * kron(number(space.n_trunc), I2).entries
        + params.g * kron(x_field, sx).entries
        + params.epsilon * kron(If, sx).entries
    )
    tag = MODEL_QRM if params.epsilon == 0 else MODEL_ASYM_QRM
    return HamiltonianMatrix(
        params=params,
        space=space,
        matrix=OperatorMatrix(H, hermitian=True),
        model_tag=tag,
        energy_offset_convention=CONVENTION_SIGMA_PLUS_MINUS,
    )


def build_asym_qjc(params: ModelParams, space: TruncatedSpace) -> HamiltonianMatrix:
    """Driven Jaynes-Cummings Hamiltonian (rotating-wave coupling).

    Uses the (w0/2) sz atomic term, i.e. energies sit w0/2 below the
    s+s- convention of :func:`build_asym_qrm`.
    """
    a, adag, If, I2 = _field_and_atom_ops(space)
    sp = pauli("plus")
    sm = pauli("minus")
    sx = pauli("x")

    coupling = kron(adag, sm).entries + kron(a, sp).entries
    H = (
        0.5 * params.omega0 * kron(If, pauli("z")).entries
        + params.omega * kron(number(space.n_trunc), I2).entries
        + params.g * coupling
        + params.epsilon * kron(If, sx).entries
    )
    tag = MODEL_QJC if params.epsilon == 0 else MODEL_ASYM_QJC
    return HamiltonianMatrix(
        params=params,
        space=space,
        matrix=OperatorMatrix(H, hermitian=True),
        model_tag=tag,
        energy_offset_convention=CONVENTION_HALF_SIGMA_Z,
    )


def build_polaron_frame(params: ModelParams, space: TruncatedSpace) -> HamiltonianMatrix:
    """Rotated driven Rabi Hamiltonian, assembled directly from its closed form.

    H = eps sz + (w0/2) sx + w a^dag a + g (a^dag + a) sz + w0/2.
    Spectrally identical to :func:`build_asym_qrm` (same offset convention:
    the constant w0/2 restores the s+s- zero of energy).
    """
    a, adag, If, I2 = _field_and_atom_ops(space)
    sz = pauli("z")
    x_field = OperatorMatrix(adag.entries + a.entries, hermitian=True)

    H = (
        params.epsilon * kron(If, sz).entries
        + 0.5 * params.omega0 * kron(If, pauli("x")).entries
        + params.omega * kron(number(space.n_trunc), I2).entries
        + params.g * kron(x_field, sz).entries
        + 0.5 * params.omega0 * np.eye(space.total_dim)
    )
    return HamiltonianMatrix(
        params=params,
        space=space,
        matrix=OperatorMatrix(H, hermitian=True),
        model_tag=MODEL_POLARON,
        energy_offset_convention=CONVENTION_SIGMA_PLUS_MINUS,
    )


def displaced_well_hamiltonian(params: ModelParams, space: TruncatedSpace, branch: int) -> OperatorMatrix:
    """Single displaced-well Hamiltonian h_s = p^2/2 + V_s for branch s = +-1.

    V_s = (w^2/2) (x + x_s)^2 + s*eps with displacement
    x_s = sqrt(2 w) s g / w^2.  The kinetic-plus-quadratic core
    p^2/2 + (w^2/2) x^2 is assembled in its normal-ordered form
    w (a^dag a + 1/2); on the truncated space the raw matrix square of x
    and p misses [a, a^dag] = 1 in the top Fock level, and the normal
    form is what keeps h_s consistent with the rotated Hamiltonian
    exactly, not just far from the truncation edge.
    """
    if branch not in (+1, -1):
        raise ValueError(f"branch must be +1 or -1, got {branch}")
    w, g, eps = params.omega, params.g, params.epsilon
    x = position(space.n_trunc, w).entries
    x_s = np.sqrt(2.0 * w) * branch * g / w**2
    core = w * (number(space.n_trunc).entries + 0.5 * np.eye(space.field_dim))
    h = core + (w**2) * x_s * x + (0.5 * w**2 * x_s**2 + branch * eps) * np.eye(space.field_dim)
    return OperatorMatrix(h, hermitian=True)


def build_h0_h1_split(params: ModelParams, space: TruncatedSpace):
    """Displaced-oscillator / spin-flip split of the rotated Hamiltonian.

    Returns (H0, H1) with
    H0 = sum_s h_s |s><s| + e0,   e0 = (w0 - w)/2 - g^2/w,
    H1 = (w0/2) sum_s |s><s-bar|,
    such that H0 + H1 equals :func:`build_polaron_frame` elementwise.
    In the rotated frame the branch s = +1 is the atom basis state |e>
    (sz eigenvalue +1) and s = -1 is |g>.
    """
    e0 = 0.5 * (params.omega0 - params.omega) - params.g**2 / params.omega
    h_plus = displaced_well_hamiltonian(params, space, +1)
    h_minus = displaced_well_hamiltonian(params, space, -1)
    proj_plus = OperatorMatrix(np.diag([0.0, 1.0]), hermitian=True)
    proj_minus = OperatorMatrix(np.diag([1.0, 0.0]), hermitian=True)

    H0 = (
        kron(h_plus, proj_plus).entries
        + kron(h_minus, proj_minus).entries
        + e0 * np.eye(space.total_dim)
    )
    H1 = 0.5 * params.omega0 * kron(identity(space.field_dim), pauli("x")).entries

    h0 = HamiltonianMatrix(
        params=params,
        space=space,
        matrix=OperatorMatrix(H0, hermitian=True),
        model_tag="polaron_h0",
        energy_offset_convention=CONVENTION_SIGMA_PLUS_MINUS,
    )
    h1 = HamiltonianMatrix(
        params=params,
        space=space,
        matrix=OperatorMatrix(H1, hermitian=True),
        model_tag="polaron_h1",
        energy_offset_convention=CONVENTION_SIGMA_PLUS_MINUS,
    )
    return h0, h1


_BUILDERS = {
    MODEL_QRM: build_asym_qrm,
    MODEL_ASYM_QRM: build_asym_qrm,
    MODEL_QJC: build_asym_qjc,
    MODEL_ASYM_QJC: build_asym_qjc,
    MODEL_POLARON: build_polaron_frame,
}


def build_hamiltonian(model_tag: str, params: ModelParams, space: TruncatedSpace) -> HamiltonianMatrix:
    """Dispatch a builder by model tag (see module docstring for the tags)."""
    try:
        builder = _BUILDERS[model_tag]
    except KeyError:
        raise ValueError(f"unknown model tag {model_tag!r}; known: {sorted(_BUILDERS)}") from None
    if model_tag in (MODEL_QRM, MODEL_QJC) and params.epsilon != 0:
        raise ValueError(f"model {model_tag!r} requires epsilon = 0, got {params.epsilon}")
    return builder(params, space)
