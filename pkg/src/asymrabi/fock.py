"""Truncated Fock-space and two-level operators as dense real matrices.

Everything downstream works on the tensor product of one bosonic mode
(truncated at occupation ``n_trunc``) and one two-level atom.  The basis
ordering is fixed once here: combined index ``i = 2*m + s`` where ``m`` is
the photon number and ``s`` is the atom index (0 for the ground state |g>,
1 for the excited state |e>).  The atom index varies fastest, which makes
the atomic partial trace a cheap stride-2 contraction.

All matrices are real; Hermitian constructions are exactly symmetric
(no rounding enters construction), so symmetric eigensolvers apply.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Dense kron products beyond this dimension are almost certainly a mistake
# (a 8192^2 float64 matrix is 512 MB).
DEFAULT_MAX_KRON_DIM = 8192

ATOM_GROUND = 0
ATOM_EXCITED = 1


@dataclass(frozen=True)
class TruncatedSpace:
    """Truncated atom (x) field product space.

    ``n_trunc`` is the largest retained Fock occupation, so the field space
    has dimension ``n_trunc + 1`` and the product space ``2 * (n_trunc + 1)``.
    """

    n_trunc: int

    def __post_init__(self):
        if self.n_trunc < 1:
            raise ValueError(f"n_trunc must be >= 1, got {self.n_trunc}")

    @property
    def field_dim(self) -> int:
        return self.n_trunc + 1

    @property
    def total_dim(self) -> int:
        return 2 * (self.n_trunc + 1)

    def basis_index(self, m: int, s: int) -> int:
        """Combined basis index of |m, s> (atom index fastest)."""
        if not (0 <= m <= self.n_trunc and s in (0, 1)):
            raise ValueError(f"basis state (m={m}, s={s}) outside space")
        return 2 * m + s


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense real square matrix with an optional exact-symmetry guarantee.

    When ``hermitian`` is set the entries satisfy ``max|A - A^T| == 0``
    bitwise; the constructor enforces this.  Entries are frozen after
    construction so instances are safe to share across threads.
    """

    entries: np.ndarray
    hermitian: bool = field(default=False)

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"operator must be square, got shape {arr.shape}")
        if self.hermitian and not np.array_equal(arr, arr.T):
            raise ValueError("hermitian flag set but entries are not exactly symmetric")
        object.__setattr__(self, "entries", arr)
        arr.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def annihilation(n_trunc: int) -> OperatorMatrix:
    """Bosonic annihilation operator a with a[m-1, m] = sqrt(m)."""
    if n_trunc < 1:
        raise ValueError(f"n_trunc must be >= 1, got {n_trunc}")
    return OperatorMatrix(np.diag(np.sqrt(np.arange(1.0, n_trunc + 1)), k=1))


def number(n_trunc: int) -> OperatorMatrix:
    """Number operator a^dag a, built as an exact integer diagonal.

    Constructed directly (not as a matrix product) so its eigenvalues are
    exactly {0, 1, ..., n_trunc} with no floating-point residue from
    sqrt(m)**2.
    """
    if n_trunc < 1:
        raise ValueError(f"n_trunc must be >= 1, got {n_trunc}")
    return OperatorMatrix(np.diag(np.arange(n_trunc + 1, dtype=float)), hermitian=True)


def identity(dim: int) -> OperatorMatrix:
    return OperatorMatrix(np.eye(dim), hermitian=True)


def position(n_trunc: int, omega: float = 1.0) -> OperatorMatrix:
    """Unit-mass coordinate x = (a + a^dag) / sqrt(2 omega)."""
    a = annihilation(n_trunc).entries
    return OperatorMatrix((a + a.T) / np.sqrt(2.0 * omega), hermitian=True)


def momentum_squared(n_trunc: int, omega: float = 1.0) -> OperatorMatrix:
    """p^2 for p = i sqrt(omega/2) (a^dag - a), assembled without complex arithmetic.

    p itself is imaginary in this basis; only its square is needed and that
    is real: p^2 = -(omega/2) (a^dag - a)^2.
    """
    a = annihilation(n_trunc).entries
    d = a.T - a
    p2 = -(omega / 2.0) * (d @ d)
    return OperatorMatrix(0.5 * (p2 + p2.T), hermitian=True)


def pauli(which: str) -> OperatorMatrix:
    """2x2 atom operators in the ordered basis (|g>, |e>).

    Supported: "x", "z", "plus", "minus".  sigma_y is deliberately not
    provided: it is imaginary in this basis and all constructions here stay
    real (the pi/4 y-rotation appears only through its already-rotated
    Hamiltonian in :mod:`asymrabi.models`).
    """
    if which == "plus":  # |e><g|
        return OperatorMatrix(np.array([[0.0, 0.0], [1.0, 0.0]]))
    if which == "minus":  # |g><e|
        return OperatorMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
    if which == "x":
        return OperatorMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]), hermitian=True)
    if which == "z":
        return OperatorMatrix(np.diag([-1.0, 1.0]), hermitian=True)
    if which == "y":
        raise ValueError("sigma_y is excluded: all arithmetic is kept real")
    raise ValueError(f"unknown Pauli label {which!r}")


def excited_projector() -> OperatorMatrix:
    """sigma_plus sigma_minus = |e><e|."""
    return OperatorMatrix(np.diag([0.0, 1.0]), hermitian=True)


def kron(A: OperatorMatrix, B: OperatorMatrix, max_dim: int = DEFAULT_MAX_KRON_DIM) -> OperatorMatrix:
    """Kronecker product consistent with the fixed basis ordering.

    The first factor is the slow (field) index, the second the fast (atom)
    index, matching ``i = 2*m + s`` when B is the 2x2 atom factor.
    """
    out_dim = A.dim * B.dim
    if out_dim > max_dim:
        raise ValueError(f"kron output dimension {out_dim} exceeds limit {max_dim}")
    herm = A.hermitian and B.hermitian
    return OperatorMatrix(np.kron(A.entries, B.entries), hermitian=herm)
