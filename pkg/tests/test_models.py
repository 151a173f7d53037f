import numpy as np
import pytest

from asymrabi.fock import TruncatedSpace
from asymrabi.jc_analytic import jc_energies_sorted
from asymrabi.models import (
    CONVENTION_HALF_SIGMA_Z,
    CONVENTION_SIGMA_PLUS_MINUS,
    ModelParams,
    build_asym_qjc,
    build_asym_qrm,
    build_h0_h1_split,
    build_hamiltonian,
    build_polaron_frame,
)


def lowest(H, k):
    import scipy.linalg

    return scipy.linalg.eigvalsh(H.dense, subset_by_index=[0, k - 1])


def reference_asym_qrm(params, n_trunc):
    """Independent oracle: matrix elements written out state by state.

    <m', s'| H |m, s> assembled from the defining operator actions, with no
    kron products and no shared code with the builders.
    """
    dim = 2 * (n_trunc + 1)
    H = np.zeros((dim, dim))
    w, w0, g, eps = params.omega, params.omega0, params.g, params.epsilon
    for m in range(n_trunc + 1):
        for s in (0, 1):
            i = 2 * m + s
            H[i, i] += w * m + w0 * s
            # [g (a^dag + a) + eps] flips the atom
            j = 2 * m + (1 - s)
            H[j, i] += eps
            if m + 1 <= n_trunc:
                H[2 * (m + 1) + (1 - s), i] += g * np.sqrt(m + 1)
            if m - 1 >= 0:
                H[2 * (m - 1) + (1 - s), i] += g * np.sqrt(m)
    return H


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(omega0=1.0, g=0.1, omega=0.0)
    with pytest.raises(ValueError):
        ModelParams(omega0=-0.5, g=0.1)
    with pytest.raises(ValueError):
        ModelParams(omega0=1.0, g=-0.1)
    with pytest.raises(ValueError):
        ModelParams(omega0=1.0, g=0.1, epsilon=-0.2)


def test_builders_symmetric_and_tagged():
    space = TruncatedSpace(30)
    p = ModelParams(omega0=1.0, g=0.4, epsilon=0.07)
    rabi = build_asym_qrm(p, space)
    jc = build_asym_qjc(p, space)
    rot = build_polaron_frame(p, space)
    for H in (rabi, jc, rot):
        assert np.max(np.abs(H.dense - H.dense.T)) == 0.0
    assert rabi.model_tag == "asym_qrm"
    assert rabi.energy_offset_convention == CONVENTION_SIGMA_PLUS_MINUS
    assert jc.model_tag == "asym_qjc"
    assert jc.energy_offset_convention == CONVENTION_HALF_SIGMA_Z
    # the undriven special cases re-tag
    p0 = ModelParams(omega0=1.0, g=0.4, epsilon=0.0)
    assert build_asym_qrm(p0, space).model_tag == "qrm"
    assert build_asym_qjc(p0, space).model_tag == "qjc"


def test_decoupled_limit_spectrum_exact():
    # g = eps = 0: spectrum is {m w + s w0} exactly
    space = TruncatedSpace(9)
    p = ModelParams(omega0=0.63, g=0.0, epsilon=0.0, omega=1.1)
    got = np.sort(np.linalg.eigvalsh(build_asym_qrm(p, space).dense))
    expected = np.sort(
        [1.1 * m + 0.63 * s for m in range(10) for s in (0, 1)]
    )
    np.testing.assert_allclose(got, expected, atol=1e-12)


def test_asym_qrm_matches_independent_reference():
    space = TruncatedSpace(40)
    p = ModelParams(omega0=1.0, g=0.8, epsilon=0.0)
    H = build_asym_qrm(p, space).dense
    H_ref = reference_asym_qrm(p, 40)
    assert np.max(np.abs(H - H_ref)) == 0.0
    # and the spectra agree through an independent eigensolver entry point
    w_scipy = lowest(build_asym_qrm(p, space), 12)
    w_numpy = np.linalg.eigvalsh(H_ref)[:12]
    np.testing.assert_allclose(w_scipy, w_numpy, atol=1e-11)


def test_asym_qrm_reference_with_drive():
    space = TruncatedSpace(25)
    p = ModelParams(omega0=0.8, g=0.3, epsilon=0.12)
    assert np.max(np.abs(build_asym_qrm(p, space).dense - reference_asym_qrm(p, 25))) == 0.0


def test_deep_strong_ground_energy_scaling():
    # Leading order at strong coupling: E_1 = e0_const + w/2 with
    # e0_const = (w0 - w)/2 - g^2/w (displaced well plus its zero point).
    p = ModelParams(omega0=1.0, g=3.0, epsilon=0.0)
    e1 = lowest(build_asym_qrm(p, TruncatedSpace(200)), 1)[0]
    e0_const = 0.5 * (p.omega0 - p.omega) - p.g**2 / p.omega
    leading = e0_const + 0.5 * p.omega
    assert abs(e1 - leading) / abs(leading) < 0.02
    # and the -g^2/w term dominates the whole energy
    assert abs(e1 - (-p.g**2 / p.omega)) / (p.g**2 / p.omega) < 0.06


def test_asym_qjc_matches_closed_form_when_undriven():
    n_trunc = 60
    space = TruncatedSpace(n_trunc)
    p = ModelParams(omega0=1.5, g=0.3, epsilon=0.0)
    count = 40  # all sectors involved satisfy n + 1 < n_trunc
    numeric = lowest(build_asym_qjc(p, space), count)
    analytic = jc_energies_sorted(p, count)
    np.testing.assert_allclose(numeric, analytic, atol=1e-10)


def test_asym_qjc_conserves_excitation_number_when_undriven():
    space = TruncatedSpace(20)
    p = ModelParams(omega0=0.9, g=0.35, epsilon=0.0)
    H = build_asym_qjc(p, space).dense
    n_op = np.diag([m + s for m in range(21) for s in (0, 1)]).astype(float)
    comm = H @ n_op - n_op @ H
    assert np.max(np.abs(comm)) < 1e-13


def test_polaron_frame_spectral_equivalence():
    space = TruncatedSpace(60)
    p = ModelParams(omega0=1.0, g=0.5, epsilon=0.3)
    w_lab = np.linalg.eigvalsh(build_asym_qrm(p, space).dense)
    w_rot = np.linalg.eigvalsh(build_polaron_frame(p, space).dense)
    scale = np.maximum(np.abs(w_lab), 1.0)
    assert np.max(np.abs(w_lab - w_rot) / scale) < 1e-9


def test_polaron_frame_decoupled_limit():
    # g = 0, w0 = 0: spectrum {m w +- eps} exactly
    space = TruncatedSpace(7)
    p = ModelParams(omega0=0.0, g=0.0, epsilon=0.45)
    got = np.sort(np.linalg.eigvalsh(build_polaron_frame(p, space).dense))
    expected = np.sort([m + sign * 0.45 for m in range(8) for sign in (-1, 1)])
    np.testing.assert_allclose(got, expected, atol=1e-13)


def test_h0_h1_split_reassembles_polaron_frame():
    space = TruncatedSpace(35)
    p = ModelParams(omega0=0.85, g=1.2, epsilon=0.6)
    h0, h1 = build_h0_h1_split(p, space)
    rot = build_polaron_frame(p, space)
    assert np.max(np.abs(h0.dense + h1.dense - rot.dense)) < 1e-10


def test_h0_is_displaced_ladder_away_from_truncation_edge():
    space = TruncatedSpace(80)
    p = ModelParams(omega0=0.85, g=0.9, epsilon=0.2)
    h0, _ = build_h0_h1_split(p, space)
    e0_const = 0.5 * (p.omega0 - p.omega) - p.g**2 / p.omega
    got = np.sort(np.linalg.eigvalsh(h0.dense))[:16]
    # each well is a displaced oscillator: E = e0_const + w (n + 1/2) +- eps
    expected = np.sort(
        [e0_const + p.omega * (n + 0.5) + sign * p.epsilon for n in range(10) for sign in (-1, 1)]
    )[:16]
    np.testing.assert_allclose(got, expected, atol=1e-9)


def test_h1_norm_is_half_omega0():
    space = TruncatedSpace(12)
    p = ModelParams(omega0=0.85, g=1.2, epsilon=0.6)
    _, h1 = build_h0_h1_split(p, space)
    assert abs(np.linalg.norm(h1.dense, 2) - 0.5 * p.omega0) < 1e-12


def test_spectrum_even_in_drive_sign():
    # Mirror Hamiltonian with eps -> -eps built directly; spectra must match.
    space = TruncatedSpace(30)
    p = ModelParams(omega0=1.0, g=0.6, epsilon=0.17)
    H_plus = build_asym_qrm(p, space).dense
    H_minus = reference_asym_qrm(p, 30)
    # flip the drive term only
    H_minus = H_minus - 2 * 0.17 * np.kron(np.eye(31), np.array([[0.0, 1.0], [1.0, 0.0]]))
    w_plus = np.linalg.eigvalsh(H_plus)
    w_minus = np.linalg.eigvalsh(H_minus)
    np.testing.assert_allclose(w_plus, w_minus, atol=1e-11)


def test_build_hamiltonian_dispatch_and_guards():
    space = TruncatedSpace(5)
    p = ModelParams(omega0=1.0, g=0.2, epsilon=0.1)
    assert build_hamiltonian("asym_qjc", p, space).model_tag == "asym_qjc"
    with pytest.raises(ValueError, match="epsilon"):
        build_hamiltonian("qrm", p, space)
    with pytest.raises(ValueError, match="unknown model"):
        build_hamiltonian("nope", p, space)
