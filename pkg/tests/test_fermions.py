import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from xxquench import exact
from xxquench.chain import build_profile, hopping_matrix, ion_longrange_matrix, sign_matrix, spin_hamiltonian
from xxquench.fermions import (
    CorrelationMatrix,
    block_entropy,
    diagonalize,
    initial_state_spec,
    multiparticle_amplitude,
    neel_correlations_via_transfer,
    propagator,
    quench_correlations,
    wigner_D,
    wigner_d_propagator,
    wigner_d_propagator_matrix,
    wigner_small_d,
)

PROFILES = [("uniform", None), ("pst", None), ("minimal", 0.4)]


def spectrum(kind, N, boundary=None):
    return diagonalize(hopping_matrix(build_profile(kind, N, boundary)))


def test_diagonalize_two_sites():
    spec = spectrum("pst", 2)
    np.testing.assert_allclose(spec.E, [-0.5, 0.5], atol=1e-15)


@pytest.mark.parametrize("kind,boundary", PROFILES)
def test_spectrum_invariants(kind, boundary):
    h = hopping_matrix(build_profile(kind, 7, boundary))
    spec = diagonalize(h)
    np.testing.assert_allclose(spec.g @ spec.g.T, np.eye(7), atol=1e-12)
    np.testing.assert_allclose(spec.g @ h.A @ spec.g.T, np.diag(spec.E), atol=1e-10)
    np.testing.assert_allclose(spec.E, -spec.E[::-1], atol=1e-10)


@pytest.mark.parametrize("N", [2, 5, 10, 31])
def test_pst_spectrum_equally_spaced(N):
    np.testing.assert_allclose(np.diff(spectrum("pst", N).E), 2 / N, atol=1e-12)


def test_diagonalize_rejects_asymmetric():
    with pytest.raises(ValueError):
        diagonalize(np.array([[0, 1.0], [0.5, 0]]))


def test_propagator_two_site_closed_form():
    # A = [[0, 1/2], [1/2, 0]]: f(t) = cos(t/2) I - i sin(t/2) X
    spec = spectrum("pst", 2)
    for t in [0.0, 0.4, np.pi, 5.0]:
        expected = np.array([[np.cos(t / 2), -1j * np.sin(t / 2)], [-1j * np.sin(t / 2), np.cos(t / 2)]])
        np.testing.assert_allclose(propagator(spec, t).f, expected, atol=1e-14)
    assert abs(propagator(spec, np.pi).f[1, 0]) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("N", [2, 3, 6, 9, 20])
def test_pst_perfect_mirror(N):
    f = propagator(spectrum("pst", N), np.pi * N / 2).f
    np.testing.assert_allclose(f, (-1j) ** (N - 1) * np.eye(N)[::-1], atol=1e-11)


@settings(max_examples=40, deadline=None)
@given(N=st.integers(2, 12), k=st.integers(0, 2),
       t1=st.floats(-20, 20), t2=st.floats(-20, 20))
def test_propagator_group_properties(N, k, t1, t2):
    kind, b = PROFILES[k]
    spec = spectrum(kind, N, b)
    f1, f2 = spec.amplitudes(t1), spec.amplitudes(t2)
    np.testing.assert_allclose(f1 @ f1.conj().T, np.eye(N), atol=1e-10)
    np.testing.assert_allclose(f1 @ f2, spec.amplitudes(t1 + t2), atol=1e-10)
    np.testing.assert_allclose(spec.amplitudes(0.0), np.eye(N), atol=1e-12)
    # persymmetric chains propagate mirror-symmetrically
    np.testing.assert_allclose(f1, f1[::-1, ::-1], atol=1e-10)


def test_propagator_matches_expm():
    h = hopping_matrix(build_profile("minimal", 9, 0.3))
    spec = diagonalize(h)
    np.testing.assert_allclose(spec.amplitudes(3.7), scipy.linalg.expm(-3.7j * h.A), atol=1e-12)


def test_neel_initial_correlations():
    init = initial_state_spec("neel", 6)
    np.testing.assert_array_equal(init.C0, np.diag([1, 0, 1, 0, 1, 0]))
    np.testing.assert_array_equal(init.C0, (np.eye(6) + sign_matrix(6)) / 2)
    assert init.M == 3
    assert initial_state_spec("neel", 7).M == 4


def test_bell_series_initial_correlations():
    init = initial_state_spec("bell-series", 4)
    expected = np.array([[0.5, -0.5, 0, 0], [-0.5, 0.5, 0, 0], [0, 0, 0.5, -0.5], [0, 0, -0.5, 0.5]])
    np.testing.assert_array_equal(init.C0, expected)
    # string table entries carry (-1)^(N/2)
    assert init.string_table[0, 1] == 0.5 and init.string_table[1, 2] == 0
    assert initial_state_spec("bell-series", 6).string_table[0, 0] == -0.5
    with pytest.raises(ValueError):
        initial_state_spec("bell-series", 5)


def test_quench_t0_is_initial():
    spec = spectrum("pst", 6)
    C = quench_correlations(spec, initial_state_spec("neel", 6), 0.0)
    np.testing.assert_allclose(C.C, np.diag([1, 0, 1, 0, 1, 0]), atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(N=st.integers(2, 14), k=st.integers(0, 2), t=st.floats(0, 40))
def test_transfer_identity_and_correlation_invariants(N, k, t):
    kind, b = PROFILES[k]
    spec = spectrum(kind, N, b)
    init = initial_state_spec("neel", N)
    C = quench_correlations(spec, init, t).C
    np.testing.assert_allclose(C, neel_correlations_via_transfer(spec, t), atol=1e-12)
    np.testing.assert_allclose(C, C.conj().T, atol=1e-13)
    lam = np.linalg.eigvalsh(C)
    assert lam.min() > -1e-9 and lam.max() < 1 + 1e-9
    assert np.trace(C).real == pytest.approx((N + 1) // 2, abs=1e-10)


def test_pst_quarter_period_end_correlation():
    # at t*/2 the end sites share one delocalised fermion: |C_14| = 1/2
    spec = spectrum("pst", 4)
    C = quench_correlations(spec, initial_state_spec("neel", 4), np.pi * 4 / 4).C
    assert abs(C[0, 3]) == pytest.approx(0.5, abs=1e-12)


def test_quench_rejects_long_range():
    spec = diagonalize(ion_longrange_matrix(build_profile("pst", 6)))
    with pytest.raises(ValueError):
        quench_correlations(spec, initial_state_spec("neel", 6), 1.0)


def test_block_entropy_product_state_and_errors():
    C = np.diag([1.0, 0, 1, 0])
    assert block_entropy(C, range(2)) == 0.0
    with pytest.raises(ValueError):
        block_entropy(C, [])
    with pytest.raises(ValueError):
        block_entropy(C, [4])
    with pytest.raises(ValueError):
        block_entropy(np.diag([1.1, 0, 0, 0]), [0])


@pytest.mark.parametrize("N", [6, 7])
def test_block_entropy_nested_bell(N):
    spec = spectrum("pst", N)
    C = quench_correlations(spec, initial_state_spec("neel", N), np.pi * N / 4)
    assert block_entropy(C, range(N // 2)) == pytest.approx(N // 2, abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(N=st.integers(2, 12), cut=st.integers(1, 11), t=st.floats(0, 30))
def test_block_entropy_complement_symmetry(N, cut, t):
    cut = min(cut, N - 1)
    spec = spectrum("minimal", N, 0.45) if N > 2 else spectrum("pst", 2)
    C = quench_correlations(spec, initial_state_spec("neel", N), t)
    assert block_entropy(C, range(cut)) == pytest.approx(block_entropy(C, range(cut, N)), abs=1e-9)


def test_block_entropy_matches_exact_engine():
    N = 8
    p = build_profile("minimal", N, 0.35)
    spec = diagonalize(hopping_matrix(p))
    H = exact.build_spin_hamiltonian(spin_hamiltonian("xx", hopping_matrix(p)))
    psi = exact.evolve_state(H, exact.initial_state("neel", N), 2.7)
    C = quench_correlations(spec, initial_state_spec("neel", N), 2.7)
    for block in (range(1), range(3), range(4), range(2, 6)):
        assert block_entropy(C, block) == pytest.approx(exact.entanglement_entropy(psi, block), abs=1e-9)


def test_multiparticle_amplitude_basics():
    spec = spectrum("pst", 5)
    P = propagator(spec, 1.1)
    assert multiparticle_amplitude(P, [2], [4]) == pytest.approx(P.f[2, 4], abs=1e-15)
    P0 = propagator(spec, 0.0)
    assert multiparticle_amplitude(P0, [0, 2], [0, 2]) == pytest.approx(1.0)
    assert multiparticle_amplitude(P0, [0, 3], [0, 2]) == pytest.approx(0.0)
    with pytest.raises(ValueError):
        multiparticle_amplitude(P, [0, 1], [0])
    with pytest.raises(ValueError):
        multiparticle_amplitude(P, [1, 0], [0, 2])


def test_multiparticle_amplitude_matches_exact_engine():
    N = 4
    p = build_profile("pst", N)
    spec = diagonalize(hopping_matrix(p))
    t = 1.7
    P = propagator(spec, t)
    H = exact.build_spin_hamiltonian(spin_hamiltonian("xx", hopping_matrix(p)))
    psi = exact.evolve_state(H, exact.initial_state("neel", N), t)
    total = 0.0
    for a in range(N):
        for b in range(a + 1, N):
            amp = multiparticle_amplitude(P, [a, b], [0, 2])
            bits = ["1"] * N
            bits[a] = bits[b] = "0"
            assert amp == pytest.approx(psi[int("".join(bits), 2)], abs=1e-10)
            total += abs(amp) ** 2
    assert total == pytest.approx(1.0, abs=1e-12)


def _spin_ops(two_j):
    j = two_j / 2
    m = j - np.arange(two_j + 1)
    jp = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), 1)
    Jy = (jp - jp.T) / 2j
    return np.diag(m), Jy


@pytest.mark.parametrize("two_j", [0, 1, 2, 5, 12, 40, 63, 127])
@pytest.mark.parametrize("beta", [0.0, 0.3, -1.9, 3.1])
def test_wigner_small_d_against_expm(two_j, beta):
    _, Jy = _spin_ops(two_j)
    w, V = np.linalg.eigh(Jy)
    expected = (V @ np.diag(np.exp(-1j * beta * w)) @ V.conj().T).real
    np.testing.assert_allclose(wigner_small_d(two_j, beta), expected, atol=1e-12)


def test_wigner_D_euler_composition():
    Jz, Jy = _spin_ops(4)
    a, b, g = 0.4, -1.2, 2.2
    expected = scipy.linalg.expm(-1j * a * Jz) @ scipy.linalg.expm(-1j * b * Jy) @ scipy.linalg.expm(-1j * g * Jz)
    np.testing.assert_allclose(wigner_D(4, a, b, g), expected, atol=1e-12)


@pytest.mark.parametrize("N", [2, 6, 11])
def test_wigner_d_propagator(N):
    assert wigner_d_propagator(N, 0.0, 1, 1) == pytest.approx(1.0)
    assert wigner_d_propagator(N, 0.0, 0, 1) == pytest.approx(0.0)
    mirror = wigner_d_propagator_matrix(N, np.pi * N / 2)
    np.testing.assert_allclose(mirror, (-1j) ** (N - 1) * np.eye(N)[::-1], atol=1e-12)
    np.testing.assert_allclose(wigner_d_propagator_matrix(N, 1.3), spectrum("pst", N).amplitudes(1.3), atol=1e-10)
    with pytest.raises(ValueError):
        wigner_d_propagator(N, 1.0, N, 0)


def test_correlation_matrix_container():
    C = CorrelationMatrix(np.eye(3), "neel", 0.0)
    assert C.N == 3
