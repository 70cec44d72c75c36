import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

import quadboson as qb
from quadboson.core import DynamicalMatrix
from quadboson.errors import NullNorm, PairingFailure, WrongRegime
from quadboson.spectral import ModePair

from conftest import bcs, random_form


def test_single_mode_identity_transform():
    form = qb.build_form([[1.0]], [[0.0]])
    pairs, diags = qb.eigen_pairs(qb.dynamical_matrix(form))
    assert len(pairs) == 1
    assert pairs[0].lam == pytest.approx(1.0)
    assert pairs[0].hermitian_pair
    assert diags.eig_residual <= 1e-12
    assert max(diags.pairing_residuals) <= 1e-12
    bt = qb.normalize_pairs(pairs)
    assert np.abs(np.abs(bt.W) - np.eye(2)).max() <= 1e-12
    assert bt.metric_residual <= 1e-12


def test_representative_selection_uses_norm_sign():
    # in the indefinite-but-stable window the lower mode has a negative
    # frequency; +|lambda| is also an eigenvalue but with the wrong norm sign
    pairs, _ = qb.eigen_pairs(qb.dynamical_matrix(qb.bcs_form(bcs(0.97))))
    lams = [p.lam for p in pairs]
    assert lams[0] == pytest.approx(0.5431049156228644, abs=1e-12)
    assert lams[1] == pytest.approx(-0.05689508437713556, abs=1e-12)
    mdiag = np.array([1.0, 1.0, -1.0, -1.0])
    for p in pairs:
        usual = (p.w_plus.conj() @ (mdiag * p.w_plus)).real
        assert usual > 0


def test_complex_representatives_upper_half_plane():
    pairs, _ = qb.eigen_pairs(qb.dynamical_matrix(qb.bcs_form(bcs(1.2))))
    lams = np.array([p.lam for p in pairs])
    assert np.allclose(lams.imag, 0.6633249580710799, atol=1e-10)
    assert np.allclose(np.sort(lams.real), [-0.3, 0.3], atol=1e-10)
    assert not any(p.hermitian_pair for p in pairs)


def test_defective_case_forwarded_not_raised():
    pairs, diags = qb.eigen_pairs(qb.dynamical_matrix(qb.bcs_form(bcs(1.0))))
    assert diags.defective
    assert len(pairs) == 2
    assert not any(p.norm_ok for p in pairs)
    bad = [c for c in diags.clusters if c.geometric < c.algebraic]
    assert len(bad) == 2
    assert all(c.algebraic == 2 and c.geometric == 1 for c in bad)
    with pytest.raises(NullNorm):
        qb.normalize_pairs(pairs)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4), st.sampled_from([0.5, -0.5]))
def test_metric_identity_random(seed, n, shift):
    rng = np.random.default_rng(seed)
    form = random_form(rng, n, shift=shift)
    pairs, bt = qb.decompose(form)
    assert bt.metric_residual <= 1e-10
    assert np.abs(bt.W @ bt.W_inv - np.eye(2 * n)).max() <= 1e-9
    # both members of every pair are genuine eigenvectors
    ht = qb.dynamical_matrix(form).matrix
    scale = max(np.linalg.norm(ht, 2), 1.0)
    for p in pairs:
        res_p = np.abs(ht @ p.w_plus - p.lam * p.w_plus).max()
        res_m = np.abs(ht @ p.w_minus + p.lam * p.w_minus).max()
        assert res_p <= 1e-8 * scale * np.linalg.norm(p.w_plus)
        assert res_m <= 1e-8 * scale * np.linalg.norm(p.w_minus)
    # diagonalization: Wbar H W = diag(lam, lam)
    lams = np.array([p.lam for p in pairs])
    h = qb.extended_matrix(form).matrix
    target = np.diag(np.concatenate([lams, lams]))
    assert np.abs(qb.bar(bt.W) @ h @ bt.W - target).max() <= 1e-8


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4))
def test_hermitian_limit_real_spectrum(seed, n):
    # positive forms have real frequencies and Wbar = W+
    rng = np.random.default_rng(seed)
    form = random_form(rng, n, shift=0.4)
    pairs, bt = qb.decompose(form)
    assert all(p.hermitian_pair for p in pairs)
    assert np.abs(qb.bar(bt.W) - bt.W.conj().T).max() <= 1e-9


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4), st.sampled_from([0.3, -0.6]))
def test_spectrum_symmetry_under_negation_and_conjugation(seed, n, shift):
    rng = np.random.default_rng(seed)
    form = random_form(rng, n, shift=shift)
    ev = np.linalg.eigvals(qb.dynamical_matrix(form).matrix)
    scale = max(np.abs(ev).max(), 1.0)

    def match(target):
        return all(np.abs(ev - t).min() <= 1e-8 * scale for t in target)

    assert match(-ev)
    assert match(ev.conj())


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4), st.sampled_from([0.5, -0.5]))
def test_conjugate_eigenvector_map(seed, n, shift):
    # T w* is an eigenvector with eigenvalue -lambda*
    rng = np.random.default_rng(seed)
    form = random_form(rng, n, shift=shift)
    ht = qb.dynamical_matrix(form).matrix
    swap = qb.block_swap(n)
    pairs, _ = qb.eigen_pairs(qb.dynamical_matrix(form))
    scale = max(np.linalg.norm(ht, 2), 1.0)
    for p in pairs:
        w = swap @ p.w_plus.conj()
        res = np.abs(ht @ w - (-np.conj(p.lam)) * w).max()
        assert res <= 1e-8 * scale * np.linalg.norm(w)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4))
def test_sqrt_sandwich_identity(seed, n):
    # for positive semidefinite forms the generator spectrum matches the
    # hermitian sqrt(H) M sqrt(H), hence is real
    rng = np.random.default_rng(seed)
    form = random_form(rng, n, shift=0.2)
    ev = np.linalg.eigvals(qb.dynamical_matrix(form).matrix)
    assert np.abs(ev.imag).max() <= 1e-9 * max(np.abs(ev).max(), 1.0)
    ref = qb.sqrt_metric_spectrum(form)
    assert np.abs(np.sort(ev.real) - np.sort(ref)).max() <= 1e-9 * max(
        np.abs(ref).max(), 1.0)


def test_sqrt_sandwich_rejects_indefinite(rng):
    form = random_form(rng, 2, shift=-0.5)
    with pytest.raises(WrongRegime):
        qb.sqrt_metric_spectrum(form)


def test_degenerate_identical_oscillators():
    form = qb.build_form(np.eye(2), np.zeros((2, 2)))
    pairs, bt = qb.decompose(form)
    assert [p.lam for p in pairs] == [pytest.approx(1.0)] * 2
    assert bt.metric_residual <= 1e-12


def test_mixed_signature_degenerate_eigenvalue():
    # +omega carries one positive-norm and one negative-norm direction;
    # the second mode's representative is -omega
    form = qb.build_form(np.diag([1.0, -1.0]), np.zeros((2, 2)))
    pairs, bt = qb.decompose(form)
    lams = sorted(p.lam.real for p in pairs)
    assert lams == [pytest.approx(-1.0), pytest.approx(1.0)]
    report = qb.classify(form)
    assert report.classification is qb.StabilityClass.STABLE_NON_POSITIVE


def test_zero_mode_at_positivity_threshold():
    form = qb.bcs_form(bcs(float(np.sqrt(0.91))))
    report = qb.classify(form)
    assert report.classification is qb.StabilityClass.STABLE_NON_POSITIVE
    assert report.diagonalizable
    assert report.zero_mode_count == 1
    pairs, bt = qb.decompose(form)
    assert bt.metric_residual <= 1e-9
    # the finite transform still carries the analytic u, v at alpha = gamma
    u = np.sqrt((1.0 + 0.3) / 0.6)
    assert abs(bt.W[0, 0]) == pytest.approx(u, abs=1e-9)


def test_pairing_failure_on_asymmetric_spectrum():
    fake = DynamicalMatrix(1, np.diag([1.0, 2.0]).astype(complex))
    with pytest.raises(PairingFailure):
        qb.eigen_pairs(fake)


def test_null_norm_on_synthetic_pair():
    w_plus = np.array([1.0, 0.0], dtype=complex)
    w_minus = np.array([1.0, 0.0], dtype=complex)  # bar(w-) M w+ = 0
    pair = ModePair(1.0 + 0j, w_plus, w_minus, False, False)
    with pytest.raises(NullNorm):
        qb.normalize_pairs([pair])


def test_near_defective_warning():
    pairs, diags = qb.eigen_pairs(qb.dynamical_matrix(qb.bcs_form(bcs(1.0 - 1e-7))))
    assert any("near" in w or "small" in w for w in diags.warnings)


def test_classification_four_regimes():
    cases = [
        (0.5, qb.StabilityClass.POSITIVE_DEFINITE),
        (0.97, qb.StabilityClass.STABLE_NON_POSITIVE),
        (1.0, qb.StabilityClass.NON_DIAGONALIZABLE),
        (1.2, qb.StabilityClass.UNSTABLE_COMPLEX),
    ]
    for delta, expected in cases:
        report = qb.classify(qb.bcs_form(bcs(delta)))
        assert report.classification is expected, delta


def test_classification_invariants():
    tol = qb.Tolerances()
    for delta in (0.5, 0.97, 1.0, 1.2, float(np.sqrt(0.91))):
        report = qb.classify(qb.bcs_form(bcs(delta)), tol)
        freqs = report.mode_frequencies
        scale = max(np.abs(freqs).max(), 1.0)
        if report.classification is qb.StabilityClass.POSITIVE_DEFINITE:
            assert report.h_eigenvalues.min() > tol.eig
            assert np.abs(freqs.imag).max() <= tol.eig * scale
        elif report.classification is qb.StabilityClass.STABLE_NON_POSITIVE:
            assert report.h_eigenvalues.min() <= tol.eig
            assert np.abs(freqs.imag).max() <= tol.eig * scale
            assert report.diagonalizable
        elif report.classification is qb.StabilityClass.UNSTABLE_COMPLEX:
            assert np.abs(freqs.imag).max() > tol.eig * scale
        else:
            assert not report.diagonalizable


def test_modes_ordered_descending():
    for delta in (0.5, 1.2):
        report = qb.classify(qb.bcs_form(bcs(delta)))
        f = report.mode_frequencies
        assert (f[0].real, f[0].imag) >= (f[1].real, f[1].imag)


def test_report_serialization_roundtrip():
    report = qb.classify(qb.bcs_form(bcs(1.0)))
    doc = report.to_dict()
    assert doc["classification"] == "NonDiagonalizable"
    assert doc["defects"] and doc["defects"][0]["max_block"] == 2
    assert len(doc["mode_frequencies"]) == 2
    assert all(len(x) == 2 for x in doc["mode_frequencies"])


def test_degenerate_imaginary_eigenvalues():
    # two identical overcritical single modes: purely imaginary frequency
    # with multiplicity two, still diagonalizable
    form = qb.build_form(np.diag([0.3, 0.3]), np.diag([0.8, 0.8]))
    report = qb.classify(form)
    assert report.classification is qb.StabilityClass.UNSTABLE_COMPLEX
    assert report.diagonalizable
    y = np.sqrt(0.8 ** 2 - 0.3 ** 2)
    assert np.allclose(report.mode_frequencies, [1j * y, 1j * y], atol=1e-10)
    pairs, bt = qb.decompose(form)
    assert bt.metric_residual <= 1e-10
    h = qb.extended_matrix(form).matrix
    lams = np.array([p.lam for p in pairs])
    target = np.diag(np.concatenate([lams, lams]))
    assert np.abs(qb.bar(bt.W) @ h @ bt.W - target).max() <= 1e-9


def test_degenerate_full_complex_quadruples():
    # two identical overcritical pairing blocks: every member of the
    # complex quadruple is doubly degenerate
    a = np.zeros((4, 4), dtype=complex)
    a[:2, :2] = np.diag([1.3, 0.7])
    a[2:, 2:] = np.diag([1.3, 0.7])
    b = np.zeros((4, 4), dtype=complex)
    b[0, 1] = b[1, 0] = 1.2
    b[2, 3] = b[3, 2] = 1.2
    form = qb.build_form(a, b)
    pairs, bt = qb.decompose(form)
    assert bt.metric_residual <= 1e-9
    lams = np.array([p.lam for p in pairs])
    h = qb.extended_matrix(form).matrix
    target = np.diag(np.concatenate([lams, lams]))
    assert np.abs(qb.bar(bt.W) @ h @ bt.W - target).max() <= 1e-9
    ks = qb.invariants(bt).K
    prop = qb.propagate(qb.dynamical_matrix(form), 1.0)
    ubar = qb.bar(prop.U)
    for k in ks:
        assert np.abs(ubar @ k @ prop.U - k).max() <= 1e-9


def test_three_mode_composite_mixed_regimes():
    # a complex quadruple and a hermitian mode coexisting in one system:
    # an uncoupled oscillator appended to an unstable pairing block
    a = np.zeros((3, 3), dtype=complex)
    a[:2, :2] = [[1.3, 0.0], [0.0, 0.7]]
    a[2, 2] = 2.0
    b = np.zeros((3, 3), dtype=complex)
    b[0, 1] = b[1, 0] = 1.2
    form = qb.build_form(a, b)
    report = qb.classify(form)
    assert report.classification is qb.StabilityClass.UNSTABLE_COMPLEX
    lams = report.mode_frequencies
    assert lams[0] == pytest.approx(2.0, abs=1e-10)
    assert sorted(l.imag for l in lams[1:]) == [
        pytest.approx(0.6633249580710799, abs=1e-10)] * 2
    pairs, bt = qb.decompose(form)
    assert bt.metric_residual <= 1e-10
    h = qb.extended_matrix(form).matrix
    target = np.diag(np.concatenate([lams, lams]))
    assert np.abs(qb.bar(bt.W) @ h @ bt.W - target).max() <= 1e-9
    flags = [p.hermitian_pair for p in pairs]
    assert flags == [True, False, False]


def test_purely_imaginary_pair_full_pipeline():
    # inside the perturbed instability window the lower pair is purely
    # imaginary: the quadruple is self-conjugate and the generalized norm
    # still normalizes it
    form = qb.bcs_form(qb.BcsParams(1.0, 0.3, 0.95, 0.05))
    report = qb.classify(form)
    assert report.classification is qb.StabilityClass.UNSTABLE_COMPLEX
    lams = report.mode_frequencies
    assert abs(lams[0].imag) <= 1e-10 and lams[0].real > 0
    assert abs(lams[1].real) <= 1e-10 and lams[1].imag > 0
    pairs, bt = qb.decompose(form)
    assert bt.metric_residual <= 1e-10
    h = qb.extended_matrix(form).matrix
    target = np.diag(np.concatenate([lams, lams]))
    assert np.abs(qb.bar(bt.W) @ h @ bt.W - target).max() <= 1e-10
    df = qb.diagonal_form(bt, lams)
    assert list(df.hermitian_flags) == [True, False]
    assert np.abs(df.reconstruct_extended() - h).max() <= 1e-10


def test_spectrum_structure_jordan_blocks():
    clusters = qb.spectrum_structure(qb.dynamical_matrix(qb.bcs_form(bcs(1.0))))
    assert sorted(c.max_block for c in clusters) == [2, 2]
    clusters = qb.spectrum_structure(qb.dynamical_matrix(qb.bcs_form(bcs(0.5))))
    assert all(c.max_block == 1 and c.geometric == c.algebraic for c in clusters)
