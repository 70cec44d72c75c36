"""Non-hermitian eigenproblem, mode pairing, and stability classification.

The generator M @ Hmat of a valid form has a spectrum symmetric under both
negation and conjugation.  Eigenvalues are matched into n pairs
(lambda, -lambda); each pair carries two eigenvectors normalized against
the generalized bilinear norm wbar_minus . M . w_plus = 1, which stays
finite for complex frequencies where the usual sesquilinear norm vanishes.
The assembled column matrix W satisfies W M Wbar = M and block-diagonalizes
the form.

Conventions (all recorded so results are reproducible):

* complex pairs: the member with Im(lambda) > 0 is the representative;
* real pairs: the representative is the member whose eigenvector has
  positive usual norm w+ M w > 0, and the partner is fixed to T w*;
* rescaling uses the principal branch of 1/sqrt(c);
* degenerate diagonalizable eigenvalues are orthogonalized inside their
  eigenspace against the M-bilinear form;
* modes are ordered by descending (Re lambda, Im lambda).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.linalg as sla

from .core import (
    QuadraticForm,
    DynamicalMatrix,
    bar,
    bar_vector,
    block_swap,
    dynamical_matrix,
    extended_matrix,
    metric,
)
from .errors import NotDiagonalizable, NullNorm, PairingFailure, WrongRegime

# Defective 2-blocks split their eigenvalues by O(sqrt(eps) ||Ht||) under
# roundoff; the cluster radius must absorb that.
_CLUSTER_SAFETY = 32.0 * np.sqrt(np.finfo(float).eps)
# Soft alarm on nearly vanishing generalized norms (adjacent to a Jordan point).
_NEAR_DEFECT_NORM = 1e-3


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances, mostly relative to the matrix 2-norm.

    eig    residuals, realness and zero-mode decisions
    pair   radius for matching lambda with -lambda (and clustering)
    rank   singular values below rank * ||Ht|| count as zero
    null   generalized norms below this are treated as vanishing
    """

    eig: float = 1e-9
    pair: float = 1e-8
    rank: float = 1e-9
    null: float = 1e-8


class StabilityClass(str, Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    STABLE_NON_POSITIVE = "StableNonPositive"
    UNSTABLE_COMPLEX = "UnstableComplex"
    NON_DIAGONALIZABLE = "NonDiagonalizable"


@dataclass(frozen=True)
class ModePair:
    """One (lambda, -lambda) eigenvalue pair with its raw eigenvectors.

    ``w_plus`` belongs to +lambda, ``w_minus`` to -lambda.  Vectors are not
    yet rescaled to unit generalized norm; ``normalize_pairs`` does that.
    ``hermitian_pair`` marks real-lambda pairs with w_minus = T w_plus*,
    for which the transformed operators are mutual adjoints.
    """

    lam: complex
    w_plus: np.ndarray
    w_minus: np.ndarray
    norm_ok: bool
    hermitian_pair: bool


@dataclass(frozen=True)
class ClusterInfo:
    """Multiplicity data for one distinct eigenvalue of M @ Hmat."""

    value: complex
    algebraic: int
    geometric: int
    max_block: int
    rank_gap: float


@dataclass
class EigenDiagnostics:
    eig_residual: float
    pairing_residuals: list = field(default_factory=list)
    defective: bool = False
    clusters: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    cluster_tol: float = 0.0
    scale: float = 0.0


@dataclass(frozen=True)
class BogoliubovTransform:
    """Normalized transform W with columns (w_1..w_n, w_1bar..w_nbar).

    Satisfies W M Wbar = M; the inverse is the metric conjugate M Wbar M,
    no matrix inversion involved.  ``metric_residual`` is the measured
    2-norm defect of the metric identity.
    """

    W: np.ndarray
    W_inv: np.ndarray
    metric_residual: float

    @property
    def n_modes(self) -> int:
        return self.W.shape[0] // 2


@dataclass(frozen=True)
class StabilityReport:
    classification: StabilityClass
    h_eigenvalues: np.ndarray
    mode_frequencies: np.ndarray
    diagonalizable: bool
    zero_mode_count: int
    diagnostics: EigenDiagnostics

    def to_dict(self) -> dict:
        """Flat document form: tag, [re, im] frequencies, spectra, diagnostics."""
        defects = [
            {
                "value": [c.value.real, c.value.imag],
                "algebraic": c.algebraic,
                "geometric": c.geometric,
                "max_block": c.max_block,
                "rank_gap": c.rank_gap,
            }
            for c in self.diagnostics.clusters
            if c.geometric < c.algebraic
        ]
        return {
            "classification": self.classification.value,
            "diagonalizable": self.diagonalizable,
            "zero_mode_count": self.zero_mode_count,
            "mode_frequencies": [[l.real, l.imag] for l in self.mode_frequencies],
            "h_eigenvalues": [float(x) for x in self.h_eigenvalues],
            "pairing_residuals": [float(x) for x in self.diagnostics.pairing_residuals],
            "eig_residual": self.diagnostics.eig_residual,
            "defects": defects,
            "warnings": list(self.diagnostics.warnings),
        }


# ---------------------------------------------------------------------------
# spectrum structure

def _nullity(mat: np.ndarray, tol_abs: float) -> tuple[int, float]:
    """Number of singular values <= tol_abs, plus the gap across the cut."""
    sv = sla.svdvals(mat)
    below = sv <= tol_abs
    count = int(np.count_nonzero(below))
    if count == 0 or count == sv.size:
        return count, np.inf
    kept = sv[~below].min()
    dropped = sv[below].max()
    return count, float(kept / max(dropped, np.finfo(float).tiny))


def _cluster_indices(values: np.ndarray, radius: float) -> list:
    """Greedy union of eigenvalues closer than ``radius`` (single linkage)."""
    m = values.size
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(m):
        for j in range(i + 1, m):
            if abs(values[i] - values[j]) <= radius:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _max_block(shifted: np.ndarray, algebraic: int, tol_rank: float) -> int:
    """Largest Jordan block size from the nullity sequence of powers.

    The rank cut for (A - value)^k scales with ||A - value||^k: the power of
    a defective direction is exactly zero in theory, so its computed
    singular values are roundoff noise relative to that scale, not to the
    (possibly collapsed) norm of the power itself.
    """
    base = max(float(sla.svdvals(shifted).max()), np.finfo(float).tiny)
    power = np.eye(shifted.shape[0], dtype=complex)
    prev = 0
    size = 1
    for k in range(1, algebraic + 1):
        power = power @ shifted
        null_k, _ = _nullity(power, tol_rank * base ** k)
        if null_k > prev:
            size = k
            prev = null_k
        if null_k >= algebraic:
            break
    return size


def _analyze(matrix: np.ndarray, tol: Tolerances):
    """Eigendecompose and cluster; rank-test every repeated eigenvalue."""
    scale = np.linalg.norm(matrix, 2)
    scale = max(scale, np.finfo(float).tiny)
    evals, vecs = sla.eig(matrix)
    residual = np.abs(matrix @ vecs - vecs * evals[None, :]).max() / scale
    cluster_tol = max(tol.pair, _CLUSTER_SAFETY) * scale
    clusters = []
    for idx in _cluster_indices(evals, cluster_tol):
        value = complex(evals[idx].mean())
        alg = len(idx)
        if alg == 1:
            clusters.append((ClusterInfo(value, 1, 1, 1, np.inf), idx))
            continue
        shifted = matrix - value * np.eye(matrix.shape[0])
        # rank cut must sit above the cluster radius: members of the cluster
        # may be split by up to cluster_tol without being distinct eigenvalues
        cut = max(tol.rank * scale, 4.0 * cluster_tol)
        geo, gap = _nullity(shifted, cut)
        geo = min(geo, alg)
        if geo < alg:
            blk = _max_block(shifted, alg, max(tol.rank, 4.0 * max(tol.pair, _CLUSTER_SAFETY)))
            clusters.append((ClusterInfo(value, alg, geo, blk, gap), idx))
        else:
            clusters.append((ClusterInfo(value, alg, geo, 1, gap), idx))
    return evals, vecs, clusters, cluster_tol, scale, residual


def spectrum_structure(dyn: DynamicalMatrix, tol: Tolerances = Tolerances()):
    """Cluster report (value, algebraic, geometric, max_block) for M @ Hmat."""
    _, _, clusters, _, _, _ = _analyze(dyn.matrix, tol)
    return [c for c, _ in clusters]


# ---------------------------------------------------------------------------
# pairing

def _match_clusters(clusters, cluster_tol: float):
    """Match clusters into (c, c') groups with value(c') = -value(c).

    Zero clusters self-match.  Greedy over decreasing |value|; a missing or
    size-mismatched partner means the eigensolve lost the spectral symmetry.
    """
    order = sorted(range(len(clusters)), key=lambda k: -abs(clusters[k][0].value))
    used = [False] * len(clusters)
    groups = []
    for k in order:
        if used[k]:
            continue
        used[k] = True
        info = clusters[k][0]
        # self-match exactly when +v and -v would have been merged into one
        # cluster (|v - (-v)| <= cluster_tol), keeping the two radii consistent
        if abs(info.value) <= 0.5 * cluster_tol:
            groups.append((k, k))
            continue
        best, best_d = None, np.inf
        for m in range(len(clusters)):
            if used[m]:
                continue
            d = abs(clusters[m][0].value + info.value)
            if d < best_d:
                best, best_d = m, d
        if best is None or best_d > 2.0 * cluster_tol:
            raise PairingFailure(
                f"eigenvalue {info.value} has no partner near {-info.value} "
                f"(best distance {best_d:.3e})"
            )
        if clusters[best][0].algebraic != info.algebraic:
            raise PairingFailure(
                f"multiplicity mismatch between {info.value} and "
                f"{clusters[best][0].value}"
            )
        used[best] = True
        groups.append((k, best))
    return groups


def _real_branch_pairs(vecs_plus, value, mdiag, swap, tol, diags):
    """Pairs from one real eigenvalue cluster (or a self-paired zero cluster).

    The M-Gram matrix on the eigenspace is diagonalized; positive directions
    keep +value as the mode frequency, negative directions belong to modes
    whose representative is the T-conjugate partner at -value.  Returns
    ``(pair, gram_eigenvalue)`` tuples.
    """
    out = []
    gram = vecs_plus.conj().T @ (mdiag[:, None] * vecs_plus)
    gram = 0.5 * (gram + gram.conj().T)
    d, q = np.linalg.eigh(gram)
    for k in range(d.size):
        w = vecs_plus @ q[:, k]
        ok = abs(d[k]) > tol.null
        if not ok:
            diags.warnings.append(
                f"near-null M-norm {d[k]:.3e} at eigenvalue {value:.6g}; "
                "input is adjacent to a non-diagonalizable point"
            )
        elif abs(d[k]) < _NEAR_DEFECT_NORM:
            diags.warnings.append(
                f"small M-norm {d[k]:.3e} at eigenvalue {value:.6g}; "
                "results may be ill-conditioned (near-defective input)"
            )
        if d[k] >= 0:
            out.append((ModePair(value, w, swap @ w.conj(), ok, True), d[k]))
        else:
            wp = swap @ w.conj()
            out.append((ModePair(-value, wp, w, ok, True), d[k]))
    return out


def _complex_branch_pairs(vp, vm, lam, mdiag, tol, diags):
    """Pairs for a complex eigenvalue cluster and its negation partner."""
    pairs = []
    m = vp.shape[1]
    if m == 1:
        wp, wm = vp[:, 0], vm[:, 0]
        c = bar_vector(wm) @ (mdiag * wp)
        ok = abs(c) > tol.null
        if not ok:
            diags.warnings.append(
                f"near-null generalized norm {abs(c):.3e} at eigenvalue {lam:.6g}"
            )
        elif abs(c) < _NEAR_DEFECT_NORM:
            diags.warnings.append(
                f"small generalized norm {abs(c):.3e} at eigenvalue {lam:.6g}; "
                "near-defective input"
            )
        pairs.append(ModePair(lam, wp, wm, ok, False))
        return pairs
    # degenerate complex eigenvalue: bi-orthogonalize the two eigenspaces
    # against the bilinear pairing P_kl = bar(vm_k) M vp_l
    pmat = np.array([[bar_vector(vm[:, k]) @ (mdiag * vp[:, l]) for l in range(m)]
                     for k in range(m)])
    smin = sla.svdvals(pmat).min()
    if smin <= tol.null:
        for k in range(m):
            diags.warnings.append(
                f"degenerate eigenvalue {lam:.6g} has a near-singular pairing"
            )
            pairs.append(ModePair(lam, vp[:, k], vm[:, k], False, False))
        return pairs
    vp = vp @ np.linalg.inv(pmat)
    for k in range(m):
        pairs.append(ModePair(lam, vp[:, k], vm[:, k], True, False))
    return pairs


def eigen_pairs(dyn: DynamicalMatrix, tol: Tolerances = Tolerances()):
    """Solve M @ Hmat and match the spectrum into n (lambda, -lambda) pairs.

    Returns ``(pairs, diagnostics)``.  Vectors come back raw (not rescaled);
    feed the pairs to :func:`normalize_pairs` for the unit-norm transform.
    A defective matrix is not an error: affected pairs come back with
    ``norm_ok=False`` and ``diagnostics.defective`` set, so callers can fall
    back to Jordan-aware handling.

    Raises
    ------
    PairingFailure
        No negation partner within the pairing radius, which a valid input
        cannot produce.
    """
    n = dyn.n_modes
    mdiag = np.concatenate([np.ones(n), -np.ones(n)])
    swap = block_swap(n)
    evals, vecs, clusters, cluster_tol, scale, residual = _analyze(dyn.matrix, tol)
    diags = EigenDiagnostics(eig_residual=residual, cluster_tol=cluster_tol, scale=scale)
    diags.clusters = [c for c, _ in clusters]
    diags.defective = any(c.geometric < c.algebraic for c, _ in clusters)
    im_tol = tol.eig * max(scale, 1.0)

    pairs = []
    for ka, kb in _match_clusters(clusters, cluster_tol):
        info_a, idx_a = clusters[ka]
        if ka == kb:
            # zero cluster: partners live in the same eigenspace
            diags.pairing_residuals.extend([abs(2 * info_a.value)] * (info_a.algebraic // 2))
            if info_a.algebraic % 2:
                raise PairingFailure("zero eigenvalue with odd multiplicity")
            if info_a.geometric < info_a.algebraic:
                for k in range(info_a.algebraic // 2):
                    pairs.append(ModePair(info_a.value, vecs[:, idx_a[k]],
                                          vecs[:, idx_a[-1 - k]], False, False))
                continue
            graded = _real_branch_pairs(vecs[:, idx_a], complex(info_a.value.real),
                                        mdiag, swap, tol, diags)
            # every positive-norm direction yields one mode; its partner is
            # the conjugate image living in the same eigenspace
            kept = [p for p, d in graded if d >= 0]
            if len(kept) != info_a.algebraic // 2:
                raise PairingFailure(
                    f"zero eigenspace has unbalanced M-signature "
                    f"({len(kept)} of {info_a.algebraic})"
                )
            pairs.extend(kept)
            continue
        info_b, idx_b = clusters[kb]
        diags.pairing_residuals.extend(
            [abs(info_a.value + info_b.value)] * info_a.algebraic)
        # orient: a = the +lambda side
        if (abs(info_a.value.imag) > im_tol and info_a.value.imag < info_b.value.imag) or (
                abs(info_a.value.imag) <= im_tol and info_a.value.real < info_b.value.real):
            info_a, idx_a, info_b, idx_b = info_b, idx_b, info_a, idx_a
        if info_a.geometric < info_a.algebraic or info_b.geometric < info_b.algebraic:
            for k in range(info_a.algebraic):
                pairs.append(ModePair(complex(info_a.value), vecs[:, idx_a[k]],
                                      vecs[:, idx_b[k]], False, False))
            continue
        if abs(info_a.value.imag) <= im_tol:
            pairs.extend(p for p, _ in _real_branch_pairs(
                vecs[:, idx_a], complex(info_a.value.real), mdiag, swap, tol, diags))
        else:
            pairs.extend(_complex_branch_pairs(vecs[:, idx_a], vecs[:, idx_b],
                                               complex(info_a.value), mdiag, tol, diags))

    if len(pairs) != n:
        raise PairingFailure(f"expected {n} pairs, built {len(pairs)}")
    pairs.sort(key=lambda p: (-p.lam.real, -p.lam.imag))
    return pairs, diags


# ---------------------------------------------------------------------------
# normalization

def normalize_pairs(pairs, tol: Tolerances = Tolerances()) -> BogoliubovTransform:
    """Rescale pairs to unit generalized norm and assemble the transform.

    Every pair is scaled by the principal branch of 1/sqrt(c) with
    c = wbar_minus M w_plus; hermitian pairs re-derive the partner as
    T w_plus* so the norm reduces to the usual positive one.  Conjugate
    complex pairs (lambda, -lambda*) are linked afterwards so the two
    quadruple members are exact images of each other, w' = i T w*.

    Raises
    ------
    NullNorm
        |c| below the null tolerance: a degenerate or defective direction.
        Fall back to Jordan analysis (growth classification, propagators).
    """
    if not pairs:
        raise NullNorm("no pairs to normalize")
    two_n = pairs[0].w_plus.shape[0]
    n = two_n // 2
    if len(pairs) != n:
        raise PairingFailure(f"need {n} pairs for {two_n}-dimensional vectors, got {len(pairs)}")
    mdiag = np.concatenate([np.ones(n), -np.ones(n)])
    swap = block_swap(n)
    cols_plus = np.zeros((two_n, n), dtype=complex)
    cols_minus = np.zeros((two_n, n), dtype=complex)

    for i, p in enumerate(pairs):
        if p.hermitian_pair:
            c = (p.w_plus.conj() @ (mdiag * p.w_plus)).real
            if abs(c) <= tol.null * (np.linalg.norm(p.w_plus) ** 2):
                raise NullNorm(
                    f"mode {i} (lambda={p.lam:.6g}) has vanishing M-norm {c:.3e}"
                )
            if c < 0:
                raise PairingFailure(
                    f"mode {i} violates the positive-norm representative convention"
                )
            w = p.w_plus / np.sqrt(c)
            cols_plus[:, i] = w
            cols_minus[:, i] = swap @ w.conj()
        else:
            c = bar_vector(p.w_minus) @ (mdiag * p.w_plus)
            if abs(c) <= tol.null * np.linalg.norm(p.w_plus) * np.linalg.norm(p.w_minus):
                raise NullNorm(
                    f"mode {i} (lambda={p.lam:.6g}) has vanishing generalized "
                    f"norm |c|={abs(c):.3e}"
                )
            s = np.sqrt(complex(c))
            cols_plus[:, i] = p.w_plus / s
            cols_minus[:, i] = p.w_minus / s

    # link conjugate quadruples: if lambda_j = -lambda_i*, replace pair j by
    # the exact image (i T w_i*, i T w_ibar*), which is normalized whenever
    # pair i is
    lams = np.array([p.lam for p in pairs])
    linked = set()
    for i, p in enumerate(pairs):
        if p.hermitian_pair or i in linked:
            continue
        if abs(p.lam.real) <= tol.eig * max(1.0, abs(p.lam)):
            continue  # purely imaginary: the quadruple is the pair itself
        target = -np.conj(p.lam)
        cand = [j for j in range(n) if j != i and j not in linked
                and not pairs[j].hermitian_pair
                and abs(lams[j] - target) <= max(tol.pair, _CLUSTER_SAFETY) * max(1.0, abs(target))]
        if len(cand) == 1:
            j = cand[0]
            cols_plus[:, j] = 1j * (swap @ cols_plus[:, i].conj())
            cols_minus[:, j] = 1j * (swap @ cols_minus[:, i].conj())
            linked.update((i, j))

    w_full = np.concatenate([cols_plus, cols_minus], axis=1)
    w_bar = bar(w_full)
    m_full = metric(n)
    w_inv = m_full @ w_bar @ m_full
    residual = np.linalg.norm(w_full @ m_full @ w_bar - m_full, 2)
    return BogoliubovTransform(w_full, w_inv, float(residual))


def decompose(form: QuadraticForm, tol: Tolerances = Tolerances()):
    """Full pipeline: (pairs, transform) for a diagonalizable form.

    Raises
    ------
    NotDiagonalizable
        The dynamical matrix has a Jordan block.
    """
    pairs, diags = eigen_pairs(dynamical_matrix(form), tol)
    if diags.defective:
        bad = [c for c in diags.clusters if c.geometric < c.algebraic]
        raise NotDiagonalizable(
            "Jordan blocks at eigenvalue(s) "
            + ", ".join(f"{c.value:.6g} (block size {c.max_block})" for c in bad)
        )
    return pairs, normalize_pairs(pairs, tol)


# ---------------------------------------------------------------------------
# classification

def classify(form: QuadraticForm, tol: Tolerances = Tolerances()) -> StabilityReport:
    """Stability regime of a form.

    PositiveDefinite    Hmat > 0: discrete positive spectrum, fully stable.
    StableNonPositive   Hmat has nonpositive directions but all frequencies
                        are real and the generator is diagonalizable: the
                        evolution stays quasiperiodic (dynamically stable).
    UnstableComplex     some frequency has an imaginary part: exponential
                        growth of the corresponding modes.
    NonDiagonalizable   Jordan blocks: secular (polynomial-in-t) growth;
                        takes precedence over the other unstable labels.
    """
    h = extended_matrix(form).matrix
    h_eigs = np.linalg.eigvalsh(h)
    pairs, diags = eigen_pairs(dynamical_matrix(form), tol)
    freqs = np.array([p.lam for p in pairs])
    im_tol = tol.eig * max(diags.scale, 1.0)
    any_complex = bool(np.any(np.abs(freqs.imag) > im_tol))
    zero_modes = int(np.sum(np.abs(freqs) <= im_tol))
    diagonalizable = not diags.defective
    if not diagonalizable:
        label = StabilityClass.NON_DIAGONALIZABLE
    elif any_complex:
        label = StabilityClass.UNSTABLE_COMPLEX
    elif h_eigs.min() > im_tol:
        label = StabilityClass.POSITIVE_DEFINITE
    else:
        label = StabilityClass.STABLE_NON_POSITIVE
    return StabilityReport(
        classification=label,
        h_eigenvalues=h_eigs,
        mode_frequencies=freqs,
        diagonalizable=diagonalizable,
        zero_mode_count=zero_modes,
        diagnostics=diags,
    )


def sqrt_metric_spectrum(form: QuadraticForm, tol: Tolerances = Tolerances()) -> np.ndarray:
    """Spectrum of the hermitian matrix sqrt(Hmat) M sqrt(Hmat).

    For positive semidefinite forms this equals the spectrum of M @ Hmat,
    which proves all frequencies real; it serves as an independent check of
    the non-hermitian eigensolve.

    Raises
    ------
    WrongRegime
        Hmat has an eigenvalue below -tol.eig * ||Hmat||.
    """
    h = extended_matrix(form).matrix
    w, v = np.linalg.eigh(h)
    floor = -tol.eig * max(np.abs(w).max(), 1.0)
    if w.min() < floor:
        raise WrongRegime(
            f"form is not positive semidefinite (min eigenvalue {w.min():.3e})"
        )
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    sandwich = root @ metric(form.n_modes) @ root
    return np.linalg.eigvalsh(sandwich)
