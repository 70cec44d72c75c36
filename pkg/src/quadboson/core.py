"""Data model for hermitian quadratic boson forms.

A form is defined by a pair of n x n complex matrices (A, B), A hermitian
and B symmetric, acting on the operator vector Z = (b_1..b_n, b+_1..b+_n):

    H = (1/2) Z+ Hmat Z,   Hmat = [[A, B], [B*, A^t]].

The commutation metric M = diag(+1..+1, -1..-1) turns Hmat into the
non-hermitian generator M @ Hmat that drives the Heisenberg evolution.
Block order is fixed: annihilation block first, creation block second.
All containers here are immutable after construction and all operations
are pure functions, so values can be shared freely across workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, StructureViolation

DEFAULT_TOL_STRUCT = 1e-12


# ---------------------------------------------------------------------------
# structural constants

def metric(n_modes: int) -> np.ndarray:
    """Commutation metric M = diag(+1..+1, -1..-1), shape (2n, 2n)."""
    return np.diag(np.concatenate([np.ones(n_modes), -np.ones(n_modes)]))


def block_swap(n_modes: int) -> np.ndarray:
    """Block-swap matrix T = [[0, I], [I, 0]], shape (2n, 2n)."""
    eye = np.eye(n_modes)
    zero = np.zeros((n_modes, n_modes))
    return np.block([[zero, eye], [eye, zero]])


def coord_map(n_modes: int) -> np.ndarray:
    """Unitary S mapping coordinates/momenta to ladder operators, Z = S R.

    S = (1/sqrt(2)) [[I, iI], [I, -iI]]; it satisfies S+ = S^t T.
    """
    eye = np.eye(n_modes)
    return np.block([[eye, 1j * eye], [eye, -1j * eye]]) / np.sqrt(2.0)


def coord_metric(n_modes: int) -> np.ndarray:
    """Commutation metric in the (q, p) representation, S+ M S = [[0, iI], [-iI, 0]]."""
    eye = np.eye(n_modes)
    zero = np.zeros((n_modes, n_modes))
    return np.block([[zero, 1j * eye], [-1j * eye, zero]])


def bar(matrix: np.ndarray) -> np.ndarray:
    """Bar involution Mbar = T M^t T (transpose conjugated by the block swap).

    No complex conjugation is involved.  For the operator vector Z the bar
    coincides with the adjoint; for a general transform it does not.
    """
    half = matrix.shape[0] // 2
    swap = block_swap(half)
    return swap @ matrix.T @ swap


def bar_vector(vec: np.ndarray) -> np.ndarray:
    """Row form of the bar of a column vector: wbar = w^t T (halves swapped)."""
    half = vec.shape[0] // 2
    return np.concatenate([vec[half:], vec[:half]])


def quadratic_matrix(row1: np.ndarray, row2: np.ndarray) -> np.ndarray:
    """Matrix K with (row1 . Z)(row2 . Z) = Z+ K Z as an operator identity.

    Relies on (Z+)_k = Z_{sigma(k)} with sigma the half swap; no operator
    reordering is needed, so the identity is exact.
    """
    half = row1.shape[0] // 2
    return np.outer(np.concatenate([row1[half:], row1[:half]]), row2)


def bar_symmetrize(k: np.ndarray) -> np.ndarray:
    """Canonical quadratic-form matrix K + Kbar.

    Two matrices represent the same quadratic operator (up to a c-number)
    exactly when their bar-symmetrizations agree, so this is the right
    object for operator-level comparisons and conservation checks.
    """
    return k + bar(k)


# ---------------------------------------------------------------------------
# domain types

@dataclass(frozen=True)
class QuadraticForm:
    """Validated (A, B) pair defining a quadratic boson form.

    Attributes
    ----------
    n_modes : int
        Number of boson modes, >= 1.
    A : np.ndarray
        Hermitian n x n coefficient of b+_i b_j (dimensionless energy units).
    B : np.ndarray
        Symmetric n x n coefficient of the pairing terms b+_i b+_j.
    """

    n_modes: int
    A: np.ndarray
    B: np.ndarray


@dataclass(frozen=True)
class ExtendedMatrix:
    """Hermitian 2n x 2n matrix [[A, B], [B*, A^t]] of the form."""

    n_modes: int
    matrix: np.ndarray


@dataclass(frozen=True)
class DynamicalMatrix:
    """Non-hermitian evolution generator M @ Hmat = [[A, B], [-B*, -A^t]]."""

    n_modes: int
    matrix: np.ndarray


@dataclass(frozen=True)
class CoordinateForm:
    """Real coordinate/momentum representation H = (1/2) R^t [[V, U], [U^t, T]] R."""

    n_modes: int
    V: np.ndarray
    T: np.ndarray
    U: np.ndarray


# ---------------------------------------------------------------------------
# operations

def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def build_form(A, B, tol_struct: float = DEFAULT_TOL_STRUCT) -> QuadraticForm:
    """Validate and build a QuadraticForm from matrices A and B.

    Asymmetries within ``tol_struct`` (relative, Frobenius) are removed by
    symmetrization, since file-sourced matrices carry rounding noise; larger
    violations are rejected.

    Parameters
    ----------
    A, B : array_like
        Square complex matrices of equal dimension n >= 1.
    tol_struct : float
        Relative tolerance for the hermiticity/symmetry checks.

    Raises
    ------
    DimensionMismatch
        Non-square, mismatched or empty inputs.
    StructureViolation
        Non-finite entries, A not hermitian, or B not symmetric beyond
        tolerance.
    """
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    B = np.atleast_2d(np.asarray(B, dtype=complex))
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"A must be square, got shape {A.shape}")
    if B.shape != A.shape:
        raise DimensionMismatch(f"A and B shapes differ: {A.shape} vs {B.shape}")
    n = A.shape[0]
    if n < 1:
        raise DimensionMismatch("need at least one mode")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(B))):
        raise StructureViolation("A and B must contain only finite entries")

    herm_defect = np.linalg.norm(A - A.conj().T)
    if herm_defect > tol_struct * max(np.linalg.norm(A), 1e-300):
        raise StructureViolation(
            f"A is not hermitian: ||A - A+|| = {herm_defect:.3e} "
            f"exceeds {tol_struct:.1e} * ||A||"
        )
    sym_defect = np.linalg.norm(B - B.T)
    if sym_defect > tol_struct * max(np.linalg.norm(B), 1e-300):
        raise StructureViolation(
            f"B is not symmetric: ||B - B^t|| = {sym_defect:.3e} "
            f"exceeds {tol_struct:.1e} * ||B||"
        )
    return QuadraticForm(n, _freeze(0.5 * (A + A.conj().T)), _freeze(0.5 * (B + B.T)))


def extended_matrix(form: QuadraticForm) -> ExtendedMatrix:
    """Assemble the hermitian 2n x 2n block matrix [[A, B], [B*, A^t]].

    The result is hermitian and bar-symmetric (T Hmat^t T = Hmat) by
    construction from a validated form.
    """
    h = np.block([[form.A, form.B], [form.B.conj(), form.A.T]])
    return ExtendedMatrix(form.n_modes, _freeze(h))


def dynamical_matrix(form: QuadraticForm) -> DynamicalMatrix:
    """Assemble M @ Hmat, the generator of i dZ/dt = (M Hmat) Z.

    Computed as the exact metric product of :func:`extended_matrix`'s output,
    so the two share floating-point entries up to sign.
    """
    h = extended_matrix(form).matrix
    ht = metric(form.n_modes) @ h
    return DynamicalMatrix(form.n_modes, _freeze(ht))


def coordinate_form(form: QuadraticForm) -> CoordinateForm:
    """Real (V, T, U) blocks of the coordinate/momentum representation.

    V = Re(A + B), T = Re(A - B), U = Im(B - A); these coincide with the
    blocks of S+ Hmat S for the unitary S of :func:`coord_map`.
    """
    v = (form.A + form.B).real.copy()
    t = (form.A - form.B).real.copy()
    u = (form.B - form.A).imag.copy()
    return CoordinateForm(form.n_modes, _freeze(v), _freeze(t), _freeze(u))


def coordinate_matrix(cf: CoordinateForm) -> np.ndarray:
    """Real symmetric 2n x 2n matrix [[V, U], [U^t, T]]."""
    return np.block([[cf.V, cf.U], [cf.U.T, cf.T]])
