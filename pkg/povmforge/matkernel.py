"""
Dense complex matrix kernel.

Matrices and vectors are ``numpy`` arrays of dtype ``complex128``. Every
function here is pure: inputs are never modified and results are fresh
arrays, so values can be shared freely between threads.
"""

import numpy as np
from scipy.stats import unitary_group

from povmforge.exceptions import (
    DimensionError,
    NonHermitianError,
    NotOrthonormalError,
)

DEFAULT_TOLERANCE = 1e-10
DEPENDENCY_TOLERANCE = 1e-8
MAX_DIMENSION = 64


def as_matrix(a):
    """Return `a` as a finite 2-D complex array."""
    matrix = np.asarray(a, dtype=np.complex128)
    if matrix.ndim != 2 or 0 in matrix.shape:
        raise DimensionError('expected a non-empty 2-D matrix, got shape {}'.format(matrix.shape))
    if max(matrix.shape) > MAX_DIMENSION:
        raise DimensionError('dimension {} exceeds {}'.format(max(matrix.shape), MAX_DIMENSION))
    if not np.all(np.isfinite(matrix)):
        raise DimensionError('matrix contains NaN or Inf entries')
    return matrix


def as_vector(v):
    """Return `v` as a finite 1-D complex array."""
    vector = np.asarray(v, dtype=np.complex128)
    if vector.ndim != 1 or vector.size == 0:
        raise DimensionError('expected a non-empty 1-D vector, got shape {}'.format(vector.shape))
    if not np.all(np.isfinite(vector)):
        raise DimensionError('vector contains NaN or Inf entries')
    return vector


def multiply(a, b):
    """Matrix product of `a` and `b`."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError('cannot multiply {} by {}'.format(a.shape, b.shape))
    return a @ b


def adjoint(a):
    """Conjugate transpose."""
    return as_matrix(a).conj().T.copy()


def identity(dim):
    """The `dim` x `dim` complex identity."""
    return np.eye(dim, dtype=np.complex128)


def hermiticity_defect(h):
    """Largest entry of |h - h^dagger|."""
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise DimensionError('matrix is not square: {}'.format(h.shape))
    return float(np.max(np.abs(h - h.conj().T)))


def unitarity_defect(u):
    """Frobenius norm of U^dagger U - I."""
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        raise DimensionError('matrix is not square: {}'.format(u.shape))
    return float(np.linalg.norm(u.conj().T @ u - identity(u.shape[0])))


def is_unitary(u, tolerance=DEFAULT_TOLERANCE):
    """Whether `u` is unitary within `tolerance` (Frobenius)."""
    return unitarity_defect(u) <= tolerance


def frobenius_distance(a, b):
    """Frobenius norm of a - b."""
    return float(np.linalg.norm(as_matrix(a) - as_matrix(b)))


def max_deviation(a, b):
    """Largest entrywise modulus of a - b."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise DimensionError('cannot compare {} with {}'.format(a.shape, b.shape))
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def phase_aligned_deviation(a, b):
    """
    Compare `a` and `b` up to a global phase.

    Returns:
        (float, float): the largest entry of |a - e^{i phi} b| for the phase
            phi that best aligns `b` onto `a`, and phi itself.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise DimensionError('cannot compare {} with {}'.format(a.shape, b.shape))
    overlap = np.vdot(b, a)
    phase = float(np.angle(overlap)) if abs(overlap) > 0 else 0.0
    return max_deviation(a, np.exp(1j * phase) * b), phase


def eig_hermitian(h, tolerance=DEFAULT_TOLERANCE):
    """
    Eigendecomposition of a Hermitian matrix.

    Returns:
        (numpy.ndarray, numpy.ndarray): ascending real eigenvalues and the
            unitary matrix whose columns are the matching eigenvectors.
    """
    h = as_matrix(h)
    defect = hermiticity_defect(h)
    if defect > tolerance:
        raise NonHermitianError('matrix is not Hermitian (defect {:.3e})'.format(defect))
    hermitian = (h + h.conj().T) / 2
    eigenvalues, eigenvectors = np.linalg.eigh(hermitian)
    return eigenvalues, eigenvectors


def complete_columns(v, tolerance=DEFAULT_TOLERANCE, dependency_tolerance=DEPENDENCY_TOLERANCE):
    """
    Extend orthonormal columns to a full unitary.

    The first k columns of the result are `v` unchanged. The rest come from
    orthonormalising the canonical basis vectors e_0, e_1, ... in ascending
    order against everything accepted so far; a candidate whose residual
    norm falls below `dependency_tolerance` is skipped.
    """
    v = as_matrix(v)
    dim, k = v.shape
    if k > dim:
        raise DimensionError('{} columns cannot be orthonormal in dimension {}'.format(k, dim))
    gram_defect = float(np.linalg.norm(v.conj().T @ v - identity(k)))
    if gram_defect > tolerance:
        raise NotOrthonormalError('input columns are not orthonormal (defect {:.3e})'.format(gram_defect))

    columns = [v[:, index] for index in range(k)]
    for index in range(dim):
        if len(columns) == dim:
            break
        candidate = np.zeros(dim, dtype=np.complex128)
        candidate[index] = 1.0
        # two passes of classical Gram-Schmidt
        for _ in range(2):
            for column in columns:
                candidate = candidate - np.vdot(column, candidate) * column
        norm = np.linalg.norm(candidate)
        if norm < dependency_tolerance:
            continue
        columns.append(candidate / norm)

    result = np.column_stack(columns)
    result[:, :k] = v
    return result


def random_unitary(dim, rng):
    """Haar-random unitary drawn from the numpy generator `rng`."""
    return np.asarray(unitary_group.rvs(dim, random_state=rng), dtype=np.complex128)


def random_state(dim, rng):
    """Normalised complex Gaussian vector drawn from `rng`."""
    vector = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vector / np.linalg.norm(vector)


def random_hermitian(dim, rng):
    """Random Hermitian matrix drawn from `rng`."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2
