"""
Dense linear algebra for the 2x2 and 4x4 Hermitian matrices of a detector pair.

Matrices are ``numpy`` complex arrays. Two-qubit matrices use the basis order
|00>, |01>, |10>, |11> with Alice's detector (A) as the slow index and Rob's
detector (R) as the fast one.
"""

from typing import Tuple

import numpy as np

from errors import ConvergenceError, DomainError, InvalidDensityMatrixError, NotHermitianError

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
EIGEN_TOL = 1e-12

# Jacobi stops once the off-diagonal Frobenius mass drops below this (relative to max(1, ||M||_F)).
JACOBI_OFF_TOL = 1e-14
JACOBI_MAX_SWEEPS = 64

SUPPORTED_DIMS = (2, 4)
SUBSYSTEMS = ("A", "R")


def as_matrix(M) -> np.ndarray:
    """Coerce ``M`` to a complex square array of a supported dimension."""
    arr = np.asarray(M, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] not in SUPPORTED_DIMS:
        raise DomainError(f"Expected a 2x2 or 4x4 matrix, got shape {arr.shape}")
    return arr


def check_hermitian(M, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Return ``M`` as an array, raising NotHermitianError on the worst offending pair."""
    arr = as_matrix(M)
    deviation = np.abs(arr - arr.conj().T)
    worst = float(deviation.max())
    if worst > tol:
        i, j = np.unravel_index(int(np.argmax(deviation)), deviation.shape)
        raise NotHermitianError((int(i), int(j)), worst)
    return arr


def _off_diagonal_norm(A: np.ndarray) -> float:
    return float(np.linalg.norm(A - np.diag(np.diag(A))))


def _jacobi_eigh(A: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Cyclic complex Jacobi iteration.

    Each rotation first removes the phase of A[p, q] and then applies the real
    symmetric Jacobi rotation on the (p, q) plane.
    """
    n = A.shape[0]
    A = 0.5 * (A + A.conj().T)
    V = np.eye(n, dtype=np.complex128)
    threshold = JACOBI_OFF_TOL * max(1.0, float(np.linalg.norm(A)))

    for _ in range(JACOBI_MAX_SWEEPS):
        off = _off_diagonal_norm(A)
        if off < threshold:
            return np.real(np.diag(A)).copy(), V

        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                magnitude = abs(apq)
                if magnitude == 0.0:
                    continue
                phase = apq / magnitude
                app = A[p, p].real
                aqq = A[q, q].real
                tau = (aqq - app) / (2.0 * magnitude)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                U = np.eye(n, dtype=np.complex128)
                U[p, p] = c
                U[p, q] = s
                U[q, p] = -s * np.conj(phase)
                U[q, q] = c * np.conj(phase)

                A = U.conj().T @ A @ U
                A[p, q] = 0.0
                A[q, p] = 0.0
                V = V @ U

    raise ConvergenceError(
        "Jacobi eigensolver did not converge",
        best_value=_off_diagonal_norm(A),
        iterations=JACOBI_MAX_SWEEPS,
    )


def hermitian_eigh(M) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigen-decomposition of a Hermitian matrix.

    Returns:
        (eigenvalues, eigenvectors): eigenvalues sorted descending, eigenvectors as
        the matching columns of a unitary matrix.
    """
    A = check_hermitian(M)
    w, V = _jacobi_eigh(A)
    order = np.argsort(w)[::-1]
    return w[order], V[:, order]


def hermitian_eigenvalues(M) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted descending."""
    return hermitian_eigh(M)[0]


def trace_norm_hermitian(M) -> float:
    """Trace norm (sum of absolute eigenvalues) of a Hermitian matrix."""
    return float(np.sum(np.abs(hermitian_eigenvalues(M))))


def check_density_matrix(rho) -> np.ndarray:
    """
    Validate a density matrix and return its spectrum (descending).

    Raises:
        InvalidDensityMatrixError: shape, Hermiticity, trace or positivity violation.
    """
    try:
        arr = check_hermitian(rho)
    except NotHermitianError as e:
        raise InvalidDensityMatrixError(f"Invalid density matrix: {e}") from e
    except DomainError as e:
        raise InvalidDensityMatrixError(str(e)) from e

    trace = np.trace(arr)
    if abs(trace - 1.0) > TRACE_TOL:
        raise InvalidDensityMatrixError(f"Density matrix trace is {trace.real:.15g}, expected 1")

    spectrum = hermitian_eigenvalues(arr)
    if spectrum[-1] < -PSD_TOL:
        raise InvalidDensityMatrixError(
            f"Density matrix has negative eigenvalue {spectrum[-1]:.3e}"
        )
    return spectrum


def shannon_entropy(probabilities) -> float:
    """Shannon entropy in bits with 0 log 0 = 0."""
    p = np.asarray(probabilities, dtype=np.float64)
    p = np.where((p < 0.0) & (p >= -PSD_TOL), 0.0, p)
    nonzero = p[p > 0.0]
    return float(max(0.0, -np.sum(nonzero * np.log2(nonzero))))


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy of a density matrix, in bits."""
    spectrum = check_density_matrix(rho)
    dim = len(spectrum)
    return float(min(np.log2(dim), shannon_entropy(spectrum)))


def diagonal_part(rho) -> np.ndarray:
    """The dephased matrix diag(rho)."""
    arr = as_matrix(rho)
    return np.diag(np.diag(arr))


def partial_trace(rho, keep: str) -> np.ndarray:
    """
    Reduced state of one detector.

    Args:
        rho: 4x4 density matrix in the |i_A j_R> ordering
        keep: "A" to keep Alice's detector, "R" to keep Rob's
    """
    if keep not in SUBSYSTEMS:
        raise DomainError(f"Unknown subsystem {keep!r}, expected one of {SUBSYSTEMS}")
    arr = as_matrix(rho)
    if arr.shape != (4, 4):
        raise InvalidDensityMatrixError("partial_trace needs a 4x4 two-qubit density matrix")
    check_density_matrix(arr)

    tensor = arr.reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ijkj->ik", tensor)
    return np.einsum("ijil->jl", tensor)


def psd_sqrt(M, cutoff: float = 0.0) -> np.ndarray:
    """Square root of a positive semidefinite Hermitian matrix; eigenvalues <= cutoff count as zero."""
    w, V = hermitian_eigh(M)
    w = np.where(w <= cutoff, 0.0, w)
    return (V * np.sqrt(w)) @ V.conj().T
