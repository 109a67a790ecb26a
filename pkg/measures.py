"""
Coherence and entanglement measures for two-detector states.

All logarithms are base 2, so coherences and entropies are in bits.
"""

import itertools
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from errors import ConvergenceError, DomainError, StructureError
from model import ChannelParams, final_state_params
from numerics import (
    as_matrix,
    check_density_matrix,
    diagonal_part,
    hermitian_eigh,
    psd_sqrt,
    shannon_entropy,
    trace_norm_hermitian,
    von_neumann_entropy,
)

X_STRUCTURE_TOL = 1e-14
TRACE_NORM_MAX_SWEEPS = 500
# Smoothing width of the first SLSQP stage; each later stage divides it by 10.
SMOOTHING_START = 1e-2
SMOOTHING_MAX_ITER = 200
# Eigenvalues of rho at or below this are rounding noise when taking sqrt(rho).
SQRT_CUTOFF = 1e-14

# Entries an X state must keep at zero: everything off the diagonal and anti-diagonal.
_FORBIDDEN = [(i, j) for i in range(4) for j in range(4) if i != j and i + j != 3]

# sigma_y (x) sigma_y; real because the two factors of i cancel.
_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


@dataclass(frozen=True)
class MeasureReport:
    c_l1: float
    c_re: float
    c_tr: float
    concurrence: float

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not math.isfinite(value) or value < 0.0:
                raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
        if self.concurrence > 1.0 + 1e-12:
            raise DomainError(f"concurrence must be <= 1, got {self.concurrence!r}")


def is_x_state(rho, tol: float = X_STRUCTURE_TOL) -> bool:
    arr = as_matrix(rho)
    if arr.shape != (4, 4):
        return False
    return all(abs(arr[i, j]) <= tol for i, j in _FORBIDDEN)


def _require_x_state(rho) -> np.ndarray:
    arr = as_matrix(rho)
    if not is_x_state(arr):
        raise StructureError(
            "State is not X-shaped; use trace_norm_coherence_numeric / concurrence_general instead"
        )
    return arr


def l1_coherence(rho) -> float:
    """Sum of the moduli of all off-diagonal entries."""
    check_density_matrix(rho)
    arr = as_matrix(rho)
    off_diagonal = ~np.eye(arr.shape[0], dtype=bool)
    return float(np.sum(np.abs(arr[off_diagonal])))


def l1_coherence_closed(theta: float, cp: ChannelParams) -> float:
    """2 alpha sin(2 theta) for the evolved state."""
    fp = final_state_params(theta, cp)
    return 2.0 * fp.alpha * math.sin(2.0 * fp.theta)


def relative_entropy_coherence(rho) -> float:
    """S(diag rho) - S(rho)."""
    s_rho = von_neumann_entropy(rho)
    s_diag = von_neumann_entropy(diagonal_part(rho))
    return max(0.0, s_diag - s_rho)


def relative_entropy_coherence_closed(theta: float, cp: ChannelParams) -> float:
    """2 alpha H(sin^2 theta): the relative entropy coherence of the evolved state."""
    fp = final_state_params(theta, cp)
    s2 = math.sin(fp.theta) ** 2
    return 2.0 * fp.alpha * shannon_entropy([s2, 1.0 - s2])


def trace_norm_coherence_xstate(rho) -> float:
    """|| rho - diag(rho) ||_1; diag(rho) is the closest incoherent state of an X state."""
    arr = _require_x_state(rho)
    check_density_matrix(arr)
    return trace_norm_hermitian(arr - diagonal_part(arr))


def _smoothed_trace_norm(rho: np.ndarray, mu: float):
    """Tr sqrt((rho - delta)^2 + mu^2) and its gradient in delta; within dim * mu of the trace norm."""

    def fun(d):
        w, V = hermitian_eigh(rho - np.diag(d))
        root = np.sqrt(w * w + mu * mu)
        grad = -(np.abs(V) ** 2) @ (w / root)
        return float(root.sum()), grad

    return fun


def _to_simplex(d: np.ndarray) -> np.ndarray:
    d = np.clip(np.real(d), 0.0, None)
    total = d.sum()
    return d / total if total > 0.0 else np.full(d.shape[0], 1.0 / d.shape[0])


def _smoothed_descent(rho: np.ndarray, start: np.ndarray, tol: float) -> np.ndarray:
    """SLSQP on the smoothed objective, shrinking mu until its bias drops below tol / 10."""
    dim = rho.shape[0]
    floor = tol / (10.0 * dim)
    constraints = [{"type": "eq", "fun": lambda d: d.sum() - 1.0, "jac": lambda d: np.ones(dim)}]
    delta = start
    mu = max(SMOOTHING_START, floor)
    while True:
        result = minimize(_smoothed_trace_norm(rho, mu), delta, jac=True, method="SLSQP",
                          bounds=[(0.0, 1.0)] * dim, constraints=constraints,
                          options={"ftol": tol / 100.0, "maxiter": SMOOTHING_MAX_ITER})
        delta = _to_simplex(result.x)
        if mu <= floor:
            return delta
        mu = max(mu / 10.0, floor)


def _descend(rho: np.ndarray, start: np.ndarray, tol: float):
    """Pairwise coordinate descent on the simplex from one start point."""
    dim = rho.shape[0]
    delta = start.copy()

    def objective(d):
        return trace_norm_hermitian(rho - np.diag(d))

    value = objective(delta)
    for sweep in range(1, TRACE_NORM_MAX_SWEEPS + 1):
        previous = value
        for i, j in itertools.combinations(range(dim), 2):
            # move mass t from j to i, keeping delta on the simplex
            lo, hi = -delta[i], delta[j]
            if hi - lo <= 0.0:
                continue

            def along(t, i=i, j=j):
                trial = delta.copy()
                trial[i] += t
                trial[j] -= t
                return objective(trial)

            result = minimize_scalar(along, bounds=(lo, hi), method="bounded",
                                     options={"xatol": tol / 100.0})
            if result.fun < value:
                delta[i] += result.x
                delta[j] -= result.x
                delta = np.clip(delta, 0.0, None)
                delta /= delta.sum()
                value = objective(delta)
        if previous - value < tol / 10.0:
            return value, sweep
    raise ConvergenceError("trace-norm minimizer did not converge", best_value=value,
                           iterations=TRACE_NORM_MAX_SWEEPS)


def trace_norm_coherence_numeric(rho, tol: float = 1e-6) -> float:
    """
    min over diagonal density matrices delta of || rho - delta ||_1.

    The objective is convex but not smooth. A smoothed version is solved with
    SLSQP from diag(rho) and from the simplex centre, and pairwise coordinate
    descent then polishes each end point on the exact trace norm.

    Raises:
        ConvergenceError: the polishing step did not settle for either start
    """
    if tol <= 0:
        raise DomainError(f"tol must be > 0, got {tol!r}")
    check_density_matrix(rho)
    arr = as_matrix(rho)
    dim = arr.shape[0]

    best = math.inf
    failure = None
    for start in (_to_simplex(np.diag(arr)), np.full(dim, 1.0 / dim)):
        delta = _smoothed_descent(arr, start, tol)
        try:
            value, _ = _descend(arr, delta, tol)
        except ConvergenceError as e:
            failure = e
            continue
        best = min(best, value)
    if best == math.inf:
        raise failure
    return float(best)


def concurrence_xstate(rho) -> float:
    """2 max{0, |rho_14| - sqrt(rho_22 rho_33), |rho_23| - sqrt(rho_11 rho_44)}."""
    arr = _require_x_state(rho)
    check_density_matrix(arr)
    d = np.clip(np.real(np.diag(arr)), 0.0, None)
    c1 = abs(arr[0, 3]) - math.sqrt(d[1] * d[2])
    c2 = abs(arr[1, 2]) - math.sqrt(d[0] * d[3])
    return float(min(1.0, 2.0 * max(0.0, c1, c2)))


def concurrence_closed(theta: float, cp: ChannelParams) -> float:
    """sin(2 theta) max{0, (1 - q) - nu^2 sqrt(q)} / D for the evolved state."""
    fp = final_state_params(theta, cp)
    margin = (1.0 - cp.q) - cp.nu2 * math.sqrt(cp.q)
    return math.sin(2.0 * fp.theta) * max(0.0, margin) / fp.D


def concurrence_general(rho) -> float:
    """
    Spin-flip concurrence max{0, l1 - l2 - l3 - l4}.

    The l_i (descending) are the square roots of the eigenvalues of
    rho (Y x Y) rho* (Y x Y). They are taken as the singular values of
    sqrt(rho) sqrt(rho~), which resolves a vanishing l_i to machine precision
    where the square root of a computed eigenvalue would not.
    """
    check_density_matrix(rho)
    arr = as_matrix(rho)
    if arr.shape != (4, 4):
        raise DomainError("concurrence needs a two-qubit state")

    root = psd_sqrt(arr, cutoff=SQRT_CUTOFF)
    flipped_root = _YY @ root.conj() @ _YY
    lam = np.linalg.svd(root @ flipped_root, compute_uv=False)
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def measure_all(rho, tol: float = 1e-6) -> MeasureReport:
    """All four measures, with X-state fast paths when the structure allows."""
    check_density_matrix(rho)
    if is_x_state(rho):
        c_tr = trace_norm_coherence_xstate(rho)
        concurrence = concurrence_xstate(rho)
    else:
        c_tr = trace_norm_coherence_numeric(rho, tol)
        concurrence = concurrence_general(rho)
    return MeasureReport(
        c_l1=l1_coherence(rho),
        c_re=relative_entropy_coherence(rho),
        c_tr=c_tr,
        concurrence=concurrence,
    )
