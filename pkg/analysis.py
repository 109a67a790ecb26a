"""
Frozen-coherence detection, entanglement sudden death and robustness comparisons.

Everything here works on the evolved state of the detector pair. The sudden
death condition used below, (1 - q) = nu^2 sqrt(q), comes from the X-state
concurrence of that state: the anti-diagonal term never contributes and the
central term reduces to sin(2 theta) [(1 - q) - nu^2 sqrt(q)] / (2D).
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from errors import DomainError
from measures import (
    concurrence_xstate,
    l1_coherence,
    l1_coherence_closed,
    relative_entropy_coherence,
    relative_entropy_coherence_closed,
)
from model import (
    NU2_WARN,
    ChannelParams,
    InitialStateParams,
    apply_channel,
    final_state_closed_form,
    final_state_params,
    initial_state,
)
from numerics import diagonal_part, partial_trace

FROZEN_TOL = 1e-12
# Threshold on sin(2 theta) and nu^2 when predicting which grid points freeze.
PREDICTION_TOL = 1e-12
DEFAULT_H = 1e-4
BISECTION_ITERATIONS = 60
DEFAULT_Q_SAMPLES = np.linspace(0.0, 0.99, 101)


@dataclass(frozen=True)
class FrozenScanResult:
    grid: List[Tuple[float, float]]
    frozen_points: List[Tuple[float, float]]
    max_abs_derivative_elsewhere: float
    max_location: Optional[Tuple[float, float]]
    # supplementary: relative entropy coherence, by central differences
    max_abs_dcre_elsewhere: float
    matches_prediction: bool

    def to_dict(self) -> Dict:
        return {
            "grid_size": len(self.grid),
            "frozen_points": [list(p) for p in self.frozen_points],
            "max_abs_derivative_elsewhere": self.max_abs_derivative_elsewhere,
            "max_location": list(self.max_location) if self.max_location else None,
            "max_abs_dcre_elsewhere": self.max_abs_dcre_elsewhere,
            "matches_prediction": self.matches_prediction,
        }


@dataclass(frozen=True)
class SuddenDeathResult:
    kind: str
    threshold: Optional[float]
    bracket: Optional[Tuple[float, float]]
    iterations: int
    within_validity: bool = True
    notes: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def has_death(self) -> bool:
        return self.threshold is not None

    def to_dict(self) -> Dict:
        return {
            "kind": self.kind,
            "threshold": self.threshold,
            "bracket": list(self.bracket) if self.bracket else None,
            "iterations": self.iterations,
            "within_validity": self.within_validity,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class RobustnessReport:
    c_l1: float
    concurrence: float
    gap: float


def dCl1_dq(theta: float, q: float, nu2: float) -> float:
    """Analytic q derivative of the l1 coherence: -nu^2 sin(2 theta) / D^2."""
    cp = ChannelParams(q=q, nu2=nu2)
    fp = final_state_params(theta, cp)
    return -cp.nu2 * math.sin(2.0 * fp.theta) / fp.D ** 2


def _central_difference(func, theta: float, q: float, nu2: float, h: float) -> float:
    if h <= 0:
        raise DomainError(f"step h must be > 0, got {h!r}")
    if q - h < 0.0 or q + h >= 1.0:
        raise DomainError(f"stencil [{q - h}, {q + h}] leaves [0, 1)")
    upper = func(theta, ChannelParams(q=q + h, nu2=nu2))
    lower = func(theta, ChannelParams(q=q - h, nu2=nu2))
    return (upper - lower) / (2.0 * h)


def finite_difference_dq(theta: float, q: float, nu2: float, h: float = DEFAULT_H) -> float:
    """Central-difference estimate of dC_l1/dq."""
    return _central_difference(l1_coherence_closed, theta, q, nu2, h)


def dCre_dq_numeric(theta: float, q: float, nu2: float, h: float = DEFAULT_H) -> float:
    """Central-difference estimate of the q derivative of the relative entropy coherence."""
    return _central_difference(relative_entropy_coherence_closed, theta, q, nu2, h)


def is_frozen_predicted(theta: float, nu2: float, tol: float = PREDICTION_TOL) -> bool:
    """Coherence is q-invariant only for an incoherent input (sin 2theta = 0) or no coupling."""
    return abs(math.sin(2.0 * theta)) <= tol or nu2 <= tol


def _scan_point(theta: float, nu2: float, q_samples: Sequence[float], h: float):
    derivative = max(abs(dCl1_dq(theta, q, nu2)) for q in q_samples)
    interior = [q for q in q_samples if q - h >= 0.0 and q + h < 1.0]
    dcre = max((abs(dCre_dq_numeric(theta, q, nu2, h)) for q in interior), default=0.0)
    return derivative, dcre


def frozen_scan(theta_grid: Sequence[float], nu2_grid: Sequence[float],
                q_samples: Optional[Sequence[float]] = None, tol: float = FROZEN_TOL,
                workers: int = 1) -> FrozenScanResult:
    """
    Flag the (theta, nu2) points whose l1 coherence does not move with q.

    A point is frozen when max |dC_l1/dq| over ``q_samples`` stays below ``tol``.
    Points are independent; with ``workers > 1`` they are evaluated on a thread
    pool and merged back in grid order.
    """
    if len(theta_grid) == 0 or len(nu2_grid) == 0:
        raise DomainError("frozen_scan needs non-empty theta and nu2 grids")
    q_samples = DEFAULT_Q_SAMPLES if q_samples is None else np.asarray(q_samples, dtype=float)
    if len(q_samples) == 0:
        raise DomainError("frozen_scan needs at least one q sample")
    for theta in theta_grid:
        InitialStateParams(theta)
    for nu2 in nu2_grid:
        ChannelParams(q=0.0, nu2=nu2)

    grid = [(float(t), float(n)) for t in theta_grid for n in nu2_grid]
    h = DEFAULT_H

    def evaluate(point):
        return _scan_point(point[0], point[1], q_samples, h)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(evaluate, grid))
    else:
        results = [evaluate(point) for point in grid]

    frozen, max_derivative, max_location, max_dcre = [], 0.0, None, 0.0
    for point, (derivative, dcre) in zip(grid, results):
        if derivative < tol:
            frozen.append(point)
            continue
        if derivative > max_derivative:
            max_derivative, max_location = derivative, point
        max_dcre = max(max_dcre, dcre)

    predicted = [p for p in grid if is_frozen_predicted(p[0], p[1])]
    return FrozenScanResult(
        grid=grid,
        frozen_points=frozen,
        max_abs_derivative_elsewhere=max_derivative,
        max_location=max_location,
        max_abs_dcre_elsewhere=max_dcre,
        matches_prediction=frozen == predicted,
    )


def death_margin(q: float, nu2: float) -> float:
    """(1 - q) - nu^2 sqrt(q); concurrence of the evolved state is positive iff this is."""
    return (1.0 - q) - nu2 * math.sqrt(q)


def _check_entangled_input(theta: float) -> float:
    theta = InitialStateParams(theta).theta
    if not 0.0 < theta < math.pi / 2:
        raise DomainError(f"theta = {theta!r} gives an unentangled input; nothing can die")
    return theta


def sudden_death_q(theta: float, nu2: float) -> SuddenDeathResult:
    """
    Acceleration q* at which the concurrence reaches zero.

    Bisection on death_margin over [0, 1]; the margin falls monotonically from
    1 to -nu^2, so the root is unique. q* does not depend on theta.
    """
    _check_entangled_input(theta)
    ChannelParams(q=0.0, nu2=nu2)
    if nu2 == 0.0:
        return SuddenDeathResult(kind="q", threshold=None, bracket=None, iterations=0,
                                 notes=("no finite sudden death: concurrence = sin(2 theta) for all q < 1",))

    lo, hi = 0.0, 1.0
    iterations = 0
    for iterations in range(1, BISECTION_ITERATIONS + 1):
        mid = 0.5 * (lo + hi)
        if death_margin(mid, nu2) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 0.0:
            break

    notes = () if nu2 < NU2_WARN else (f"nu2 = {nu2:.6g} is outside the perturbative regime",)
    return SuddenDeathResult(kind="q", threshold=0.5 * (lo + hi), bracket=(lo, hi),
                             iterations=iterations, within_validity=nu2 < NU2_WARN, notes=notes)


def sudden_death_nu(theta: float, q: float) -> SuddenDeathResult:
    """Coupling nu* = sqrt((1 - q) / sqrt(q)) beyond which the concurrence stays zero."""
    _check_entangled_input(theta)
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0, 1), got {q!r}")

    nu2_star = (1.0 - q) / math.sqrt(q)
    nu_star = math.sqrt(nu2_star)
    notes = ()
    if nu2_star >= NU2_WARN:
        notes = (f"nu*^2 = {nu2_star:.6g} lies outside the perturbative regime nu^2 << 1",)
    return SuddenDeathResult(kind="nu", threshold=nu_star, bracket=(nu_star, nu_star), iterations=0,
                             within_validity=nu2_star < NU2_WARN, notes=notes)


def robustness_report(theta: float, cp: ChannelParams) -> RobustnessReport:
    """l1 coherence against concurrence of the evolved state."""
    rho = final_state_closed_form(theta, cp)
    c_l1 = l1_coherence(rho)
    concurrence = concurrence_xstate(rho)
    return RobustnessReport(c_l1=c_l1, concurrence=concurrence, gap=c_l1 - concurrence)


def verify_incoherent_operation(theta: float, cp: ChannelParams, tol: float = 1e-12) -> bool:
    """The channel sends diag(initial state) to diag(final state), entrywise within ``tol``."""
    evolved = apply_channel(diagonal_part(initial_state(theta)), cp)
    expected = diagonal_part(final_state_closed_form(theta, cp))
    return bool(np.max(np.abs(evolved - expected)) <= tol)


def check_convexity(states: Sequence[np.ndarray], weights: Sequence[float],
                    tol: float = 1e-12) -> Dict[str, bool]:
    """C(sum p_i rho_i) <= sum p_i C(rho_i) for the l1 and relative entropy coherences."""
    weights = np.asarray(weights, dtype=float)
    if len(states) != len(weights) or len(states) == 0:
        raise DomainError("need one weight per state")
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
        raise DomainError("weights must form a probability distribution")

    mixture = sum(w * np.asarray(s, dtype=np.complex128) for w, s in zip(weights, states))
    report = {}
    for name, measure in (("c_l1", l1_coherence), ("c_re", relative_entropy_coherence)):
        lhs = measure(mixture)
        rhs = sum(w * measure(s) for w, s in zip(weights, states))
        report[name] = lhs <= rhs + tol
    return report


def partial_coherences(theta: float, cp: ChannelParams) -> Tuple[float, float]:
    """l1 coherence of Alice's and Rob's reduced states."""
    rho = final_state_closed_form(theta, cp)
    return l1_coherence(partial_trace(rho, "A")), l1_coherence(partial_trace(rho, "R"))
