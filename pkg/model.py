"""
Detector-pair model: initial state, parameter maps, and the evolved state.

Alice's detector stays inertial and switched off; Rob's detector is
accelerated and couples to the field. The evolved state is produced two ways:
the closed-form X-shaped density matrix and Rob's three-operator Kraus
channel. The Kraus set is not trace preserving, so ``apply_channel``
renormalizes its output.
"""

import math
from dataclasses import dataclass, field
from typing import List, Tuple, Union

import numpy as np

from errors import DegenerateChannelError, DomainError
from numerics import as_matrix, check_density_matrix

THETA_MIN = 0.0
THETA_MAX = math.pi / 2
THETA_SLACK = 1e-12

# Order-of-magnitude readings of "nu^2 << 1" and "1/Omega << Delta".
NU2_WARN = 0.1
OMEGA_DELTA_WARN = 10.0

IDENTITY_2 = np.eye(2, dtype=np.complex128)


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not (THETA_MIN - THETA_SLACK <= theta <= THETA_MAX + THETA_SLACK):
        raise DomainError(f"theta must lie in [0, pi/2], got {theta!r}")
    return min(max(theta, THETA_MIN), THETA_MAX)


@dataclass(frozen=True)
class InitialStateParams:
    """Angle of the initial state sin(theta)|01> + cos(theta)|10>."""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", _check_theta(self.theta))


@dataclass(frozen=True)
class PhysicalParams:
    """Detector physics: coupling, gap, interaction window, smearing width, acceleration."""

    epsilon: float
    Omega: float
    Delta: float
    kappa: float
    a: float

    def __post_init__(self):
        if self.epsilon < 0:
            raise DomainError(f"epsilon must be >= 0, got {self.epsilon!r}")
        if self.Omega <= 0:
            raise DomainError(f"Omega must be > 0, got {self.Omega!r}")
        if self.Delta <= 0:
            raise DomainError(f"Delta must be > 0, got {self.Delta!r}")
        if self.kappa < 0:
            raise DomainError(f"kappa must be >= 0, got {self.kappa!r}")
        if self.a < 0:
            raise DomainError(f"acceleration must be >= 0, got {self.a!r}")


@dataclass(frozen=True)
class ChannelParams:
    """Parametrized acceleration q and effective coupling nu^2 of the Unruh channel."""

    q: float
    nu2: float

    def __post_init__(self):
        q = float(self.q)
        nu2 = float(self.nu2)
        if not 0.0 <= q <= 1.0:
            raise DomainError(f"q must lie in [0, 1], got {q!r}")
        if not 0.0 <= nu2 < 1.0:
            raise DomainError(f"nu2 must lie in [0, 1), got {nu2!r}")
        if q == 1.0 and nu2 == 0.0:
            raise DomainError("(q, nu2) = (1, 0) leaves the final state undefined")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "nu2", nu2)

    @property
    def nu(self) -> float:
        return math.sqrt(self.nu2)


@dataclass(frozen=True)
class FinalStateParams:
    """Scalars of the evolved state: alpha, beta, gamma and the normalization D."""

    alpha: float
    beta: float
    gamma: float
    theta: float
    D: float


@dataclass(frozen=True)
class EffectiveCoupling:
    nu2: float
    warning: bool
    reasons: Tuple[str, ...] = field(default_factory=tuple)


def initial_state(p: Union[InitialStateParams, float]) -> np.ndarray:
    """Projector onto sin(theta)|01> + cos(theta)|10>."""
    theta = p.theta if isinstance(p, InitialStateParams) else InitialStateParams(p).theta
    psi = np.array([0.0, math.sin(theta), math.cos(theta), 0.0], dtype=np.complex128)
    return np.outer(psi, psi.conj())


def acceleration_to_q(Omega: float, a: float) -> float:
    """q = exp(-2 pi Omega / a), with q = 0 at a = 0."""
    if Omega <= 0:
        raise DomainError(f"Omega must be > 0, got {Omega!r}")
    if a < 0:
        raise DomainError(f"acceleration must be >= 0, got {a!r}")
    if a == 0:
        return 0.0
    return math.exp(-2.0 * math.pi * Omega / a)


def q_to_acceleration(Omega: float, q: float) -> float:
    """Inverse of ``acceleration_to_q``; q = 1 maps to infinite acceleration."""
    if Omega <= 0:
        raise DomainError(f"Omega must be > 0, got {Omega!r}")
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"q must lie in [0, 1], got {q!r}")
    if q == 0.0:
        return 0.0
    if q == 1.0:
        return math.inf
    return -2.0 * math.pi * Omega / math.log(q)


def unruh_temperature(a: float) -> float:
    """Unruh temperature a / (2 pi) in natural units."""
    if a < 0:
        raise DomainError(f"acceleration must be >= 0, got {a!r}")
    return a / (2.0 * math.pi)


def effective_coupling(p: PhysicalParams) -> EffectiveCoupling:
    """
    nu^2 = epsilon^2 Omega Delta / (2 pi) * exp(-Omega^2 kappa^2).

    The warning flag marks results outside the perturbative regime; it never
    changes the value.

    Raises:
        DomainError: nu^2 >= 1
    """
    nu2 = p.epsilon ** 2 * p.Omega * p.Delta / (2.0 * math.pi) * math.exp(-(p.Omega * p.kappa) ** 2)
    if nu2 >= 1.0:
        raise DomainError(f"effective coupling nu2 = {nu2:.6g} >= 1, perturbative treatment invalid")

    reasons = []
    if nu2 >= NU2_WARN:
        reasons.append(f"nu2 = {nu2:.6g} is not << 1")
    if p.Omega * p.Delta <= OMEGA_DELTA_WARN:
        reasons.append(f"Omega*Delta = {p.Omega * p.Delta:.6g} is not >> 1")
    return EffectiveCoupling(nu2=nu2, warning=bool(reasons), reasons=tuple(reasons))


def physical_channel_params(p: PhysicalParams) -> Tuple[ChannelParams, EffectiveCoupling]:
    """Map detector physics onto (q, nu^2)."""
    coupling = effective_coupling(p)
    q = acceleration_to_q(p.Omega, p.a)
    return ChannelParams(q=q, nu2=coupling.nu2), coupling


def final_state_params(theta: float, cp: ChannelParams) -> FinalStateParams:
    """alpha, beta, gamma of the evolved state; 2 alpha + beta + gamma = 1."""
    theta = _check_theta(theta)
    q, nu2 = cp.q, cp.nu2
    sin2 = math.sin(theta) ** 2
    cos2 = math.cos(theta) ** 2

    D = (1.0 - q) + nu2 * (sin2 + q * cos2)
    if D <= 0.0:
        raise DegenerateChannelError(f"normalization D = {D!r} at theta={theta}, q={q}, nu2={nu2}")

    return FinalStateParams(
        alpha=(1.0 - q) / (2.0 * D),
        beta=nu2 * q * cos2 / D,
        gamma=nu2 * sin2 / D,
        theta=theta,
        D=D,
    )


def final_state_closed_form(theta: float, cp: ChannelParams) -> np.ndarray:
    """The evolved X-shaped density matrix built from alpha, beta, gamma."""
    fp = final_state_params(theta, cp)
    s, c = math.sin(fp.theta), math.cos(fp.theta)
    coherence = fp.alpha * math.sin(2.0 * fp.theta)

    rho = np.zeros((4, 4), dtype=np.complex128)
    rho[0, 0] = fp.gamma
    rho[1, 1] = 2.0 * fp.alpha * s * s
    rho[2, 2] = 2.0 * fp.alpha * c * c
    rho[3, 3] = fp.beta
    rho[1, 2] = coherence
    rho[2, 1] = coherence
    return rho


def kraus_operators(cp: ChannelParams) -> List[np.ndarray]:
    """Rob's Kraus operators M1 = sqrt(1-q) I, M2 = nu sqrt(q)|1><0|, M3 = nu |0><1|."""
    nu = cp.nu
    M1 = math.sqrt(1.0 - cp.q) * IDENTITY_2
    M2 = np.zeros((2, 2), dtype=np.complex128)
    M2[1, 0] = nu * math.sqrt(cp.q)
    M3 = np.zeros((2, 2), dtype=np.complex128)
    M3[0, 1] = nu
    return [M1, M2, M3]


def kraus_completeness(cp: ChannelParams) -> np.ndarray:
    """sum M^dagger M = diag(1 - q + q nu^2, 1 - q + nu^2); not the identity."""
    return sum(M.conj().T @ M for M in kraus_operators(cp))


def apply_channel_unnormalized(rho, cp: ChannelParams) -> np.ndarray:
    """sum_k (I x M_k) rho (I x M_k)^dagger without renormalization."""
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise DomainError("The channel acts on 4x4 two-detector states")
    out = np.zeros((4, 4), dtype=np.complex128)
    for M in kraus_operators(cp):
        K = np.kron(IDENTITY_2, M)
        out += K @ rho @ K.conj().T
    return out


def apply_channel(rho, cp: ChannelParams) -> np.ndarray:
    """
    Evolve a two-detector state through the Unruh channel acting on Rob's detector.

    Raises:
        InvalidDensityMatrixError: ``rho`` is not a density matrix
        DegenerateChannelError: the unnormalized output has zero trace
    """
    check_density_matrix(rho)
    out = apply_channel_unnormalized(rho, cp)
    trace = float(np.trace(out).real)
    if trace <= 0.0:
        raise DegenerateChannelError(
            f"Channel output has trace {trace!r} at q={cp.q}, nu2={cp.nu2}; cannot normalize"
        )
    return out / trace
