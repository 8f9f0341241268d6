"""Gaussian states in the moment picture and the dissipative channel acting on them.

Conventions: hbar = 1, vacuum covariance I/2, quadratures ordered
(Q1, P1, Q2, P2). The channel always acts on the first mode; the second
mode, when present, is an untouched ancilla.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvalidStateError

OMEGA_1 = np.array([[0.0, 1.0], [-1.0, 0.0]])

VALIDITY_TOL = 1e-10
PURITY_TOL = 1e-10
SYMMETRY_TOL = 1e-12


def symplectic_form(num_modes: int) -> np.ndarray:
    return np.kron(np.eye(num_modes), OMEGA_1)


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ChannelParams:
    """Channel parameters theta = (gamma, nbar)."""

    gamma: float
    nbar: float

    def __post_init__(self):
        for name in ("gamma", "nbar"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise DomainError(f"{name} must be finite and >= 0, got {v!r}")
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "nbar", float(self.nbar))

    @property
    def z(self) -> float:
        """e^gamma - 1."""
        return math.expm1(self.gamma)

    @property
    def eta(self) -> float:
        """Transmissivity e^-gamma of the equivalent loss channel."""
        return math.exp(-self.gamma)

    def as_vector(self) -> np.ndarray:
        return np.array([self.gamma, self.nbar])


class ProbeClass(enum.Enum):
    COHERENT = "coherent"
    THERMAL = "thermal"
    SINGLE_MODE_SQUEEZED = "squeezed"
    TWO_MODE_SQUEEZED_VACUUM = "two-mode"

    @classmethod
    def parse(cls, value) -> "ProbeClass":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {
            "coh": "coherent",
            "th": "thermal",
            "sq": "squeezed",
            "single-mode-squeezed": "squeezed",
            "two_mode": "two-mode",
            "2-m": "two-mode",
            "tmsv": "two-mode",
            "two-mode-squeezed-vacuum": "two-mode",
        }
        key = aliases.get(key, key)
        for member in cls:
            if member.value == key:
                return member
        raise DomainError(f"unknown probe class {value!r}")


@dataclass(frozen=True)
class GaussianState:
    """First moments and covariance matrix of a one- or two-mode Gaussian state.

    Construction checks shapes and symmetry only; physicality is diagnosed
    by :func:`validate_state` so that invalid matrices can still be inspected.
    """

    mean: np.ndarray
    cov: np.ndarray
    num_modes: int = field(init=False)

    def __post_init__(self):
        mean = _frozen(self.mean).reshape(-1)
        cov = _frozen(self.cov)
        if mean.size not in (2, 4):
            raise InvalidStateError(f"mean must have length 2 or 4, got {mean.size}")
        if cov.shape != (mean.size, mean.size):
            raise InvalidStateError(f"cov shape {cov.shape} does not match mean length {mean.size}")
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise InvalidStateError("moments must be finite")
        scale = max(1.0, float(np.max(np.abs(cov))))
        if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL * scale:
            raise InvalidStateError("covariance matrix is not symmetric")
        mean = mean.copy()
        mean.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "num_modes", mean.size // 2)

    @classmethod
    def vacuum(cls, num_modes: int = 1) -> "GaussianState":
        return cls(np.zeros(2 * num_modes), np.eye(2 * num_modes) / 2)

    def with_ancilla(self) -> "GaussianState":
        """Append a vacuum ancilla; two-mode states are returned unchanged."""
        if self.num_modes == 2:
            return self
        cov = np.eye(4) / 2
        cov[:2, :2] = self.cov
        return GaussianState(np.concatenate([self.mean, np.zeros(2)]), cov)

    def reduced(self, mode: int) -> "GaussianState":
        sl = slice(2 * mode, 2 * mode + 2)
        return GaussianState(self.mean[sl], self.cov[sl, sl])


@dataclass(frozen=True)
class StateDiagnostics:
    symplectic_eigenvalues: tuple
    purity: float
    is_valid: bool
    is_pure: bool


def symplectic_eigenvalues(cov) -> np.ndarray:
    """Symplectic spectrum, ascending, from the eigenvalues of |i Omega cov|."""
    cov = np.asarray(cov, dtype=float)
    m = cov.shape[0] // 2
    ev = np.linalg.eigvals(1j * symplectic_form(m) @ cov)
    return np.sort(np.abs(ev.real))[::2]


def validate_state(state: GaussianState) -> StateDiagnostics:
    nu = symplectic_eigenvalues(state.cov)
    # purity tr(rho^2) = prod_k 1/(2 nu_k)
    purity = float(np.prod(1.0 / (2.0 * nu))) if np.all(nu > 0) else float("inf")
    valid = bool(nu.min() >= 0.5 - VALIDITY_TOL)
    pure = bool(valid and np.all(np.abs(nu - 0.5) <= PURITY_TOL))
    return StateDiagnostics(tuple(float(v) for v in nu), purity, valid, pure)


def require_valid(state: GaussianState) -> None:
    diag = validate_state(state)
    if not diag.is_valid:
        raise InvalidStateError(
            f"uncertainty principle violated: min symplectic eigenvalue "
            f"{min(diag.symplectic_eigenvalues):.6g} < 1/2"
        )


def _check_energy(n) -> float:
    n = float(n)
    if not math.isfinite(n) or n < 0:
        raise DomainError(f"probe energy must be finite and >= 0, got {n!r}")
    return n


def make_probe(probe_class, n: float) -> GaussianState:
    """Phase-standard probe of the given class with mean photon number n in mode a.

    Single-mode classes return one-mode states; the two-mode squeezed vacuum
    uses the sign pattern (-sinh, +sinh) on the (Q1,Q2), (P1,P2) correlations.
    """
    probe_class = ProbeClass.parse(probe_class)
    n = _check_energy(n)
    if probe_class is ProbeClass.COHERENT:
        return GaussianState([math.sqrt(2.0 * n), 0.0], np.eye(2) / 2)
    if probe_class is ProbeClass.THERMAL:
        return GaussianState([0.0, 0.0], (n + 0.5) * np.eye(2))
    if probe_class is ProbeClass.SINGLE_MODE_SQUEEZED:
        # cosh 2r = 2n+1, sinh 2r = 2 sqrt(n(n+1)); e^{+-2r} = cosh 2r +- sinh 2r
        ch, sh = 2.0 * n + 1.0, 2.0 * math.sqrt(n * (n + 1.0))
        return GaussianState([0.0, 0.0], np.diag([ch + sh, 1.0 / (ch + sh)]) / 2)
    ch, sh = 2.0 * n + 1.0, 2.0 * math.sqrt(n * (n + 1.0))
    return GaussianState(np.zeros(4), tmsv_covariance(ch, sh))


def tmsv_covariance(cosh2r: float, sinh2r: float) -> np.ndarray:
    c, s = cosh2r / 2, sinh2r / 2
    return np.array(
        [
            [c, 0.0, -s, 0.0],
            [0.0, c, 0.0, s],
            [-s, 0.0, c, 0.0],
            [0.0, s, 0.0, c],
        ]
    )


def tmsv_from_squeezing(r0: float) -> GaussianState:
    return GaussianState(np.zeros(4), tmsv_covariance(math.cosh(2 * r0), math.sinh(2 * r0)))


def apply_channel(state: GaussianState, theta: ChannelParams) -> GaussianState:
    """Dissipative channel on mode a: Sigma_a -> e^-g Sigma_a + (1 - e^-g)(N + 1/2) I."""
    require_valid(state)
    m = state.num_modes
    k = np.ones(2 * m)
    k[:2] = math.exp(-theta.gamma / 2)
    noise = np.zeros((2 * m, 2 * m))
    noise[:2, :2] = -math.expm1(-theta.gamma) * (theta.nbar + 0.5) * np.eye(2)
    cov = k[:, None] * state.cov * k[None, :] + noise
    return GaussianState(k * state.mean, cov)


def mean_photon_number(state: GaussianState, mode: int = 0) -> float:
    if not 0 <= mode < state.num_modes:
        raise DomainError(f"mode {mode} out of range for a {state.num_modes}-mode state")
    i = 2 * mode
    c, d = state.cov, state.mean
    return 0.5 * (c[i, i] + c[i + 1, i + 1] - 1.0) + 0.5 * (d[i] ** 2 + d[i + 1] ** 2)


def phase_rotation(num_modes: int, mode: int, phi: float) -> np.ndarray:
    """Symplectic orthogonal matrix of a phase shift by phi on one mode."""
    s = np.eye(2 * num_modes)
    c, sn = math.cos(phi), math.sin(phi)
    i = 2 * mode
    s[i : i + 2, i : i + 2] = [[c, sn], [-sn, c]]
    return s


def transform(state: GaussianState, s: np.ndarray) -> GaussianState:
    return GaussianState(s @ state.mean, s @ state.cov @ s.T)


def standard_form(state: GaussianState) -> tuple:
    """(a, b, c) of a two-mode covariance [[aI, cZ'], [cZ', bI]] with Z' = diag(-1, 1).

    Z' matches the correlation pattern produced by :func:`make_probe` for the
    two-mode squeezed vacuum, so c >= 0 for those probes and their channel outputs.
    """
    if state.num_modes != 2:
        raise DomainError("standard form is defined for two-mode states")
    cv = state.cov
    a = 0.5 * (cv[0, 0] + cv[1, 1])
    b = 0.5 * (cv[2, 2] + cv[3, 3])
    c = 0.5 * (cv[1, 3] - cv[0, 2])
    return a, b, c
