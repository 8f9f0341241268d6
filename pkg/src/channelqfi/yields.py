"""Closed-form quantum Fisher information yields for the four Gaussian probe classes.

The N-yields follow the convention in which the temperature SLD is generated
by alpha_N = (e^gamma - 1) P (see :mod:`channelqfi.sld`). Under that
convention every N-yield equals e^{2 gamma} times the Fisher information
with respect to N at fixed gamma; orderings and ratios are unaffected.

Exact yields are written in the variables x = n(n+1), y = N(N+1),
z = e^gamma - 1, t = n + N + 2nN. The zero-temperature forms and the
low/high-energy coefficients are coded separately so each can check the other.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularParameterError
from .gaussian import ChannelParams, GaussianState, ProbeClass

COH = ProbeClass.COHERENT
TH = ProbeClass.THERMAL
SQ = ProbeClass.SINGLE_MODE_SQUEEZED
TM = ProbeClass.TWO_MODE_SQUEEZED_VACUUM

ALL_CLASSES = (COH, TH, SQ, TM)
DOMINANCE_TOL = 1e-12


class Param(enum.Enum):
    GAMMA = "gamma"
    NBAR = "nbar"

    @classmethod
    def parse(cls, value) -> "Param":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        key = {"n": "nbar", "temperature": "nbar", "g": "gamma"}.get(key, key)
        for member in cls:
            if member.value == key:
                return member
        raise DomainError(f"unknown parameter {value!r}")


class Regime(enum.Enum):
    LOW_ENERGY = "low"
    HIGH_ENERGY = "high"


@dataclass(frozen=True)
class YieldVariables:
    x: float
    y: float
    z: float
    t: float
    delta2: float

    @classmethod
    def from_params(cls, n: float, theta: ChannelParams) -> "YieldVariables":
        N = theta.nbar
        return cls(
            x=n * (n + 1.0),
            y=N * (N + 1.0),
            z=theta.z,
            t=n + N + 2.0 * n * N,
            delta2=(n - N) ** 2,
        )


@dataclass(frozen=True)
class RegimeCoefficients:
    """Yield model ``constant + slope * n`` valid in one energy regime.

    Low energy: constant = J^(0) (vacuum yield), slope = J^(1).
    High energy: slope = J^(-1), constant = J^(0); for saturating classes
    slope is 0 and constant is the saturation value.
    """

    regime: Regime
    constant: float
    slope: float

    def model(self, n):
        return self.constant + self.slope * n


def _energy(n) -> float:
    n = float(n)
    if not math.isfinite(n) or n < 0:
        raise DomainError(f"probe energy must be finite and >= 0, got {n!r}")
    return n


def _require_z(z: float) -> None:
    if not z > 0:
        raise SingularParameterError("z=0: identity channel", "gamma must be > 0")


def _require_y(y: float) -> None:
    if not y > 0:
        raise SingularParameterError("y=0: zero-temperature bath", "the N-yield diverges as N -> 0")


# -- exact yields -------------------------------------------------------------


def _gamma_yield(c: ProbeClass, n: float, N: float, v: YieldVariables) -> float:
    x, y, z, t = v.x, v.y, v.z, v.t
    if c is COH:
        return (N / z) / (1 + z * (N + 1)) + n / (1 + z * (2 * N + 1))
    if c is TH:
        den = y * z * z + t * z + x
        # x + y - t = (n - N)^2; the vacuum at zero temperature gives 0/0 -> 0
        return v.delta2 / den if den > 0 else 0.0
    if c is SQ:
        # t(t+1) - y = x(1 + 4y)
        mid = y * t / (t + y * z) if y > 0 else 0.0
        return t / z - mid - 2 * x * (1 + 4 * y) / ((z + 1) ** 2 + 2 * z * (t + y * z))
    return (t + x * z) / (z * ((t + 1) * z + 1))


def _nbar_yield(c: ProbeClass, n: float, N: float, v: YieldVariables) -> float:
    x, y, z, t = v.x, v.y, v.z, v.t
    zz = z * (z + 1) ** 2
    if c is COH:
        return zz / ((1 + z * (N + 1)) * N)
    if c is TH:
        return z * zz / (x + z * (t + y * z))
    if c is SQ:
        num = zz * (1 + 4 * x + z * (2 * t + 2 * y * z + z + 2))
        den = t + z * (x * (8 * y + 2) + y * (z * (2 * y * z + z + 2) + 3)) + t * z * z * (1 + 4 * y)
        return num / den
    return (t + 1) * zz / (y * (t * z + z + 1))


def qfi(param, probe_class, n: float, theta: ChannelParams) -> float:
    """Exact yield J for one parameter, one probe class and probe energy n."""
    param = Param.parse(param)
    probe_class = ProbeClass.parse(probe_class)
    n = _energy(n)
    v = YieldVariables.from_params(n, theta)
    _require_z(v.z)
    if param is Param.GAMMA:
        return _gamma_yield(probe_class, n, theta.nbar, v)
    _require_y(v.y)
    return _nbar_yield(probe_class, n, theta.nbar, v)


def qfi_zero_temperature(probe_class, n: float, gamma: float) -> float:
    """gamma-yield of a zero-temperature bath (N = 0)."""
    probe_class = ProbeClass.parse(probe_class)
    n = _energy(n)
    if not gamma > 0:
        raise SingularParameterError("z=0: identity channel", "gamma must be > 0")
    z = math.expm1(gamma)
    if probe_class is COH:
        return n / (z + 1)
    if probe_class is TH:
        return n / (z + 1 + n)
    if probe_class is SQ:
        return (n / z) * (1 + z * z) / (1 + z * (z + 2 * (n + 1)))
    return n / z


# -- energy expansions --------------------------------------------------------


def vacuum_yield(param, theta: ChannelParams) -> float:
    """J^(0): the yield of the vacuum, common to every class at n -> 0."""
    param = Param.parse(param)
    z, N = theta.z, theta.nbar
    _require_z(z)
    if param is Param.GAMMA:
        return (N / z) / (1 + z * (N + 1))
    _require_y(N * (N + 1))
    return z * (z + 1) ** 2 / (N * (1 + z * (N + 1)))


def squeezing_sign_quantity(theta: ChannelParams) -> float:
    """X = 2(xi-1) - z(4 z xi^3 + (z+2) xi + 1), xi = N + 1/2.

    The low-energy N-slope of single-mode squeezed probes has the sign of X.
    """
    z, xi = theta.z, theta.nbar + 0.5
    return 2 * (xi - 1) - z * (4 * z * xi**3 + (z + 2) * xi + 1)


def squeezing_threshold_z(nbar: float) -> float:
    """Largest z for which X > 0; non-positive when N <= 1/2 (no gain possible)."""
    xi = nbar + 0.5
    return ((2 * xi - 1) * math.sqrt(8 * xi * xi + 1) - 2 * xi - 1) / (2 * xi * (4 * xi * xi + 1))


def _low_slope(param: Param, c: ProbeClass, theta: ChannelParams) -> float:
    z, N = theta.z, theta.nbar
    a = 1 + z * (N + 1)
    if param is Param.GAMMA:
        if c is COH:
            return 1 / (1 + z * (1 + 2 * N))
        if c is TH:
            return -(z + 1) * (1 + 2 * z * (N + 1)) / (z * z * a * a)
        if c is SQ:
            return (
                (2 * N + 1) / z
                - z * (1 + N) ** 2 * (1 + 2 * N) / (a * a)
                - 2 * (1 + 2 * N) ** 2 / ((1 + z) ** 2 + 2 * N * z * a)
            )
        return ((z + 1) ** 2 + N * (z * (z + 2) + 2)) / (z * a * a)
    if c is COH:
        return 0.0
    if c is TH:
        return -((z + 1) ** 2) * (z * (2 * N + 1) + 1) / (N * N * a * a)
    if c is SQ:
        xi = N + 0.5
        X = squeezing_sign_quantity(theta)
        d1 = 4 * z * xi * xi + 4 * xi - z - 2
        d2 = z * (4 * z * xi * xi + 4 * xi + z + 2) + 2
        if d1 == 0:
            # d1 vanishes as N -> 0; only reachable through underflow once y > 0
            raise SingularParameterError("y=0: zero-temperature bath", "the N-slope diverges as N -> 0")
        return 32 * z * (z + 1) ** 2 * X / (d1 * d1 * d2)
    return (2 * N + 1) * z * (z + 1) ** 2 / (N * (N + 1) * a * a)


def low_energy_expansion(param, probe_class, theta: ChannelParams) -> RegimeCoefficients:
    """Coefficients of J = J^(0) + J^(1) n + O(n^2)."""
    param = Param.parse(param)
    probe_class = ProbeClass.parse(probe_class)
    j0 = vacuum_yield(param, theta)
    return RegimeCoefficients(Regime.LOW_ENERGY, j0, _low_slope(param, probe_class, theta))


def high_energy_expansion(param, probe_class, theta: ChannelParams) -> RegimeCoefficients:
    """Coefficients of J = J^(-1) n + J^(0) + o(1) as n -> infinity."""
    param = Param.parse(param)
    c = ProbeClass.parse(probe_class)
    z, N = theta.z, theta.nbar
    _require_z(z)
    hi = Regime.HIGH_ENERGY
    if param is Param.GAMMA:
        if c is COH:
            return RegimeCoefficients(hi, (N / z) / (1 + z * (N + 1)), 1 / (1 + z * (2 * N + 1)))
        if c is TH:
            return RegimeCoefficients(hi, 1.0, 0.0)
        if c is SQ:
            return RegimeCoefficients(hi, 0.5 * (1 + 1 / (z * z)), 0.0)
        k = 2 * N + 1
        return RegimeCoefficients(hi, N * (4 * N + z + 4) / (z * z * k * k), 1 / (z * k))
    _require_y(N * (N + 1))
    if c is COH:
        return RegimeCoefficients(hi, vacuum_yield(param, theta), 0.0)
    if c is TH:
        return RegimeCoefficients(hi, 0.0, 0.0)
    if c is SQ:
        return RegimeCoefficients(hi, 2 * (1 + z) ** 2 / (2 * N + 1) ** 2, 0.0)
    return RegimeCoefficients(hi, (1 + z) ** 2 / (N * (N + 1)), 0.0)


def saturation_ratio_nbar(theta: ChannelParams) -> float:
    """lim_{n->inf} J_N(two-mode) / J_N(coherent) = 1 + 1/((N+1) z)."""
    _require_z(theta.z)
    return 1 + 1 / ((theta.nbar + 1) * theta.z)


@dataclass(frozen=True)
class Thresholds:
    n_coherent: float
    n_two_mode: float


def improvement_thresholds(theta: ChannelParams) -> Thresholds:
    """Probe energies where the linear gain J^(1) n equals the vacuum yield J^(0).

    Gamma estimation, coherent and two-mode squeezed probes.
    """
    z, N = theta.z, theta.nbar
    _require_z(z)
    n_coh = N * (z * (2 * N + 1) + 1) / (z * (z * (N + 1) + 1))
    n_2m = N * (z * (N + 1) + 1) / ((N + 1) * (z + 1) ** 2 + N)
    return Thresholds(n_coh, n_2m)


# -- comparisons and cost ----------------------------------------------------


@dataclass(frozen=True)
class DominanceReport:
    n: float
    theta: ChannelParams
    gamma_ordering: tuple
    nbar_ordering: tuple | None
    two_mode_maximal: bool


def _ordering(values: dict) -> tuple:
    return tuple(sorted(values.items(), key=lambda kv: (-kv[1], kv[0].value)))


def _dominates(values: dict, c: ProbeClass) -> bool:
    # relative slack: at n = 0 all classes coincide up to rounding
    return values[TM] - values[c] >= -DOMINANCE_TOL * max(1.0, abs(values[TM]))


def dominance_report(n: float, theta: ChannelParams) -> DominanceReport:
    """All four yields per parameter, sorted in decreasing order.

    The N ordering is omitted when N = 0 (the N-yields diverge there).
    """
    n = _energy(n)
    g = {c: qfi(Param.GAMMA, c, n, theta) for c in ALL_CLASSES}
    ok = all(_dominates(g, c) for c in ALL_CLASSES)
    nb = None
    if theta.nbar > 0:
        vals = {c: qfi(Param.NBAR, c, n, theta) for c in ALL_CLASSES}
        ok = ok and all(_dominates(vals, c) for c in ALL_CLASSES)
        nb = _ordering(vals)
    return DominanceReport(n, theta, _ordering(g), nb, ok)


@dataclass(frozen=True)
class WeightMatrix:
    """Positive semidefinite weight over (gamma, N) in the cost tr[G V]."""

    g: np.ndarray

    def __post_init__(self):
        g = np.array(self.g, dtype=float)
        if g.shape != (2, 2):
            raise DomainError("weight matrix must be 2x2")
        if abs(g[0, 1] - g[1, 0]) > 1e-12 * max(1.0, np.abs(g).max()):
            raise DomainError("weight matrix must be symmetric")
        if np.linalg.eigvalsh(g).min() < -1e-12:
            raise DomainError("weight matrix must be positive semidefinite")
        g.setflags(write=False)
        object.__setattr__(self, "g", g)

    @classmethod
    def gamma_only(cls) -> "WeightMatrix":
        return cls(np.diag([1.0, 0.0]))

    @classmethod
    def nbar_only(cls) -> "WeightMatrix":
        return cls(np.diag([0.0, 1.0]))

    @classmethod
    def identity(cls) -> "WeightMatrix":
        return cls(np.eye(2))

    @classmethod
    def combination(cls, coeffs) -> "WeightMatrix":
        """G = X X^T for interest in the single combination X . theta."""
        x = np.asarray(coeffs, dtype=float).reshape(2)
        return cls(np.outer(x, x))


def weighted_cr_bound(g, j) -> float:
    """tr[G J^-1], the Cramer-Rao lower bound on the weighted error cost."""
    g = g.g if isinstance(g, WeightMatrix) else WeightMatrix(g).g
    j = np.asarray(j, dtype=float)
    if j.shape != (2, 2) or abs(j[0, 1] - j[1, 0]) > 1e-9 * max(1.0, np.abs(j).max()):
        raise DomainError("QFI matrix must be a symmetric 2x2 matrix")
    ev = np.linalg.eigvalsh(0.5 * (j + j.T))
    if ev.min() <= 1e-14 * max(1.0, ev.max()):
        raise SingularParameterError("singular QFI matrix", "the bound is infinite")
    return float(np.trace(g @ np.linalg.inv(j)))


# -- single-mode yields in terms of output parameters -------------------------


def single_mode_output_parameters(state: GaussianState) -> tuple:
    """(nu, r, d) of a one-mode state: symplectic eigenvalue, squeezing, and
    first moments in the principal frame (d[0] along the anti-squeezed axis)."""
    if state.num_modes != 1:
        raise DomainError("expected a one-mode state")
    w, vecs = np.linalg.eigh(state.cov)
    lo, hi = w
    nu = 2.0 * math.sqrt(lo * hi)
    r = 0.25 * math.log(hi / lo)
    d = vecs.T @ state.mean
    return nu, r, np.array([d[1], d[0]])


def single_mode_yield(param, nu: float, r: float, d, theta: ChannelParams) -> float:
    """Yields of a one-mode output state with parameters (nu, r, d)."""
    param = Param.parse(param)
    if not nu > 1:
        raise SingularParameterError("nu=1: pure output state", "single-mode yield undefined")
    d1, d2 = float(d[0]), float(d[1])
    nu2 = nu * nu
    shape = (1 + nu2 * math.cosh(4 * r)) / (nu2 * nu2 - 1)
    if param is Param.NBAR:
        return 4 * theta.z**2 * shape
    xi = theta.nbar + 0.5
    return (
        (d1 * d1 * math.exp(-2 * r) + d2 * d2 * math.exp(2 * r)) / (2 * nu)
        + nu2 / (nu2 - 1)
        + 4 * xi * xi * shape
        - 4 * xi * nu * math.cosh(2 * r) / (nu2 - 1)
    )
