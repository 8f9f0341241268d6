"""Symmetric logarithmic derivatives of Gaussian channel outputs as quadratic observables.

The channel derivative along parameter mu acts on the output state as

    D_mu rho = alpha_mu[i, j] (R^i rho R^j - (R^j R^i) o rho),

so the SLD is Lambda_mu = alpha_mu[i, j] L^{ij}, with L^{ij} the SLD of the
elementary generator (i, j). Each L^{ij} is quadratic in the centred
quadratures; its quadratic kernel solves

    Dfrak[A] = Sigma~^T A Sigma~ - A/4 = (1/2) Omega^T dSigma Omega,   Sigma~ = Sigma Omega,

a 16x16 linear system for two modes (Dfrak is the transpose of
Sigma~ x Sigma~ - 1/4 1 x 1). The system is solved directly; the geometric
series for Dfrak^-1 diverges for physical states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SingularDError, SingularParameterError
from .gaussian import ChannelParams, GaussianState, apply_channel, require_valid, symplectic_eigenvalues, symplectic_form
from .yields import Param

NEAR_PURE_TOL = 1e-8
HERMITIAN_TOL = 1e-10
DECOUPLED_TOL = 1e-14


@dataclass(frozen=True)
class QuadraticObservable:
    """c 1 + v_k R~^k + M_kl R~^k o R~^l with R~ = R - center.

    ``center`` defaults to zero, i.e. the raw quadratures.
    """

    constant: complex
    linear: np.ndarray
    quadratic: np.ndarray
    center: np.ndarray = None

    def __post_init__(self):
        v = np.array(self.linear, dtype=complex).reshape(-1)
        m = np.array(self.quadratic, dtype=complex)
        if m.shape != (v.size, v.size):
            raise DomainError("quadratic part must be square and match the linear part")
        if np.max(np.abs(m - m.T), initial=0.0) > 1e-12 * max(1.0, np.abs(m).max(initial=0.0)):
            raise DomainError("quadratic part must be symmetric")
        m = 0.5 * (m + m.T)
        ctr = np.zeros(v.size) if self.center is None else np.array(self.center, dtype=float).reshape(-1)
        if ctr.size != v.size:
            raise DomainError("center has the wrong length")
        for a in (v, m, ctr):
            a.setflags(write=False)
        object.__setattr__(self, "constant", complex(self.constant))
        object.__setattr__(self, "linear", v)
        object.__setattr__(self, "quadratic", m)
        object.__setattr__(self, "center", ctr)

    @classmethod
    def identity(cls, dim: int) -> "QuadraticObservable":
        return cls(1.0, np.zeros(dim), np.zeros((dim, dim)))

    @property
    def dim(self) -> int:
        return self.linear.size

    def recentered(self, new_center) -> "QuadraticObservable":
        """Same operator written in R - new_center."""
        delta = np.asarray(new_center, dtype=float) - self.center
        m, v = self.quadratic, self.linear
        c = self.constant + v @ delta + delta @ m @ delta
        return QuadraticObservable(c, v + 2 * m @ delta, m, new_center)

    def adjoint(self) -> "QuadraticObservable":
        return QuadraticObservable(np.conj(self.constant), np.conj(self.linear), np.conj(self.quadratic), self.center)

    def hermiticity_defect(self) -> float:
        return max(
            abs(self.constant.imag),
            float(np.abs(self.linear.imag).max(initial=0.0)),
            float(np.abs(self.quadratic.imag).max(initial=0.0)),
        )

    def __add__(self, other):
        other = other.recentered(self.center)
        return QuadraticObservable(
            self.constant + other.constant, self.linear + other.linear, self.quadratic + other.quadratic, self.center
        )

    def scaled(self, k) -> "QuadraticObservable":
        return QuadraticObservable(k * self.constant, k * self.linear, k * self.quadratic, self.center)


@dataclass(frozen=True)
class AlphaPair:
    """Generator matrices of the channel derivatives, alpha_mu = kappa_mu P + i iota_mu Q."""

    alpha_gamma: np.ndarray
    alpha_nbar: np.ndarray
    kappa_gamma: float
    iota_gamma: float
    kappa_nbar: float
    iota_nbar: float
    P: np.ndarray = field(repr=False)
    Q: np.ndarray = field(repr=False)

    def for_param(self, param) -> np.ndarray:
        return self.alpha_gamma if Param.parse(param) is Param.GAMMA else self.alpha_nbar


def alpha_matrices(theta: ChannelParams, num_modes: int = 2) -> AlphaPair:
    """alpha_gamma = [[N+1/2, -i/2], [i/2, N+1/2]] (+) 0 and alpha_N = (e^gamma - 1) I (+) 0.

    With Q = omega (+) 0 this gives iota_gamma = -1/2.
    """
    dim = 2 * num_modes
    P = np.zeros((dim, dim))
    P[:2, :2] = np.eye(2)
    Q = np.zeros((dim, dim))
    Q[:2, :2] = [[0.0, 1.0], [-1.0, 0.0]]
    kg, ig = theta.nbar + 0.5, -0.5
    kn, in_ = theta.z, 0.0
    return AlphaPair(
        alpha_gamma=kg * P + 1j * ig * Q,
        alpha_nbar=kn * P + 1j * in_ * Q,
        kappa_gamma=kg,
        iota_gamma=ig,
        kappa_nbar=kn,
        iota_nbar=in_,
        P=P,
        Q=Q,
    )


def generator_moment_derivatives(alpha, mean, cov) -> tuple:
    """(d mean, d cov) produced by the generator with coefficient matrix alpha.

    Linear in alpha: drift F = (i/2) Omega (alpha - alpha^T) acts on the moments,
    the symmetric part of alpha adds diffusion.
    """
    alpha = np.asarray(alpha, dtype=complex)
    om = symplectic_form(len(mean) // 2)
    drift = 0.5j * om @ (alpha - alpha.T)
    dmean = drift @ mean
    dcov = 0.5 * (alpha + alpha.T) + drift @ cov + cov @ drift.T
    return dmean, dcov


def d_superoperator(cov) -> np.ndarray:
    """Matrix of Dfrak[A] = Sigma~^T A Sigma~ - A/4 acting on row-major vec(A)."""
    cov = np.asarray(cov, dtype=float)
    st = cov @ symplectic_form(cov.shape[0] // 2)
    return np.kron(st.T, st.T) - 0.25 * np.eye(cov.size)


def _check_mixed(cov) -> None:
    nu = symplectic_eigenvalues(cov)
    if nu.min() - 0.5 < NEAR_PURE_TOL:
        raise SingularDError(
            "nu=1/2: near-pure output state",
            f"min symplectic eigenvalue exceeds 1/2 by {nu.min() - 0.5:.3g}; "
            "the identity-channel limit gamma -> 0 or a pure-loss output",
        )


def sld_from_moments(state: GaussianState, dmean, dcov) -> QuadraticObservable:
    """SLD of a Gaussian family at ``state`` with the given moment derivatives."""
    cov = state.cov
    _check_mixed(cov)
    dim = cov.shape[0]
    om = symplectic_form(dim // 2)
    rhs = 0.5 * om.T @ np.asarray(dcov) @ om
    a = np.linalg.solve(d_superoperator(cov), rhs.reshape(-1)).reshape(dim, dim)
    a = 0.5 * (a + a.T)
    v = np.linalg.solve(cov, np.asarray(dmean))
    c = -np.trace(a @ cov)
    return QuadraticObservable(c, v, a, state.mean)


def l_tensors(state: GaussianState) -> np.ndarray:
    """Elementary SLDs L^{ij} packed as an array of shape (dim, dim) of observables."""
    cov, mean = state.cov, state.mean
    _check_mixed(cov)
    dim = cov.shape[0]
    om = symplectic_form(dim // 2)
    dmat = d_superoperator(cov)
    rhs, lin = [], []
    for i in range(dim):
        for j in range(dim):
            e = np.zeros((dim, dim))
            e[i, j] = 1.0
            dm, dc = generator_moment_derivatives(e, mean, cov)
            rhs.append((0.5 * om.T @ dc @ om).reshape(-1))
            lin.append(dm)
    quad = np.linalg.solve(dmat, np.array(rhs).T).T
    vs = np.linalg.solve(cov, np.array(lin).T).T
    out = np.empty((dim, dim), dtype=object)
    for k in range(dim * dim):
        a = quad[k].reshape(dim, dim)
        a = 0.5 * (a + a.T)
        out[k // dim, k % dim] = QuadraticObservable(-np.trace(a @ cov), vs[k], a, mean)
    return out


def _contract(alpha, ltens) -> QuadraticObservable:
    dim = alpha.shape[0]
    c = sum(alpha[i, j] * ltens[i, j].constant for i in range(dim) for j in range(dim))
    v = sum(alpha[i, j] * ltens[i, j].linear for i in range(dim) for j in range(dim))
    m = sum(alpha[i, j] * ltens[i, j].quadratic for i in range(dim) for j in range(dim))
    return QuadraticObservable(c, v, m, ltens[0, 0].center)


def _reduce(probe: GaussianState) -> GaussianState:
    """Drop an ancilla that is uncorrelated with mode a (its SLD factor is the identity)."""
    if probe.num_modes == 2 and np.max(np.abs(probe.cov[:2, 2:])) <= DECOUPLED_TOL:
        return probe.reduced(0)
    return probe


def _embed(obs: QuadraticObservable, dim: int, center) -> QuadraticObservable:
    if obs.dim == dim:
        return obs
    v = np.zeros(dim, dtype=complex)
    m = np.zeros((dim, dim), dtype=complex)
    v[: obs.dim] = obs.linear
    m[: obs.dim, : obs.dim] = obs.quadratic
    ctr = np.array(center, dtype=float)
    ctr[: obs.dim] = obs.center
    return QuadraticObservable(obs.constant, v, m, ctr)


def _require_param_domain(param: Param, theta: ChannelParams) -> None:
    if not theta.z > 0:
        raise SingularParameterError("z=0: identity channel", "gamma must be > 0")
    if param is Param.NBAR and not theta.nbar > 0:
        raise SingularParameterError("y=0: zero-temperature bath", "J_NN diverges as N -> 0")


def build_sld(probe: GaussianState, theta: ChannelParams, param, *, strict_hermitian: bool = True) -> QuadraticObservable:
    """SLD of the channel output with respect to gamma or N, on the probe's modes.

    Single-mode probes, and two-mode probes whose ancilla is uncorrelated,
    are handled on mode a alone and embedded back.
    """
    param = Param.parse(param)
    require_valid(probe)
    _require_param_domain(param, theta)
    core = _reduce(probe)
    out = apply_channel(core, theta)
    alpha = alpha_matrices(theta, core.num_modes).for_param(param)
    sld = _contract(alpha, l_tensors(out))
    if strict_hermitian and sld.hermiticity_defect() > HERMITIAN_TOL * max(1.0, _magnitude(sld)):
        raise ArithmeticError(f"assembled SLD is not Hermitian (defect {sld.hermiticity_defect():.3g})")
    full_center = apply_channel(probe, theta).mean
    return _embed(sld, 2 * probe.num_modes, full_center)


def _magnitude(obs: QuadraticObservable) -> float:
    return max(abs(obs.constant), float(np.abs(obs.linear).max()), float(np.abs(obs.quadratic).max()))


def wick_expectation(state: GaussianState, a: QuadraticObservable, b: QuadraticObservable) -> complex:
    """<A B> on a Gaussian state via Isserlis pairing of G = Sigma + (i/2) Omega."""
    dim = 2 * state.num_modes
    if a.dim != dim or b.dim != dim:
        raise DomainError("observable dimension does not match the state")
    a = a.recentered(state.mean)
    b = b.recentered(state.mean)
    cov = state.cov
    g = cov + 0.5j * symplectic_form(state.num_modes)
    ta = np.trace(a.quadratic @ cov)
    tb = np.trace(b.quadratic @ cov)
    quartic = ta * tb + 2 * np.trace(a.quadratic @ g @ b.quadratic @ g.T)
    return complex(
        a.constant * b.constant
        + a.constant * tb
        + b.constant * ta
        + a.linear @ g @ b.linear
        + quartic
    )


def expectation(state: GaussianState, a: QuadraticObservable) -> complex:
    return wick_expectation(state, a, QuadraticObservable.identity(a.dim))


def qfi_matrix(probe: GaussianState, theta: ChannelParams) -> np.ndarray:
    """2x2 QFI matrix over (gamma, N): J_mu,nu = Re <Lambda_mu Lambda_nu> on the output."""
    out = apply_channel(probe, theta)
    slds = [build_sld(probe, theta, p) for p in (Param.GAMMA, Param.NBAR)]
    j = np.empty((2, 2))
    for i in range(2):
        for k in range(i, 2):
            j[i, k] = j[k, i] = wick_expectation(out, slds[i], slds[k]).real
    return j


def commutator_expectation(probe: GaussianState, theta: ChannelParams) -> complex:
    """tr[rho [Lambda_gamma, Lambda_N]] = 2i Im <Lambda_gamma Lambda_N>."""
    out = apply_channel(probe, theta)
    lg = build_sld(probe, theta, Param.GAMMA)
    ln = build_sld(probe, theta, Param.NBAR)
    return wick_expectation(out, lg, ln) - wick_expectation(out, ln, lg)


def channel_moment_derivatives(probe: GaussianState, theta: ChannelParams, param) -> tuple:
    """Output-moment derivatives generated by alpha_param.

    For gamma these are d/dgamma of the output moments. For N the generator
    alpha_N = (e^gamma - 1) P yields e^gamma times d/dN.
    """
    param = Param.parse(param)
    out = apply_channel(probe, theta)
    alpha = alpha_matrices(theta, probe.num_modes).for_param(param)
    dm, dc = generator_moment_derivatives(alpha, out.mean, out.cov)
    return dm.real, dc.real


def pairing_with_derivative(obs: QuadraticObservable, state: GaussianState, dmean, dcov) -> complex:
    """tr[d rho  O] for a Gaussian tangent (dmean, dcov) at ``state``."""
    o = obs.recentered(state.mean)
    return complex(o.linear @ np.asarray(dmean) + np.trace(o.quadratic @ np.asarray(dcov)))
