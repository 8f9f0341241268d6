"""Truncated Fock-space computations for the zero-temperature loss channel.

At N = 0 photons only leave mode a, so a probe supported on at most d-1
photons stays inside the same cutoff and the computation is exact.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

NORM_TOL = 1e-12
ENTROPY_FLOOR = 1e-15
EIG_REL_EPS = 1e-12


@dataclass(frozen=True)
class PureFockState:
    """Bipartite pure state with amplitudes psi[m_a, m_b]."""

    amplitudes: np.ndarray

    def __post_init__(self):
        psi = np.array(self.amplitudes, dtype=complex)
        if psi.ndim == 1:
            psi = psi[:, None]
        if psi.ndim != 2 or min(psi.shape) < 1:
            raise DomainError("amplitudes must be a non-empty dim_a x dim_b array")
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > NORM_TOL:
            raise DomainError(f"state is not normalised (norm {norm:.15g})")
        psi.setflags(write=False)
        object.__setattr__(self, "amplitudes", psi)

    @classmethod
    def normalized(cls, amplitudes) -> "PureFockState":
        psi = np.array(amplitudes, dtype=complex)
        return cls(psi / np.linalg.norm(psi))

    @property
    def dim_a(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def dim_b(self) -> int:
        return self.amplitudes.shape[1]

    def populations_a(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    def mean_photon_number(self) -> float:
        return float(np.arange(self.dim_a) @ self.populations_a())

    def padded(self, dim_a: int, dim_b: int | None = None) -> "PureFockState":
        dim_b = self.dim_b if dim_b is None else dim_b
        if dim_a < self.dim_a or dim_b < self.dim_b:
            raise DomainError("padding cannot shrink the state")
        psi = np.zeros((dim_a, dim_b), dtype=complex)
        psi[: self.dim_a, : self.dim_b] = self.amplitudes
        return PureFockState(psi)


@dataclass(frozen=True)
class FockDensityMatrix:
    dim_a: int
    dim_b: int
    matrix: np.ndarray

    def photon_number_a(self) -> float:
        diag = np.real(np.diag(self.matrix)).reshape(self.dim_a, self.dim_b)
        return float(np.arange(self.dim_a) @ diag.sum(axis=1))


def _check_gamma(gamma: float, strict: bool = False) -> float:
    gamma = float(gamma)
    if not math.isfinite(gamma) or gamma < 0 or (strict and gamma == 0):
        bound = "> 0" if strict else ">= 0"
        raise DomainError(f"gamma must be finite and {bound}, got {gamma!r}")
    return gamma


def _kraus_elements(gamma: float, dim: int, derivative: bool):
    eta = math.exp(-gamma)
    loss = -math.expm1(-gamma)
    ops = np.zeros((dim, dim, dim))
    for k in range(dim):
        for m in range(k, dim):
            b = math.sqrt(math.comb(m, k))
            if not derivative:
                ops[k, m - k, m] = b * loss ** (k / 2) * eta ** ((m - k) / 2)
                continue
            # d/dgamma with d eta/dgamma = -eta
            val = -0.5 * (m - k) * loss ** (k / 2) * eta ** ((m - k) / 2)
            if k > 0:
                val += 0.5 * k * loss ** (k / 2 - 1) * eta ** ((m - k) / 2 + 1)
            ops[k, m - k, m] = b * val
    return ops


def loss_kraus(gamma: float, dim: int) -> list:
    """Kraus operators A_0..A_{dim-1} of the pure-loss channel with eta = e^-gamma."""
    gamma = _check_gamma(gamma)
    if dim < 1:
        raise DomainError("dim must be >= 1")
    return list(_kraus_elements(gamma, dim, derivative=False))


def loss_kraus_derivatives(gamma: float, dim: int) -> list:
    """d A_k / d gamma."""
    gamma = _check_gamma(gamma)
    return list(_kraus_elements(gamma, dim, derivative=True))


def _branches(state: PureFockState, ops) -> np.ndarray:
    # columns are vec(A_k psi), row-major over (m_a, m_b)
    return np.stack([(a @ state.amplitudes).reshape(-1) for a in ops], axis=1)


def propagate(state: PureFockState, gamma: float) -> FockDensityMatrix:
    """rho = sum_k (A_k x 1)|psi><psi|(A_k x 1)^dagger."""
    phi = _branches(state, loss_kraus(gamma, state.dim_a))
    return FockDensityMatrix(state.dim_a, state.dim_b, phi @ phi.conj().T)


def propagate_derivative(state: PureFockState, gamma: float) -> np.ndarray:
    """d rho / d gamma assembled from the Kraus derivatives."""
    phi = _branches(state, loss_kraus(gamma, state.dim_a))
    dphi = _branches(state, loss_kraus_derivatives(gamma, state.dim_a))
    x = dphi @ phi.conj().T
    return x + x.conj().T


def spectral_qfi(rho: np.ndarray, drho: np.ndarray, rel_eps: float = EIG_REL_EPS) -> float:
    """2 sum_{jk} |<j|drho|k>|^2 / (l_j + l_k), skipping pairs with l_j + l_k <= eps tr(rho)."""
    lam, vecs = np.linalg.eigh(rho)
    lam = np.clip(lam, 0.0, None)
    d = vecs.conj().T @ drho @ vecs
    s = lam[:, None] + lam[None, :]
    keep = s > rel_eps * float(np.real(np.trace(rho)))
    return float(2.0 * np.sum(np.abs(d[keep]) ** 2 / s[keep]))


def qfi_gamma_fock(state: PureFockState, gamma: float, rel_eps: float = EIG_REL_EPS) -> float:
    """Exact J_gamma at N = 0 for a truncated bipartite pure probe.

    rho and d rho both live in the span of the branch vectors A_k psi and
    their derivatives, so the spectral sum is evaluated in that subspace
    (dimension <= 2 dim_a) instead of the full dim_a dim_b space.
    """
    gamma = _check_gamma(gamma, strict=True)
    phi = _branches(state, loss_kraus(gamma, state.dim_a))
    dphi = _branches(state, loss_kraus_derivatives(gamma, state.dim_a))
    basis, _ = np.linalg.qr(np.hstack([phi, dphi]))
    p, dp = basis.conj().T @ phi, basis.conj().T @ dphi
    x = dp @ p.conj().T
    return spectral_qfi(p @ p.conj().T, x + x.conj().T, rel_eps)


# -- probe states ------------------------------------------------------------


def _seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, (list, tuple)):
        return np.random.SeedSequence([int(s) & (2**64 - 1) for s in seed])
    return np.random.SeedSequence(int(seed) & (2**64 - 1))


def sample_haar_state(dim_a: int, dim_b: int, seed) -> PureFockState:
    """Haar-random pure state: normalised vector of i.i.d. standard complex Gaussians."""
    if dim_a < 1 or dim_b < 1:
        raise DomainError("dims must be >= 1")
    rng = np.random.default_rng(_seed_sequence(seed))
    z = rng.standard_normal((dim_a, dim_b, 2))
    return PureFockState.normalized(z[..., 0] + 1j * z[..., 1])


def max_entangled(d: int) -> PureFockState:
    """(1/sqrt d) sum_k |k>|k>."""
    if d < 1:
        raise DomainError("d must be >= 1")
    return PureFockState(np.eye(d) / math.sqrt(d))


def entanglement_entropy(state: PureFockState) -> float:
    """Entropy of the reduced state of mode a, in nats."""
    p = np.linalg.svd(state.amplitudes, compute_uv=False) ** 2
    p = p[p >= ENTROPY_FLOOR]
    return float(max(0.0, -np.sum(p * np.log(p))))


def coherent_fock(n: float, cutoff: int) -> tuple:
    """Coherent state with mean photon number n in mode a (mode b in vacuum).

    Returns the renormalised truncated state and the discarded tail mass.
    """
    amp = np.zeros(cutoff)
    amp[0] = math.exp(-n / 2)
    for m in range(1, cutoff):
        amp[m] = amp[m - 1] * math.sqrt(n / m)
    tail = max(0.0, 1.0 - float(np.sum(amp**2)))
    return PureFockState.normalized(amp[:, None]), tail


def squeezed_fock(n: float, cutoff: int) -> tuple:
    """Single-mode squeezed vacuum with sinh^2 r = n in mode a; (state, tail mass)."""
    r = math.asinh(math.sqrt(n))
    th = math.tanh(r)
    amp = np.zeros(cutoff)
    for k in range(0, cutoff, 2):
        j = k // 2
        logc = 0.5 * math.lgamma(k + 1) - j * math.log(2.0) - math.lgamma(j + 1)
        amp[k] = math.exp(logc) * th**j / math.sqrt(math.cosh(r))
    tail = max(0.0, 1.0 - float(np.sum(amp**2)))
    return PureFockState.normalized(amp[:, None]), tail


def tmsv_fock(n: float, cutoff: int) -> tuple:
    """Two-mode squeezed vacuum with sinh^2 r = n; (state, tail mass)."""
    r = math.asinh(math.sqrt(n))
    th = math.tanh(r)
    coeffs = np.array([th**k for k in range(cutoff)]) / math.cosh(r)
    tail = max(0.0, 1.0 - float(np.sum(coeffs**2)))
    return PureFockState.normalized(np.diag(coeffs)), tail


def tmsv_entropy(n: float) -> float:
    """Closed-form entanglement entropy of a two-mode squeezed vacuum of energy n."""
    if n <= 0:
        return 0.0
    return (n + 1) * math.log(n + 1) - n * math.log(n)


# -- scatter experiment --------------------------------------------------------


class RecordKind(enum.Enum):
    RANDOM = "random"
    MAX_ENTANGLED = "max-ent"
    TMSV_REFERENCE = "tmsv"


@dataclass(frozen=True)
class ScatterRecord:
    index: int
    kind: RecordKind
    n_a: float
    j_gamma: float
    entropy: float
    efficiency: float
    dim: int | None = None

    @property
    def label(self) -> str:
        if self.kind is RecordKind.MAX_ENTANGLED:
            return f"max-ent-{self.dim}"
        return self.kind.value


@dataclass(frozen=True)
class ScatterResult:
    records: tuple
    reference: tuple

    def all_rows(self) -> tuple:
        return self.records + self.reference


def sample_seed(seed: int, index: int) -> np.random.SeedSequence:
    """Per-sample generator seed: SeedSequence over the pair (seed, index)."""
    return _seed_sequence([seed, index])


def _record(index, kind, state, gamma, dim=None) -> ScatterRecord:
    n_a = state.mean_photon_number()
    j = qfi_gamma_fock(state, gamma)
    eff = j / n_a if n_a > 0 else 0.0
    return ScatterRecord(index, kind, n_a, j, entanglement_entropy(state), eff, dim)


def _random_record(args) -> ScatterRecord:
    index, seed, gamma, dim_a, dim_b = args
    state = sample_haar_state(dim_a, dim_b, sample_seed(seed, index))
    return _record(index, RecordKind.RANDOM, state, gamma)


def scatter_experiment(
    samples: int,
    gamma: float,
    dim_a: int = 4,
    dim_b: int = 4,
    max_ent_dims=(3, 4, 5, 6),
    seed: int = 0,
    reference_points: int = 50,
    workers: int = 1,
) -> ScatterResult:
    """J_gamma, energy and entanglement of Haar-random probes, maximally entangled
    probes, and the two-mode squeezed vacuum line J = n / z.

    Output order is by index whatever ``workers`` is.
    """
    if samples < 1:
        raise DomainError("samples must be >= 1")
    gamma = _check_gamma(gamma, strict=True)
    jobs = [(i, seed, gamma, dim_a, dim_b) for i in range(samples)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_random_record, jobs))
    else:
        records = [_random_record(j) for j in jobs]

    dims = list(max_ent_dims)
    cutoff = max(dims, default=1)
    for k, d in enumerate(dims):
        state = max_entangled(d).padded(cutoff, cutoff)
        records.append(_record(samples + k, RecordKind.MAX_ENTANGLED, state, gamma, dim=d))

    z = math.expm1(gamma)
    n_hi = max(r.n_a for r in records)
    reference = []
    if n_hi > 0 and reference_points > 0:
        for k, n in enumerate(np.linspace(0.0, n_hi, reference_points)):
            reference.append(
                ScatterRecord(len(records) + k, RecordKind.TMSV_REFERENCE, float(n), float(n) / z, tmsv_entropy(float(n)), 1.0 / z)
            )
    return ScatterResult(tuple(records), tuple(reference))


def page_entropy(dim_a: int, dim_b: int) -> float:
    """Haar-average entanglement entropy (nats) of a dim_a x dim_b pure state."""
    m, n = sorted((dim_a, dim_b))
    return sum(1.0 / k for k in range(n + 1, m * n + 1)) - (m - 1) / (2 * n)
