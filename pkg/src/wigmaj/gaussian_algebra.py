"""Linear algebra for Gaussian states.

Covariance matrices use the quadrature ordering (q_1..q_N, p_1..p_N) and
the convention in which the vacuum has gamma = (1/2) * identity, so every
symplectic eigenvalue satisfies sigma >= 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import (
    Inconclusive,
    NotPositiveDefinite,
    PureModeError,
    BoxTooSmall,
    ZeroMode,
)
from .verdicts import CurveSeries, MajorizationVerdict, Proposal, Relation


def symplectic_form(n_modes: int) -> np.ndarray:
    """Standard symplectic matrix J = [[0, 1], [-1, 0]] in N x N blocks."""
    z = np.zeros((n_modes, n_modes))
    eye = np.eye(n_modes)
    return np.block([[z, eye], [-eye, z]])


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """2N x 2N covariance matrix of a quantum Gaussian state."""

    entries: np.ndarray
    tol: ToleranceConfig = DEFAULT_TOL

    def __post_init__(self) -> None:
        m = np.array(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise NotPositiveDefinite(f"bad covariance shape {m.shape}")
        scale = max(1.0, float(np.max(np.abs(m))))
        if np.max(np.abs(m - m.T)) > self.tol.symmetry_abs * scale:
            raise NotPositiveDefinite("covariance matrix is not symmetric")
        m = 0.5 * (m + m.T)
        object.__setattr__(self, "entries", m)
        try:
            np.linalg.cholesky(m)
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefinite("covariance matrix is not positive definite") from exc
        sig = _symplectic_eigenvalues(m)
        if sig[-1] < 0.5 - self.tol.uncertainty_slack:
            raise NotPositiveDefinite(
                f"uncertainty constraint violated: min sigma = {sig[-1]:.12g}")
        n = self.n_modes
        if self.det() < 0.25 ** n * (1.0 - 1e-9):
            raise NotPositiveDefinite("det gamma below the pure-state bound")
        object.__setattr__(self, "_sigmas", sig)

    @property
    def n_modes(self) -> int:
        return self.entries.shape[0] // 2

    def det(self) -> float:
        return float(np.linalg.det(self.entries))

    @classmethod
    def isotropic(cls, sigma: float, n_modes: int = 1) -> "CovarianceMatrix":
        return cls(sigma * np.eye(2 * n_modes))

    @classmethod
    def vacuum(cls, n_modes: int = 1) -> "CovarianceMatrix":
        return cls.isotropic(0.5, n_modes)

    @classmethod
    def from_spectrum(cls, sigmas) -> "CovarianceMatrix":
        s = np.asarray(sigmas, dtype=float)
        return cls(np.diag(np.concatenate([s, s])))


@dataclass(frozen=True, eq=False)
class GaussianStateSpec:
    """First and second moments of a Gaussian state."""

    mean: np.ndarray
    cov: CovarianceMatrix

    def __post_init__(self) -> None:
        mean = np.asarray(self.mean, dtype=float)
        if mean.shape != (2 * self.cov.n_modes,):
            raise NotPositiveDefinite(
                f"mean vector has shape {mean.shape}, expected (2N,)")
        if not np.all(np.isfinite(mean)):
            raise NotPositiveDefinite("mean vector must be finite")
        object.__setattr__(self, "mean", mean)

    @property
    def n_modes(self) -> int:
        return self.cov.n_modes

    @classmethod
    def centered(cls, cov: CovarianceMatrix) -> "GaussianStateSpec":
        return cls(np.zeros(2 * cov.n_modes), cov)


@dataclass(frozen=True, eq=False)
class SymplecticSpectrum:
    """Williamson invariants sorted in descending order."""

    sigmas: np.ndarray
    det_gamma: float | None = None
    tol: ToleranceConfig = DEFAULT_TOL

    def __post_init__(self) -> None:
        s = np.asarray(self.sigmas, dtype=float)
        if np.any(np.diff(s) > 0):
            raise ValueError("symplectic eigenvalues must be sorted descending")
        if s[-1] < 0.5 - self.tol.uncertainty_slack:
            raise NotPositiveDefinite(f"sigma below 1/2: {s[-1]}")
        object.__setattr__(self, "sigmas", s)
        if self.det_gamma is not None:
            prod = float(np.prod(s ** 2))
            if abs(prod - self.det_gamma) > self.tol.spectrum_product_rel * abs(
                    self.det_gamma):
                raise ValueError(
                    f"prod sigma^2 = {prod} inconsistent with det gamma = "
                    f"{self.det_gamma}")

    def __len__(self) -> int:
        return len(self.sigmas)


def _symplectic_eigenvalues(gamma: np.ndarray) -> np.ndarray:
    n = gamma.shape[0] // 2
    j = symplectic_form(n)
    ev = np.linalg.eigvals(1j * j @ gamma)
    mags = np.sort(np.abs(ev))[::-1]
    # eigenvalues of iJg come in +/- pairs; average each pair
    return 0.5 * (mags[0::2] + mags[1::2])


def symplectic_spectrum(cov: CovarianceMatrix) -> SymplecticSpectrum:
    """Symplectic eigenvalues |eig(i J gamma)| deduplicated to N values."""
    return SymplecticSpectrum(_symplectic_eigenvalues(cov.entries), cov.det())


def purity(cov: CovarianceMatrix) -> float:
    """Tr rho^2 = 1 / (2^N sqrt(det gamma))."""
    return 1.0 / (2.0 ** cov.n_modes * math.sqrt(cov.det()))


def renyi2(cov: CovarianceMatrix) -> float:
    """Second Renyi entropy N ln 2 + (1/2) ln det gamma = sum ln(2 sigma)."""
    return cov.n_modes * math.log(2.0) + 0.5 * math.log(cov.det())


def det_gamma_verdict(
    cov1: CovarianceMatrix,
    cov2: CovarianceMatrix,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> MajorizationVerdict:
    """Total preorder on Gaussian states: smaller det gamma majorizes."""
    d1, d2 = cov1.det(), cov2.det()
    tie = tol.det_tie_rel * max(abs(d1), abs(d2))
    if abs(d1 - d2) <= tie:
        relation = Relation.Equivalent
    elif d1 < d2:
        relation = Relation.FirstMajorizes
    else:
        relation = Relation.SecondMajorizes
    evidence = CurveSeries(np.array([0.0]), np.array([d2 - d1]),
                           x_name="n/a", y_name="det2 - det1")
    return MajorizationVerdict(
        relation, Proposal.DetGamma, evidence, float(d2 - d1),
        "determinant comparison", {"det1": d1, "det2": d2})


# ---------------------------------------------------------------------------
# harmonic chain
# ---------------------------------------------------------------------------

def harmonic_chain_spectrum(n_sites: int, omega: float, beta: float) -> SymplecticSpectrum:
    """Thermal symplectic spectrum of a periodic chain of n_sites oscillators.

    Dispersion Omega_k = sqrt(omega^2 + 4 sin^2(pi k / N)) and
    sigma_k = coth(beta Omega_k / 2) / 2.
    """
    if n_sites < 1:
        raise ZeroMode("need at least one site")
    if beta <= 0:
        raise ZeroMode("beta must be positive")
    k = np.arange(1, n_sites + 1)
    disp = np.sqrt(omega ** 2 + 4.0 * np.sin(np.pi * k / n_sites) ** 2)
    if np.any(disp <= 1e-12):
        raise ZeroMode("zero-frequency mode at omega = 0")
    sig = 0.5 / np.tanh(beta * disp / 2.0)
    return SymplecticSpectrum(np.sort(sig)[::-1])


def single_particle_energies(spectrum: SymplecticSpectrum) -> np.ndarray:
    """Energies eps_k = ln((sigma_k + 1/2) / (sigma_k - 1/2))."""
    s = spectrum.sigmas
    if np.any(s <= 0.5 + 1e-14):
        raise PureModeError("a symplectic eigenvalue sits at 1/2; energy diverges")
    return np.log((s + 0.5) / (s - 0.5))


# ---------------------------------------------------------------------------
# density-matrix spectra
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DMSpectrumPrefix:
    """Largest density-matrix eigenvalues with a certified tail bound."""

    eigenvalues: np.ndarray
    partial_sums: np.ndarray
    tail_bound: float

    def __post_init__(self) -> None:
        lam = np.asarray(self.eigenvalues, dtype=float)
        if np.any(np.diff(lam) > 1e-15):
            raise ValueError("eigenvalues must be nonincreasing")
        if np.any(lam <= 0.0) or np.any(lam > 1.0):
            raise ValueError("eigenvalues must lie in (0, 1]")
        if self.partial_sums[-1] + self.tail_bound > 1.0 + 1e-9:
            raise ValueError("prefix mass plus tail bound exceeds one")
        object.__setattr__(self, "eigenvalues", lam)


def dm_spectrum_prefix(
    energies,
    m_top: int,
    tail_tol: float = 1e-12,
    max_box: int = 10_000_000,
) -> DMSpectrumPrefix:
    """Top eigenvalues lambda(n_1..n_N) = prod (1-e^-eps) e^(-eps n) of a
    Gaussian density matrix with a certified geometric tail bound.

    The largest values come from a lazy best-first walk over the occupation
    lattice, so no enumeration box is materialized; the omitted mass is
    bounded through closed-form per-mode geometric sums over a box whose
    per-mode tail is below ``tail_tol``.
    """
    import heapq

    eps = np.asarray(energies, dtype=float)
    if np.any(eps <= 0.0):
        raise PureModeError("all single-particle energies must be positive")
    if m_top < 1:
        raise ValueError("need m_top >= 1")
    n = len(eps)
    kcut = np.ceil(np.log(n / tail_tol) / eps) + 1
    if float(np.max(kcut)) > max_box:
        raise BoxTooSmall(
            f"per-mode cutoff {int(np.max(kcut))} exceeds the configured "
            "maximum; a mode is too close to maximally mixed")
    # mass inside the box prod [0, K_k) in closed form
    inside = float(np.prod(1.0 - np.exp(-eps * kcut)))
    tail = max(0.0, 1.0 - inside)

    lam_max = float(np.prod(1.0 - np.exp(-eps)))
    heap = [(-lam_max, (0,) * n)]
    seen = {(0,) * n}
    top: list[float] = []
    while heap and len(top) < m_top:
        neg, occ = heapq.heappop(heap)
        top.append(-neg)
        for k in range(n):
            nxt = occ[:k] + (occ[k] + 1,) + occ[k + 1:]
            if nxt not in seen:
                seen.add(nxt)
                heapq.heappush(heap, (neg * math.exp(-eps[k]), nxt))
    lam = np.array(top)
    return DMSpectrumPrefix(lam, np.cumsum(lam), tail)


def dm_majorization_verdict(
    p1: DMSpectrumPrefix,
    p2: DMSpectrumPrefix,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> MajorizationVerdict:
    """Compare partial sums of two certified spectral prefixes.

    A verdict is only issued when the evidence survives the tail bounds of
    both prefixes; otherwise the comparison is declared inconclusive.
    """
    m = min(len(p1.eigenvalues), len(p2.eigenvalues))
    if m < 1:
        raise Inconclusive("no overlapping prefix terms")
    d = p1.partial_sums[:m] - p2.partial_sums[:m]
    ms = np.arange(1, m + 1, dtype=float)
    evidence = CurveSeries(ms, d, x_name="m", y_name="T1_m - T2_m")
    tie = tol.dm_tie
    # partial sums over the prefix are exact; tails only matter beyond it
    above = d > tie
    below = d < -tie
    notes = {"tail_bound_1": p1.tail_bound, "tail_bound_2": p2.tail_bound,
             "prefix_certified": True}
    if np.all(np.abs(d) <= tie):
        relation = Relation.Equivalent
    elif above.any() and below.any():
        relation = Relation.Incomparable
    elif above.any() and d[-1] >= p2.tail_bound - tie:
        relation = Relation.FirstMajorizes
    elif below.any() and -d[-1] >= p1.tail_bound - tie:
        relation = Relation.SecondMajorizes
    else:
        raise Inconclusive(
            "margins do not exceed the unseen tail mass; enlarge the prefix")
    return MajorizationVerdict(relation, Proposal.DM, evidence, float(np.min(d)),
                               f"partial sums m=1..{m}", notes)


# ---------------------------------------------------------------------------
# symplectic sampling (tests, random-unitary channels)
# ---------------------------------------------------------------------------

def rotation_2d(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])


def squeeze_2d(zeta: float) -> np.ndarray:
    return np.diag([math.exp(zeta), math.exp(-zeta)])


def embed_mode(block: np.ndarray, mode: int, n_modes: int) -> np.ndarray:
    """Embed a 2x2 single-mode operation acting on (q_mode, p_mode)."""
    s = np.eye(2 * n_modes)
    i, j = mode, n_modes + mode
    s[np.ix_([i, j], [i, j])] = block
    return s


def random_symplectic(n_modes: int, rng: np.random.Generator,
                      zeta_max: float = 0.8) -> np.ndarray:
    """Random symplectic built from rotations, squeezers and mode mixing."""
    s = np.eye(2 * n_modes)
    for mode in range(n_modes):
        block = (rotation_2d(rng.uniform(0, 2 * np.pi))
                 @ squeeze_2d(rng.uniform(-zeta_max, zeta_max))
                 @ rotation_2d(rng.uniform(0, 2 * np.pi)))
        s = embed_mode(block, mode, n_modes) @ s
    if n_modes > 1:
        q, _ = np.linalg.qr(rng.normal(size=(n_modes, n_modes)))
        mixer = np.block([[q, np.zeros_like(q)], [np.zeros_like(q), q]])
        s = mixer @ s
    return s


def random_covariance(n_modes: int, rng: np.random.Generator,
                      sigma_range: tuple[float, float] = (0.55, 3.0),
                      zeta_max: float = 0.8) -> CovarianceMatrix:
    """Random valid covariance gamma = S^t D S with known spectrum."""
    sig = np.sort(rng.uniform(*sigma_range, size=n_modes))[::-1]
    d = np.diag(np.concatenate([sig, sig]))
    s = random_symplectic(n_modes, rng, zeta_max)
    return CovarianceMatrix(s.T @ d @ s)
