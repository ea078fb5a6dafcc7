"""Gaussian channels and random Gaussian unitary channels.

A channel is the pair (X, Y) acting on covariance matrices as
gamma -> X gamma X^t + Y.  On Wigner functions it acts by convolution with
the Gaussian kernel k(r, z) = N(r; Xz, Y), whose marginals integrate to 1
over r and to 1/det X over z; channels with det X >= 1 are therefore
majorizing for the absolute-value proposal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_QUAD, DEFAULT_TOL, QuadratureConfig, ToleranceConfig
from .errors import (
    DimensionMismatch,
    NotFound,
    NotSPD,
    ParamOutOfRange,
    SingularY,
    TolExceeded,
)
from .gaussian_algebra import (
    CovarianceMatrix,
    GaussianStateSpec,
    rotation_2d,
    squeeze_2d,
    symplectic_form,
)
from .phase_space import (
    GridData,
    WignerEvaluable,
    cat_wigner,
    fock_mixture,
    gaussian_wigner,
    grid_function,
)
from .quadrature import _gh


@dataclass(frozen=True, eq=False)
class GaussianChannel:
    """Completely positive Gaussian map determined by matrices X and Y."""

    X: np.ndarray
    Y: np.ndarray
    tol: ToleranceConfig = DEFAULT_TOL

    def __post_init__(self) -> None:
        x = np.array(self.X, dtype=float)
        y = np.array(self.Y, dtype=float)
        if x.shape != y.shape or x.ndim != 2 or x.shape[0] != x.shape[1] \
                or x.shape[0] % 2:
            raise DimensionMismatch(f"bad channel shapes {x.shape}, {y.shape}")
        if np.max(np.abs(y - y.T)) > 1e-10 * max(1.0, np.max(np.abs(y))):
            raise NotSPD("Y must be symmetric")
        y = 0.5 * (y + y.T)
        if np.min(np.linalg.eigvalsh(y)) < -self.tol.cp_slack:
            raise NotSPD("Y must be positive semidefinite")
        j = symplectic_form(x.shape[0] // 2)
        herm = y + 0.5j * (j - x @ j @ x.T)
        if np.min(np.linalg.eigvalsh(herm)) < -self.tol.cp_slack:
            raise ParamOutOfRange("channel violates complete positivity")
        object.__setattr__(self, "X", x)
        object.__setattr__(self, "Y", y)

    @property
    def n_modes(self) -> int:
        return self.X.shape[0] // 2

    def det_x(self) -> float:
        return float(np.linalg.det(self.X))


def identity_channel(n_modes: int = 1) -> GaussianChannel:
    d = 2 * n_modes
    return GaussianChannel(np.eye(d), np.zeros((d, d)))


def thermal_noise_channel(s: float, c: float) -> GaussianChannel:
    """Mixes the input with a thermal state of symplectic eigenvalue c.

    X = sqrt(1-s) I, Y = s c I; the loss channel is the case c = 1/2.
    """
    if not 0.0 <= s <= 1.0:
        raise ParamOutOfRange("mixing parameter s must lie in [0, 1]")
    if c < 0.5:
        raise ParamOutOfRange("thermal eigenvalue c must be >= 1/2")
    return GaussianChannel(math.sqrt(1.0 - s) * np.eye(2), s * c * np.eye(2))


def loss_channel(s: float) -> GaussianChannel:
    return thermal_noise_channel(s, 0.5)


def amplification_channel(eta: float) -> GaussianChannel:
    """X = sqrt(eta) I, Y = (eta - 1) I with gain eta >= 1."""
    if eta < 1.0:
        raise ParamOutOfRange("amplification gain must be >= 1")
    return GaussianChannel(math.sqrt(eta) * np.eye(2), (eta - 1.0) * np.eye(2))


def classical_mixing_channel(y_cov: np.ndarray) -> GaussianChannel:
    """Random Gaussian displacements with covariance Y; X stays identity."""
    y = np.asarray(y_cov, dtype=float)
    try:
        np.linalg.cholesky(y)
    except np.linalg.LinAlgError as exc:
        raise NotSPD("classical mixing needs a positive definite Y") from exc
    return GaussianChannel(np.eye(y.shape[0]), y)


def apply_to_gaussian(ch: GaussianChannel, spec: GaussianStateSpec) -> GaussianStateSpec:
    """Covariance action gamma -> X gamma X^t + Y, mean -> X mean."""
    if ch.n_modes != spec.n_modes:
        raise DimensionMismatch("channel and state mode counts differ")
    cov = CovarianceMatrix(ch.X @ spec.cov.entries @ ch.X.T + ch.Y)
    return GaussianStateSpec(ch.X @ spec.mean, cov)


def kernel_eval(ch: GaussianChannel, r: np.ndarray, z: np.ndarray) -> float:
    """Convolution kernel k(r, z) = N(r; Xz, Y) of a nondegenerate channel."""
    y = ch.Y
    if abs(np.linalg.det(y)) < 1e-300:
        raise SingularY("kernel undefined: Y is singular")
    yinv = np.linalg.inv(y)
    r = np.asarray(r, dtype=float)
    z = np.asarray(z, dtype=float)
    expo = (-0.5 * r @ yinv @ r - 0.5 * z @ ch.X.T @ yinv @ ch.X @ z
            + z @ ch.X.T @ yinv @ r)
    n = ch.n_modes
    return float(np.exp(expo) / ((2.0 * np.pi) ** n * math.sqrt(np.linalg.det(y))))


def convolve(
    ch: GaussianChannel,
    w_in: WignerEvaluable,
    x_grid: np.ndarray | None = None,
    p_grid: np.ndarray | None = None,
    cfg: QuadratureConfig = DEFAULT_QUAD,
) -> WignerEvaluable:
    """Output Wigner function W_out(r) = int k(r, z) W_in(z) dz on a grid.

    The z integral is Gaussian-weighted, so it is evaluated by direct
    Gauss-Hermite quadrature centered at X^{-1} r; degenerate channels
    fall back to the unitary (Y = 0) or constant-kernel (X = 0) paths.
    """
    if ch.n_modes != 1 or w_in.n_modes != 1:
        raise DimensionMismatch("grid convolution is implemented for one mode")
    if x_grid is None:
        L = cfg.grid_halfwidth
        x_grid = np.linspace(-L, L, cfg.grid_points_per_axis // 2 * 2 + 1)
    if p_grid is None:
        p_grid = x_grid
    X, P = np.meshgrid(x_grid, p_grid, indexing="ij")
    pts = np.stack([X, P], axis=-1)

    if np.max(np.abs(ch.X)) < 1e-14:
        target = gaussian_wigner(GaussianStateSpec.centered(
            CovarianceMatrix(ch.Y)))
        values = target(pts)
    elif np.max(np.abs(ch.Y)) < 1e-14:
        xinv = np.linalg.inv(ch.X)
        values = w_in(pts @ xinv.T)
    else:
        detx = ch.det_x()
        if abs(detx) < 1e-12:
            raise SingularY("X singular but nonzero: no quadrature path")
        yinv = np.linalg.inv(ch.Y)
        a = ch.X.T @ yinv @ ch.X
        evals, evecs = np.linalg.eigh(a)
        b = evecs @ np.diag(evals ** -0.5) @ evecs.T  # A^{-1/2}
        xinv = np.linalg.inv(ch.X)
        nodes, weights = _gh(cfg.hermite_nodes)
        wx, wy = np.meshgrid(nodes, nodes, indexing="ij")
        offsets = np.stack([wx.ravel(), wy.ravel()], axis=-1) * math.sqrt(2.0)
        wts = np.outer(weights, weights).ravel()
        centers = pts.reshape(-1, 2) @ xinv.T
        values = np.empty(centers.shape[0])
        chunk = 256
        pref = 2.0 / (abs(detx) * (2.0 * np.pi))
        for lo in range(0, centers.shape[0], chunk):
            zs = centers[lo:lo + chunk, None, :] + offsets[None, :, :] @ b.T
            values[lo:lo + chunk] = pref * (w_in(zs) @ wts)
        values = values.reshape(X.shape)

    grid = GridData(np.asarray(x_grid, float), np.asarray(p_grid, float), values)
    out = grid_function(grid, normalized=w_in.normalized,
                        meta={"channel": {"X": ch.X.tolist(), "Y": ch.Y.tolist()},
                              "method": "convolve"})
    if w_in.normalized:
        dx = grid.dx
        mass = float(np.sum(values) * dx * grid.dp)
        if abs(mass - 1.0) > 2e-4:
            raise TolExceeded(f"convolved grid mass {mass:.6f} is off unity")
    return out


# ---------------------------------------------------------------------------
# closed-form channel outputs (analytic oracles)
# ---------------------------------------------------------------------------

def _radial_evaluable(profile, cutoff, meta) -> WignerEvaluable:
    return WignerEvaluable(
        n_modes=1, kind="analytic_radial",
        fn=lambda pts: profile(np.sqrt(np.sum(pts ** 2, axis=-1))),
        is_radial=True, finite_negativity=True, normalized=True,
        profile=profile, suggested_cutoff=cutoff, meta=meta)


def _check_unit(x, name, lo=0.0, hi=1.0):
    if not lo <= x <= hi:
        raise ParamOutOfRange(f"{name} must lie in [{lo}, {hi}]")


def analytic_output(family: str, **params) -> WignerEvaluable:
    """Closed-form output states for the six catalogued channel actions.

    Families: thermal_on_mix01, thermal_on_mix12, thermal_on_cat,
    classmix_on_mix01, classmix_on_mix12, classmix_on_cat.  Thermal noise
    takes (s, c >= 1/2); classical mixing takes an isotropic strength c > 0.
    """
    meta = {"family": family, **params}
    if family == "thermal_on_mix01":
        u, s, c = params["u"], params["s"], params["c"]
        _check_unit(u, "u"), _check_unit(s, "s")
        if c < 0.5:
            raise ParamOutOfRange("need c >= 1/2")
        k = 1.0 + s * (2.0 * c - 1.0)

        def profile(r):
            r2 = r * r
            return np.exp(-r2 / k) * (k * k + 2 * u * (1 - s) * (r2 - k)) / (
                np.pi * k ** 3)

        return _radial_evaluable(profile, 12.0, meta)
    if family == "thermal_on_mix12":
        u, s, c = params["u"], params["s"], params["c"]
        _check_unit(u, "u"), _check_unit(s, "s")
        if c < 0.5:
            raise ParamOutOfRange("need c >= 1/2")
        k = 1.0 + s * (2.0 * c - 1.0)

        def profile(r):
            r2 = r * r
            t0 = ((s + 2 * c * s - 1) * k * k
                  * (1 - 2 * u + s * (2 * c + 2 * u - 1)))
            t2 = 2 * r2 * (1 - s) * k * (1 - 3 * u + s * (3 * u + 2 * c * (1 + u) - 1))
            t4 = 2 * u * r2 * r2 * (1 - s) ** 2
            return np.exp(-r2 / k) * (t0 + t2 + t4) / (np.pi * k ** 5)

        return _radial_evaluable(profile, 13.0, meta)
    if family == "thermal_on_cat":
        alpha = np.asarray(params["alpha"], dtype=float)
        parity, s, c = params["parity"], params["s"], params["c"]
        _check_unit(s, "s")
        if c < 0.5:
            raise ParamOutOfRange("need c >= 1/2")
        sgn = 1.0 if parity == "+" else -1.0
        k = 1.0 + (2.0 * c - 1.0) * s
        a2 = float(alpha @ alpha)
        denom = 2.0 * np.pi * (1.0 + sgn * math.exp(-a2)) * k
        root = math.sqrt(1.0 - s)

        def fn(pts):
            rp = np.sum((root * alpha + pts) ** 2, axis=-1)
            rm = np.sum((root * alpha - pts) ** 2, axis=-1)
            r2 = np.sum(pts ** 2, axis=-1)
            osc = 2.0 * np.cos(2.0 * root * (pts @ alpha) / k) * np.exp(
                -(r2 + 2 * c * s * a2) / k)
            return (np.exp(-rp / k) + np.exp(-rm / k) + sgn * osc) / denom

        size = math.sqrt(a2)
        cutoff = size + 9.0

        def g_axis(xi):
            return (np.exp(-(root * size + xi) ** 2 / k)
                    + np.exp(-(root * size - xi) ** 2 / k)
                    + sgn * 2.0 * np.cos(2.0 * root * size * xi / k)
                    * np.exp(-(xi * xi + 2 * c * s * a2) / k)) / denom

        meta["separable"] = {"k": k, "g": g_axis, "cutoff": cutoff}
        return WignerEvaluable(
            n_modes=1, kind="analytic_cat", fn=fn, is_radial=False,
            finite_negativity=True, normalized=True,
            suggested_cutoff=cutoff, meta=meta)
    if family == "classmix_on_mix01":
        u, c = params["u"], params["c"]
        _check_unit(u, "u")
        if c <= 0.0:
            raise ParamOutOfRange("classical mixing strength must be positive")
        k = 1.0 + 2.0 * c

        def profile(r):
            r2 = r * r
            return np.exp(-r2 / k) * (k * k + 2 * u * (r2 - k)) / (np.pi * k ** 3)

        return _radial_evaluable(profile, 13.0, meta)
    if family == "classmix_on_mix12":
        u, c = params["u"], params["c"]
        _check_unit(u, "u")
        if c <= 0.0:
            raise ParamOutOfRange("classical mixing strength must be positive")
        k = 1.0 + 2.0 * c

        def profile(r):
            r2 = r * r
            conv1 = (2 * r2 + 4 * c * c - 1) / (np.pi * k ** 3)
            conv2 = (1 - 4 * r2 + 2 * (8 * c ** 4 + r2 * r2 + 8 * c * c * r2
                                       - 4 * c * c)) / (np.pi * k ** 5)
            return np.exp(-r2 / k) * ((1 - u) * conv1 + u * conv2)

        return _radial_evaluable(profile, 13.0, meta)
    if family == "classmix_on_cat":
        alpha = np.asarray(params["alpha"], dtype=float)
        parity, c = params["parity"], params["c"]
        if c <= 0.0:
            raise ParamOutOfRange("classical mixing strength must be positive")
        sgn = 1.0 if parity == "+" else -1.0
        k = 1.0 + 2.0 * c
        a2 = float(alpha @ alpha)
        denom = np.pi * k * (math.exp(a2) + sgn)

        def fn(pts):
            r2 = np.sum(pts ** 2, axis=-1)
            dot = pts @ alpha
            hyp = math.exp(2 * c * a2 / k) * np.cosh(2 * dot / k)
            osc = math.exp(a2 / k) * np.cos(2 * dot / k)
            return np.exp(-r2 / k) * (hyp + sgn * osc) / denom

        size = math.sqrt(a2)
        cutoff = size * (1.0 + 2.0 * c) + 9.0

        def g_axis(xi):
            hyp = math.exp(2 * c * a2 / k) * np.cosh(2 * size * xi / k)
            osc = math.exp(a2 / k) * np.cos(2 * size * xi / k)
            return np.exp(-xi * xi / k) * (hyp + sgn * osc) / denom

        meta["separable"] = {"k": k, "g": g_axis, "cutoff": cutoff}
        return WignerEvaluable(
            n_modes=1, kind="analytic_cat", fn=fn, is_radial=False,
            finite_negativity=True, normalized=True,
            suggested_cutoff=cutoff, meta=meta)
    raise ParamOutOfRange(f"unknown analytic family {family!r}")


def analytic_input(family: str, **params) -> WignerEvaluable:
    """Input state matching an analytic_output family."""
    if family in ("thermal_on_mix01", "classmix_on_mix01"):
        return fock_mixture(params["u"], (0, 1))
    if family in ("thermal_on_mix12", "classmix_on_mix12"):
        return fock_mixture(params["u"], (1, 2))
    if family in ("thermal_on_cat", "classmix_on_cat"):
        return cat_wigner(params["alpha"], params["parity"])
    raise ParamOutOfRange(f"unknown analytic family {family!r}")


def analytic_channel(family: str, **params) -> GaussianChannel:
    """Channel matching an analytic_output family."""
    if family.startswith("thermal"):
        return thermal_noise_channel(params["s"], params["c"])
    return classical_mixing_channel(params["c"] * np.eye(2))


# ---------------------------------------------------------------------------
# composition and majorizing-class predicates
# ---------------------------------------------------------------------------

def compose(outer: GaussianChannel, inner: GaussianChannel) -> GaussianChannel:
    """Channel applying ``inner`` first: X = Xo Xi, Y = Yo + Xo Yi Xo^t."""
    if outer.n_modes != inner.n_modes:
        raise DimensionMismatch("mode counts differ")
    return GaussianChannel(outer.X @ inner.X,
                           outer.Y + outer.X @ inner.Y @ outer.X.T)


def is_wigner_majorizing(ch: GaussianChannel, tol: float = 1e-12) -> bool:
    """det X >= 1: the kernel is semi-doubly stochastic."""
    return ch.det_x() >= 1.0 - tol


def gaussian_unitary_channel(s_matrix: np.ndarray) -> GaussianChannel:
    s = np.asarray(s_matrix, dtype=float)
    j = symplectic_form(s.shape[0] // 2)
    if np.max(np.abs(s.T @ j @ s - j)) > 1e-10:
        raise ParamOutOfRange("matrix is not symplectic")
    return GaussianChannel(s, np.zeros_like(s))


def tautological_witness(spec_from, spec_to,
                         tol: ToleranceConfig = DEFAULT_TOL) -> GaussianChannel:
    """Constructive Gaussian channel mapping spec_from to spec_to.

    Handles three cases: symplectically related evaluables (Y = 0),
    Gaussian -> Gaussian through a scalar-X bracket search, and arbitrary
    input with a Gaussian target (X = 0, Y = gamma_target).  Raises
    :class:`NotFound` otherwise, which proves nothing about existence.
    """
    if isinstance(spec_to, WignerEvaluable) and spec_to.kind == "transformed" \
            and spec_to.meta.get("base") is spec_from:
        s = spec_to.meta["S"]
        return gaussian_unitary_channel(np.linalg.inv(s))

    def as_gaussian(obj):
        if isinstance(obj, GaussianStateSpec):
            return obj
        if isinstance(obj, WignerEvaluable) and obj.kind == "gaussian":
            return obj.meta["spec"]
        return None

    g_from, g_to = as_gaussian(spec_from), as_gaussian(spec_to)
    if g_from is not None and g_to is not None:
        if g_from.n_modes != g_to.n_modes:
            raise DimensionMismatch("mode counts differ")
        d = 2 * g_from.n_modes
        # prefer the unit scaling (classical mixing) before the bracket scan
        for x in [1.0, *np.linspace(1.2, 0.05, 93)]:
            y = g_to.cov.entries - x * x * g_from.cov.entries
            if np.min(np.linalg.eigvalsh(y)) < -tol.cp_slack:
                continue
            y = np.where(np.abs(y) < 1e-14, 0.0, y)
            try:
                return GaussianChannel(x * np.eye(d), y)
            except (NotSPD, ParamOutOfRange):
                continue
    if g_to is not None:
        d = 2 * g_to.n_modes
        return GaussianChannel(np.zeros((d, d)), g_to.cov.entries)
    raise NotFound("no constructive witness applies to this pair")


# ---------------------------------------------------------------------------
# random Gaussian unitary channels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RGUSampler:
    """Distribution over single-mode Gaussian unitaries (S, rbar).

    S = R(theta1) Squeeze(zeta) R(theta2) with both angles uniform on
    [0, 2 pi) when ``rotations`` is set, zeta uniform on [0, zeta_max],
    and rbar drawn from an isotropic Gaussian of covariance
    ``displacement_cov`` * I (a point mass at zero when it vanishes).
    """

    seed: int = 0
    rotations: bool = True
    zeta_max: float = 0.0
    displacement_cov: float = 0.0
    fixed: tuple | None = None

    def sample(self, count: int) -> tuple[np.ndarray, np.ndarray]:
        if self.fixed is not None:
            s0, r0 = self.fixed
            return (np.broadcast_to(np.asarray(s0, float), (count, 2, 2)).copy(),
                    np.broadcast_to(np.asarray(r0, float), (count, 2)).copy())
        rng = np.random.default_rng(self.seed)
        mats = np.empty((count, 2, 2))
        for i in range(count):
            th1 = rng.uniform(0, 2 * np.pi) if self.rotations else 0.0
            th2 = rng.uniform(0, 2 * np.pi) if self.rotations else 0.0
            zeta = rng.uniform(0.0, self.zeta_max) if self.zeta_max > 0 else 0.0
            mats[i] = rotation_2d(th1) @ squeeze_2d(zeta) @ rotation_2d(th2)
        if self.displacement_cov > 0:
            shifts = rng.normal(scale=math.sqrt(self.displacement_cov),
                                size=(count, 2))
        else:
            shifts = np.zeros((count, 2))
        return mats, shifts

    def to_json_dict(self) -> dict:
        return {"seed": self.seed, "rotations": self.rotations,
                "zeta_max": self.zeta_max,
                "displacement_cov": self.displacement_cov,
                "fixed": None if self.fixed is None else
                [np.asarray(self.fixed[0]).tolist(),
                 np.asarray(self.fixed[1]).tolist()]}


@dataclass(frozen=True)
class RandomGaussianUnitarySpec:
    sampler: RGUSampler
    n_samples: int

    def to_json_dict(self) -> dict:
        return {"sampler": self.sampler.to_json_dict(),
                "n_samples": self.n_samples}


def apply_random_gaussian_unitary(
    spec: RandomGaussianUnitarySpec,
    w_in: WignerEvaluable,
    x_grid: np.ndarray | None = None,
    p_grid: np.ndarray | None = None,
    batches: int = 10,
) -> WignerEvaluable:
    """Monte Carlo average W_out(r) = mean_i W_in(S_i r + rbar_i) on a grid.

    Results are deterministic for a fixed sampler seed and sample count;
    the per-point standard error and per-batch means are recorded so
    downstream margins can be compared against the Monte Carlo noise.
    """
    if w_in.n_modes != 1:
        raise DimensionMismatch("random unitary averaging supports one mode")
    if x_grid is None:
        L = w_in.suggested_cutoff
        x_grid = np.linspace(-L, L, 121)
    if p_grid is None:
        p_grid = x_grid
    X, P = np.meshgrid(x_grid, p_grid, indexing="ij")
    pts = np.stack([X.ravel(), P.ravel()], axis=-1)
    m = spec.n_samples
    mats, shifts = spec.sampler.sample(m)
    total = np.zeros(pts.shape[0])
    total_sq = np.zeros(pts.shape[0])
    batch_means = []
    edges = np.linspace(0, m, min(batches, m) + 1).astype(int)
    chunk = 200
    for b0, b1 in zip(edges[:-1], edges[1:]):
        acc = np.zeros(pts.shape[0])
        for lo in range(b0, b1, chunk):
            s_chunk = mats[lo:min(lo + chunk, b1)]
            r_chunk = shifts[lo:min(lo + chunk, b1)]
            zs = np.einsum("kij,nj->kni", s_chunk, pts) + r_chunk[:, None, :]
            vals = w_in(zs)
            acc += vals.sum(axis=0)
            total_sq += (vals ** 2).sum(axis=0)
        total += acc
        batch_means.append(acc / max(b1 - b0, 1))
    mean = total / m
    var = np.maximum(total_sq / m - mean ** 2, 0.0)
    se = np.sqrt(var / m)
    shape = X.shape
    grid = GridData(np.asarray(x_grid, float), np.asarray(p_grid, float),
                    mean.reshape(shape), std_error=se.reshape(shape))
    return grid_function(
        grid, normalized=w_in.normalized,
        meta={"method": "random_gaussian_unitary",
              "spec": spec.to_json_dict(),
              "batch_values": [b.reshape(shape) for b in batch_means]})


def choi_covariance(ch: GaussianChannel, nu: float) -> np.ndarray:
    """Finite-regulator Choi covariance; diverges entrywise as nu grows."""
    n = ch.n_modes
    sig = np.diag(np.concatenate([np.ones(n), -np.ones(n)]))
    ch2, sh2 = math.cosh(2.0 * nu), math.sinh(2.0 * nu)
    top = np.hstack([ch2 * ch.X @ ch.X.T + ch.Y, sh2 * ch.X @ sig])
    bot = np.hstack([sh2 * sig @ ch.X.T, ch2 * np.eye(2 * n)])
    return np.vstack([top, bot])
