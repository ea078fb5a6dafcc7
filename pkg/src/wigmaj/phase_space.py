"""Evaluable Wigner-function families with closed forms.

Every constructor returns an immutable :class:`WignerEvaluable` that can be
called on arrays of phase-space points of shape ``(..., 2N)``.  Radial
single-mode families additionally expose a ``profile`` giving W as a
function of the radius, which unlocks the fast 1-D quadrature path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, DimensionMismatch, ParamOutOfRange
from .gaussian_algebra import GaussianStateSpec, symplectic_spectrum


def laguerre(n: int, x: np.ndarray) -> np.ndarray:
    """Laguerre polynomial L_n by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    if n == 0:
        return np.ones_like(x)
    prev = np.ones_like(x)
    cur = 1.0 - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur


@dataclass(frozen=True, eq=False)
class GridData:
    """Uniformly sampled single-mode Wigner function."""

    x: np.ndarray          # shape (nx,)
    p: np.ndarray          # shape (np,)
    values: np.ndarray     # shape (nx, np)
    std_error: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.values.shape != (len(self.x), len(self.p)):
            raise DimensionMismatch("grid values shape mismatch")

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def dp(self) -> float:
        return float(self.p[1] - self.p[0])

    def interp(self, xq: np.ndarray, pq: np.ndarray) -> np.ndarray:
        """Bilinear interpolation, zero outside the sampled window."""
        ix = (xq - self.x[0]) / self.dx
        ip = (pq - self.p[0]) / self.dp
        inside = (ix >= 0) & (ix <= len(self.x) - 1) & (ip >= 0) & (ip <= len(self.p) - 1)
        ix = np.clip(ix, 0, len(self.x) - 1 - 1e-12)
        ip = np.clip(ip, 0, len(self.p) - 1 - 1e-12)
        i0 = np.floor(ix).astype(int)
        j0 = np.floor(ip).astype(int)
        fx = ix - i0
        fp = ip - j0
        v = (self.values[i0, j0] * (1 - fx) * (1 - fp)
             + self.values[i0 + 1, j0] * fx * (1 - fp)
             + self.values[i0, j0 + 1] * (1 - fx) * fp
             + self.values[i0 + 1, j0 + 1] * fx * fp)
        return np.where(inside, v, 0.0)


@dataclass(frozen=True, eq=False)
class WignerEvaluable:
    """Immutable evaluable Wigner function with majorization metadata."""

    n_modes: int
    kind: str
    fn: Callable[[np.ndarray], np.ndarray]
    is_radial: bool
    finite_negativity: bool
    normalized: bool
    profile: Callable[[np.ndarray], np.ndarray] | None = None
    suggested_cutoff: float = 12.0
    meta: dict = field(default_factory=dict)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        if pts.shape[-1] != 2 * self.n_modes:
            raise DimensionMismatch(
                f"points must have last dimension {2 * self.n_modes}")
        return self.fn(pts)

    def on_grid(self, x: np.ndarray, p: np.ndarray) -> np.ndarray:
        """Evaluate a single-mode function on the outer grid of x and p."""
        if self.n_modes != 1:
            raise DimensionMismatch("on_grid is a single-mode helper")
        X, P = np.meshgrid(x, p, indexing="ij")
        return self(np.stack([X, P], axis=-1))


def _radius(points: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(points ** 2, axis=-1))


def gaussian_wigner(spec: GaussianStateSpec) -> WignerEvaluable:
    """Gaussian Wigner function exp(-(r-m)^t g^-1 (r-m)/2)/((2 pi)^N sqrt(det g))."""
    gamma = spec.cov.entries
    inv = np.linalg.inv(gamma)
    det = spec.cov.det()
    n = spec.n_modes
    norm = 1.0 / ((2.0 * np.pi) ** n * math.sqrt(det))
    mean = spec.mean

    def fn(points: np.ndarray) -> np.ndarray:
        d = points - mean
        q = np.einsum("...i,ij,...j->...", d, inv, d)
        return norm * np.exp(-0.5 * q)

    sigmas = symplectic_spectrum(spec.cov).sigmas
    isotropic = n == 1 and np.allclose(
        gamma, gamma[0, 0] * np.eye(2), atol=1e-13) and np.allclose(mean, 0.0)
    profile = None
    if isotropic:
        sigma = float(gamma[0, 0])
        profile = lambda r: norm * np.exp(-r * r / (2.0 * sigma))
    cutoff = float(np.linalg.norm(mean) + 6.0 * math.sqrt(2.0 * np.max(
        np.linalg.eigvalsh(gamma))))
    return WignerEvaluable(
        n_modes=n, kind="gaussian", fn=fn, is_radial=isotropic,
        finite_negativity=True, normalized=True, profile=profile,
        suggested_cutoff=cutoff,
        meta={"spec": spec, "det_gamma": det, "sigmas": sigmas})


def fock_wigner(n: int) -> WignerEvaluable:
    """Oscillator eigenstate: W_n(r) = ((-1)^n / pi) e^{-r^2} L_n(2 r^2)."""
    if n < 0:
        raise ParamOutOfRange("Fock index must be nonnegative")
    sign = -1.0 if n % 2 else 1.0

    def profile(r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return (sign / np.pi) * np.exp(-r * r) * laguerre(n, 2.0 * r * r)

    return WignerEvaluable(
        n_modes=1, kind="fock", fn=lambda pts: profile(_radius(pts)),
        is_radial=True, finite_negativity=True, normalized=True,
        profile=profile, suggested_cutoff=math.sqrt(2 * n + 1) + 7.0,
        meta={"n": n})


def radial_mixture(weights, components) -> WignerEvaluable:
    """Convex combination of radial single-mode evaluables."""
    w = np.asarray(weights, dtype=float)
    comps = list(components)
    if len(w) != len(comps):
        raise DimensionMismatch("one weight per component")
    if np.any(w < -1e-15) or abs(w.sum() - 1.0) > 1e-12:
        raise ParamOutOfRange("weights must be a convex combination")
    if not all(c.is_radial and c.profile is not None for c in comps):
        raise DomainError("radial_mixture needs radial components")

    def profile(r: np.ndarray) -> np.ndarray:
        return sum(wi * c.profile(r) for wi, c in zip(w, comps))

    return WignerEvaluable(
        n_modes=1, kind="fock_mixture", fn=lambda pts: profile(_radius(pts)),
        is_radial=True,
        finite_negativity=all(c.finite_negativity for c in comps),
        normalized=all(c.normalized for c in comps),
        profile=profile,
        suggested_cutoff=max(c.suggested_cutoff for c in comps),
        meta={"weights": w, "components": comps})


def fock_mixture(u: float, pair: tuple[int, int] = (0, 1)) -> WignerEvaluable:
    """Mixture (1-u) |a><a| + u |b><b| of oscillator eigenstates."""
    if not 0.0 <= u <= 1.0:
        raise ParamOutOfRange("mixture weight u must lie in [0, 1]")
    if tuple(pair) not in ((0, 1), (1, 2)):
        raise ParamOutOfRange("supported mixtures: (0,1) and (1,2)")
    a, b = pair
    out = radial_mixture([1.0 - u, u], [fock_wigner(a), fock_wigner(b)])
    out.meta.update({"u": u, "pair": tuple(pair)})
    return out


def cat_wigner(alpha, parity: str = "+") -> WignerEvaluable:
    """Even/odd cat state of size alpha (a real phase-space vector)."""
    a = np.asarray(alpha, dtype=float)
    if a.ndim != 1 or len(a) % 2:
        raise ParamOutOfRange("alpha must be a real vector of length 2N")
    if parity not in ("+", "-"):
        raise ParamOutOfRange("parity must be '+' or '-'")
    s = 1.0 if parity == "+" else -1.0
    n = len(a) // 2
    a2 = float(a @ a)
    denom = 2.0 * np.pi * (1.0 + s * math.exp(-a2))
    if denom <= 0:
        raise ParamOutOfRange("odd cat with alpha = 0 is not a state")

    def fn(points: np.ndarray) -> np.ndarray:
        rp = np.sum((points + a) ** 2, axis=-1)
        rm = np.sum((points - a) ** 2, axis=-1)
        r2 = np.sum(points ** 2, axis=-1)
        osc = 2.0 * np.cos(2.0 * points @ a) * np.exp(-r2)
        return (np.exp(-rp) + np.exp(-rm) + s * osc) / denom

    radial = a2 == 0.0
    profile = None
    if radial:
        profile = lambda r: (2.0 * np.exp(-r * r) + s * 2.0 * np.exp(-r * r)) / denom
    # in the frame aligned with alpha: W = exp(-eta^2) g(xi)
    size = math.sqrt(a2)
    cutoff = size + 8.0

    def g_axis(xi: np.ndarray) -> np.ndarray:
        return (np.exp(-(xi + size) ** 2) + np.exp(-(xi - size) ** 2)
                + s * 2.0 * np.cos(2.0 * size * xi) * np.exp(-xi * xi)) / denom

    meta = {"alpha": a, "parity": parity}
    if n == 1:
        meta["separable"] = {"k": 1.0, "g": g_axis, "cutoff": cutoff}
    return WignerEvaluable(
        n_modes=n, kind="cat", fn=fn, is_radial=radial,
        finite_negativity=True, normalized=True, profile=profile,
        suggested_cutoff=cutoff, meta=meta)


def box_state_wigner() -> WignerEvaluable:
    """Wigner function of the unit box wavefunction.

    Not absolutely integrable: the ``normalized`` flag is left False since
    the defining integral converges only conditionally, and every
    majorization proposal rejects this state.
    """

    def fn(points: np.ndarray) -> np.ndarray:
        x = points[..., 0]
        p = points[..., 1]
        width = 1.0 - 2.0 * np.abs(x)
        arg = p * width
        core = np.where(np.abs(arg) < 1e-8, width * (1 - arg * arg / 6.0),
                        np.divide(np.sin(arg), p, out=np.zeros_like(p),
                                  where=np.abs(p) > 1e-300))
        return np.where(np.abs(x) <= 0.5, core / np.pi, 0.0)

    return WignerEvaluable(
        n_modes=1, kind="box", fn=fn, is_radial=False,
        finite_negativity=False, normalized=False,
        suggested_cutoff=12.0, meta={})


def gaussian_mixture(weights, specs) -> WignerEvaluable:
    """Convex combination of Gaussian states (a Wigner-positive state)."""
    w = np.asarray(weights, dtype=float)
    comps = [gaussian_wigner(s) for s in specs]
    if np.any(w < -1e-15) or abs(w.sum() - 1.0) > 1e-12:
        raise ParamOutOfRange("weights must be a convex combination")
    n = comps[0].n_modes
    if any(c.n_modes != n for c in comps):
        raise DimensionMismatch("all components need the same mode count")

    def fn(points: np.ndarray) -> np.ndarray:
        return sum(wi * c(points) for wi, c in zip(w, comps))

    radial = all(c.is_radial for c in comps)
    profile = None
    if radial:
        profile = lambda r: sum(wi * c.profile(r) for wi, c in zip(w, comps))
    return WignerEvaluable(
        n_modes=n, kind="gaussian_mixture", fn=fn, is_radial=radial,
        finite_negativity=True, normalized=True, profile=profile,
        suggested_cutoff=max(c.suggested_cutoff for c in comps),
        meta={"weights": w, "components": comps})


def grid_function(grid: GridData, normalized: bool = True,
                  meta: dict | None = None) -> WignerEvaluable:
    """Wrap sampled values into an evaluable with bilinear interpolation."""

    base = {"grid": grid, "resolution": (len(grid.x), len(grid.p)),
            "dx": grid.dx, "dp": grid.dp}
    if meta:
        base.update(meta)
    return WignerEvaluable(
        n_modes=1, kind="grid",
        fn=lambda pts: grid.interp(pts[..., 0], pts[..., 1]),
        is_radial=False, finite_negativity=True, normalized=normalized,
        suggested_cutoff=float(max(abs(grid.x[0]), grid.x[-1],
                                   abs(grid.p[0]), grid.p[-1])),
        meta=base)


def symplectic_transform(w: WignerEvaluable, s_matrix: np.ndarray,
                         shift: np.ndarray | None = None) -> WignerEvaluable:
    """Evaluable r -> W(S r + shift); level-equivalent when S is symplectic."""
    s = np.asarray(s_matrix, dtype=float)
    d = 2 * w.n_modes
    if s.shape != (d, d):
        raise DimensionMismatch("S must be 2N x 2N")
    off = np.zeros(d) if shift is None else np.asarray(shift, dtype=float)

    def fn(points: np.ndarray) -> np.ndarray:
        return w(points @ s.T + off)

    keeps_radius = (w.is_radial and np.allclose(s @ s.T, np.eye(d), atol=1e-12)
                    and np.allclose(off, 0.0))
    scale = float(np.linalg.norm(s, 2))
    return WignerEvaluable(
        n_modes=w.n_modes, kind="transformed", fn=fn,
        is_radial=keeps_radius, finite_negativity=w.finite_negativity,
        normalized=w.normalized and abs(abs(np.linalg.det(s)) - 1.0) < 1e-10,
        profile=w.profile if keeps_radius else None,
        suggested_cutoff=(w.suggested_cutoff + float(np.linalg.norm(off))) * max(1.0, scale),
        meta={"base": w, "S": s, "shift": off})


# ---------------------------------------------------------------------------
# scan helpers shared by the majorization layer
# ---------------------------------------------------------------------------

def extreme_values(w: WignerEvaluable, samples: int = 2048) -> tuple[float, float]:
    """(min, max) of W over a dense deterministic scan of its support."""
    if w.is_radial and w.profile is not None:
        r = np.linspace(0.0, w.suggested_cutoff, samples)
        v = w.profile(r)
        return float(np.min(v)), float(np.max(v))
    if w.kind == "gaussian":
        det = w.meta["det_gamma"]
        return 0.0, 1.0 / ((2.0 * np.pi) ** w.n_modes * math.sqrt(det))
    if w.kind == "grid":
        g = w.meta["grid"]
        return float(np.min(g.values)), float(np.max(g.values))
    if w.n_modes == 1:
        lin = np.linspace(-w.suggested_cutoff, w.suggested_cutoff, samples // 2)
        vals = w.on_grid(lin, lin)
        return float(np.min(vals)), float(np.max(vals))
    raise DomainError("extreme_values supports single-mode or Gaussian states")
