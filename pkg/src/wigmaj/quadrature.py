"""Quadrature engines for phase-space integrals.

Three integration paths cover every evaluable in the library:

* 1-D *profile* integrals for states that are functions of a single scalar
  (radial single-mode states, and N-mode Gaussians through their exact
  level parametrization).  Panels are split at sign changes of the
  integrand so that the kinks introduced by ``[.]_+``, ``|.|`` and level
  indicators never sit inside a panel.
* tensor-product Gauss-Legendre grids for smooth non-radial evaluables
  (cat states, displaced Gaussian mixtures).
* plain trapezoid sums for sampled grid functions.

Every public entry point returns the refined value together with an error
estimate obtained from a node-doubling (or grid-coarsening) test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq
from scipy.special import erf, erfc

from .config import DEFAULT_QUAD, QuadratureConfig
from .errors import NotIntegrable, RootFindingFailure, TolExceeded

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}
_GH_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _GL_CACHE:
        _GL_CACHE[n] = leggauss(n)
    return _GL_CACHE[n]


def _gh(n: int) -> tuple[np.ndarray, np.ndarray]:
    # physicists' Gauss-Hermite, weight exp(-x^2)
    if n not in _GH_CACHE:
        _GH_CACHE[n] = np.polynomial.hermite.hermgauss(n)
    return _GH_CACHE[n]


class IntegralResult(NamedTuple):
    value: float
    error: float


@dataclass(frozen=True)
class Transform:
    """Pointwise map applied to W before integrating."""

    kind: str
    param: float | None = None

    def apply(self, w: np.ndarray) -> np.ndarray:
        k = self.kind
        if k == "identity":
            return w
        if k == "abs":
            return np.abs(w)
        if k == "shifted_plus":
            return np.maximum(w - self.param, 0.0)
        if k == "abs_shifted_plus":
            return np.maximum(np.abs(w) - self.param, 0.0)
        if k == "power":
            return np.abs(w) ** self.param
        if k == "neg_clip":
            return np.minimum(w + self.param, 0.0)
        if k == "indicator_lt":
            return (w < self.param).astype(float)
        if k == "indicator_ge":
            return (w >= self.param).astype(float)
        if k == "masked_lt":
            return np.where(w < self.param, w, 0.0)
        if k == "masked_ge":
            return np.where(w >= self.param, w, 0.0)
        raise ValueError(f"unknown transform {k!r}")

    def kink_levels(self) -> tuple[float, ...]:
        """W-levels at which the transformed integrand is non-smooth."""
        k = self.kind
        if k == "identity":
            return ()
        if k in ("abs", "power"):
            return (0.0,)
        if k in ("shifted_plus", "indicator_lt", "indicator_ge",
                 "masked_lt", "masked_ge"):
            return (self.param,)
        if k == "abs_shifted_plus":
            return (self.param, -self.param, 0.0)
        if k == "neg_clip":
            return (-self.param,)
        raise ValueError(f"unknown transform {k!r}")


IDENTITY = Transform("identity")
ABS = Transform("abs")


def shifted_plus(t: float) -> Transform:
    return Transform("shifted_plus", float(t))


def abs_shifted_plus(t: float) -> Transform:
    return Transform("abs_shifted_plus", float(t))


def power(alpha: float) -> Transform:
    return Transform("power", float(alpha))


def neg_clip(u: float) -> Transform:
    return Transform("neg_clip", float(u))


# ---------------------------------------------------------------------------
# 1-D profile machinery
# ---------------------------------------------------------------------------

def bracketed_roots(
    g: Callable[[np.ndarray], np.ndarray],
    upper: float,
    scan_points: int = 4096,
    lower: float = 0.0,
) -> list[float]:
    """All roots of ``g`` on ``(lower, upper)`` found by scan + brentq."""
    xs = np.linspace(lower, upper, scan_points)
    vals = np.asarray(g(xs), dtype=float)
    roots: list[float] = []
    sign = np.sign(vals)
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        try:
            roots.append(float(brentq(lambda x: float(g(np.asarray([x]))[0]),
                                      xs[i], xs[i + 1], xtol=1e-14, rtol=1e-15)))
        except ValueError as exc:  # pragma: no cover - bracket guaranteed
            raise RootFindingFailure(
                f"could not polish root in [{xs[i]}, {xs[i+1]}]") from exc
    # exact zeros hit by the scan
    for i in np.nonzero(vals == 0.0)[0]:
        x = float(xs[i])
        if lower < x < upper:
            roots.append(x)
    return sorted(set(roots))


def _panel_sum(
    f: Callable[[np.ndarray], np.ndarray],
    breakpoints: Sequence[float],
    nodes: int,
    max_width: float,
) -> float:
    """Fixed-order Gauss-Legendre over panels split at breakpoints."""
    x0, w0 = _gl(nodes)
    edges: list[float] = []
    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        if b - a <= 0:
            continue
        nsub = max(1, int(math.ceil((b - a) / max_width)))
        step = (b - a) / nsub
        edges.extend((a + j * step, a + (j + 1) * step) for j in range(nsub))
    if not edges:
        return 0.0
    a_arr = np.array([e[0] for e in edges])
    b_arr = np.array([e[1] for e in edges])
    half = 0.5 * (b_arr - a_arr)
    pts = a_arr[:, None] + half[:, None] * (x0[None, :] + 1.0)
    vals = f(pts.ravel()).reshape(pts.shape)
    return float(np.sum(half * (vals @ w0)))


def profile_integral(
    profile: Callable[[np.ndarray], np.ndarray],
    weight: Callable[[np.ndarray], np.ndarray],
    transform: Transform,
    upper: float,
    cfg: QuadratureConfig = DEFAULT_QUAD,
) -> IntegralResult:
    """Integrate ``transform(profile(x)) * weight(x)`` over ``[0, upper]``.

    Panels are split at every root of ``profile(x) - level`` for each kink
    level of the transform, so only smooth pieces reach the Gauss rule.
    """
    splits: set[float] = {0.0, upper}
    for level in transform.kink_levels():
        g = lambda x, lv=level: profile(x) - lv
        splits.update(r for r in bracketed_roots(g, upper, cfg.scan_points)
                      if 0.0 < r < upper)
    breaks = sorted(splits)

    def integrand(x: np.ndarray) -> np.ndarray:
        return transform.apply(profile(x)) * weight(x)

    coarse = _panel_sum(integrand, breaks, cfg.radial_nodes, cfg.panel_max_width)
    fine = _panel_sum(integrand, breaks, 2 * cfg.radial_nodes,
                      cfg.panel_max_width / 2.0)
    err = abs(fine - coarse)
    _maybe_raise(err, fine, cfg)
    return IntegralResult(fine, err)


def _maybe_raise(err: float, value: float, cfg: QuadratureConfig) -> None:
    if cfg.check_refinement and err > cfg.tolerance * cfg.hard_failure_factor * max(
            1.0, abs(value)):
        raise TolExceeded(
            f"refinement test failed: err={err:.3e} for value {value:.6e}")


def radial_weight(x: np.ndarray) -> np.ndarray:
    """Area measure 2*pi*r of the single-mode radial parametrization."""
    return 2.0 * np.pi * x


def gaussian_level_weight(det_gamma: float, n_modes: int) -> Callable:
    """Measure for the exact level parametrization of an N-mode Gaussian.

    A zero-mean Gaussian Wigner function W = A exp(-v) with
    A = ((2*pi)^N sqrt(det gamma))^(-1) sweeps phase-space volume
    (2*pi)^N sqrt(det gamma) v^(N-1)/(N-1)! dv, which follows from the
    Williamson form by mode-wise polar coordinates (a symplectic, hence
    volume-preserving, change of variables).
    """
    pref = (2.0 * np.pi) ** n_modes * math.sqrt(det_gamma) / math.factorial(
        n_modes - 1)

    def weight(v: np.ndarray) -> np.ndarray:
        if n_modes == 1:
            return np.full_like(v, pref)
        return pref * v ** (n_modes - 1)

    return weight


# ---------------------------------------------------------------------------
# separable states W(xi, eta) = exp(-eta^2 / K) g(xi)
# ---------------------------------------------------------------------------
#
# Cat states and their channel outputs factorize in the frame aligned with
# the cat axis.  The eta integral of every pointwise transform then has an
# erf closed form, leaving a 1-D xi integral whose only nonsmooth points
# are the roots of g(xi) = level, handled by the panel machinery.

def _pstar(g_abs: np.ndarray, level: float, k: float) -> np.ndarray:
    """Half-width of {eta : |g| exp(-eta^2/K) > level} (level > 0)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.sqrt(np.maximum(k * np.log(g_abs / level), 0.0))
    return np.where(g_abs > level, val, 0.0)


def _separable_eta_integral(tr: Transform, g: np.ndarray, k: float) -> np.ndarray:
    """Closed-form integral over eta of the transformed separable state."""
    s = math.sqrt(math.pi * k)
    ga = np.abs(g)
    kind = tr.kind
    if kind == "identity":
        return g * s
    if kind == "abs":
        return ga * s
    if kind == "power":
        return ga ** tr.param * math.sqrt(math.pi * k / tr.param)

    def plus_part(mag, level):
        # int [mag e^{-eta^2/K} - level]_+ deta for mag, level > 0
        ps = _pstar(mag, level, k)
        return mag * s * erf(ps / math.sqrt(k)) - 2.0 * level * ps

    t = tr.param
    if kind == "abs_shifted_plus":
        if t < 0.0:
            raise NotIntegrable("negative thresholds diverge for |W|")
        if t == 0.0:
            return ga * s
        return plus_part(ga, t)
    if kind == "shifted_plus":
        if t > 0.0:
            return np.where(g > t, plus_part(ga, t), 0.0)
        if t == 0.0:
            return np.where(g > 0.0, g * s, 0.0)
        raise NotIntegrable(
            "uncapped shifted_plus below zero diverges; use proposal-2 pieces")
    if kind == "neg_clip":
        u = t
        if u < 0.0:
            raise NotIntegrable("neg_clip needs a nonnegative offset")
        out = np.zeros_like(g)
        neg = g < -u if u > 0 else g < 0
        if np.any(neg):
            out[neg] = -plus_part(ga[neg], u) if u > 0 else -ga[neg] * s
        return out
    if kind == "indicator_lt":
        if t >= 0.0:
            raise NotIntegrable("indicator_lt needs t < 0 on separable states")
        lv = -t
        return np.where((g < 0) & (ga > lv), 2.0 * _pstar(ga, lv, k), 0.0)
    if kind == "indicator_ge":
        if t <= 0.0:
            raise NotIntegrable("indicator_ge needs t > 0 on separable states")
        return np.where(g > t, 2.0 * _pstar(ga, t, k), 0.0)
    if kind == "masked_ge":
        if t >= 0.0:
            raise NotIntegrable("masked_ge supports t < 0 on separable states")
        lv = -t
        ps = _pstar(ga, lv, k)
        tail = g * s * erfc(ps / math.sqrt(k))
        return np.where(g >= 0, g * s, np.where(ga > lv, tail, g * s))
    if kind == "masked_lt":
        if t >= 0.0:
            raise NotIntegrable("masked_lt supports t < 0 on separable states")
        lv = -t
        ps = _pstar(ga, lv, k)
        body = g * s * erf(ps / math.sqrt(k))
        return np.where(g >= 0, 0.0, np.where(ga > lv, body, 0.0))
    raise ValueError(f"unknown transform {kind!r}")


def _capped_plus(g: np.ndarray, t: float, k: float, h: float) -> np.ndarray:
    """int over [-h, h] of [g exp(-eta^2/K) - t]_+ in closed form."""
    s = math.sqrt(math.pi * k)
    ga = np.abs(g)
    rk = math.sqrt(k)
    if t > 0.0:
        m = np.minimum(_pstar(ga, t, k), h)
        return np.where(g > t, g * s * erf(m / rk) - 2.0 * t * m, 0.0)
    if t == 0.0:
        return np.where(g > 0, g * s * erf(h / rk), 0.0)
    full = g * s * erf(h / rk) - 2.0 * t * h
    m = np.minimum(_pstar(ga, -t, k), h)
    hole = g * s * erf(m / rk) - 2.0 * t * m
    return np.where(g >= 0, full, full - hole)


def separable_threshold_curve(
    sep: dict,
    transforms: Sequence[Transform],
    cfg: QuadratureConfig = DEFAULT_QUAD,
    cap: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Integrals of transforms of a separable state; exact in eta.

    With ``cap`` the domain is the centered square of half-width cap
    (only the shifted-plus transform supports this, which is all the
    cutoff-schedule diagnostics need).
    """
    g = sep["g"]
    k = float(sep["k"])
    # like the radial path, a finite cap replaces the support cutoff
    upper = float(sep["cutoff"]) if cap is None else float(cap)
    out = np.empty(len(transforms))
    err = np.empty(len(transforms))
    for i, tr in enumerate(transforms):
        if cap is not None and tr.kind != "shifted_plus":
            raise NotIntegrable("capped separable path supports shifted_plus")
        splits: set[float] = {-upper, upper}
        levels = set(tr.kink_levels())
        if tr.kind in ("abs", "power", "abs_shifted_plus", "identity"):
            levels.add(0.0)
        for level in levels:
            fn = lambda x, lv=level: g(x) - lv
            splits.update(r for r in bracketed_roots(fn, upper, cfg.scan_points,
                                                     lower=-upper)
                          if -upper < r < upper)
        breaks = sorted(splits)
        if cap is None:
            integrand = lambda x, tr=tr: _separable_eta_integral(tr, g(x), k)
        else:
            integrand = lambda x, tr=tr: _capped_plus(g(x), tr.param, k,
                                                      float(cap))
        coarse = _panel_sum(integrand, breaks, cfg.radial_nodes,
                            cfg.panel_max_width)
        fine = _panel_sum(integrand, breaks, 2 * cfg.radial_nodes,
                          cfg.panel_max_width / 2.0)
        out[i] = fine
        err[i] = abs(fine - coarse)
        _maybe_raise(err[i], fine, cfg)
    return out, err


# ---------------------------------------------------------------------------
# tensor-product grids
# ---------------------------------------------------------------------------

def _gl_grid_2d(L: float, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x0, w0 = _gl(n)
    x = L * x0
    w = L * w0
    X, P = np.meshgrid(x, x, indexing="ij")
    W2 = np.outer(w, w)
    return X, P, W2


def tensor2_threshold_curve(
    fn_xy: Callable[[np.ndarray, np.ndarray], np.ndarray],
    transforms: Sequence[Transform],
    L: float,
    cfg: QuadratureConfig = DEFAULT_QUAD,
) -> tuple[np.ndarray, np.ndarray]:
    """Integrals of several pointwise transforms over [-L, L]^2.

    Evaluates the function once per grid resolution and reuses the samples
    for every transform, which keeps threshold sweeps cheap.
    """
    n = cfg.grid_points_per_axis
    out = np.empty(len(transforms))
    err = np.empty(len(transforms))
    vals = {}
    for m in (n, 2 * n):
        X, P, W2 = _gl_grid_2d(L, m)
        vals[m] = (fn_xy(X, P), W2)
    for i, tr in enumerate(transforms):
        coarse = float(np.sum(tr.apply(vals[n][0]) * vals[n][1]))
        fine = float(np.sum(tr.apply(vals[2 * n][0]) * vals[2 * n][1]))
        out[i] = fine
        err[i] = abs(fine - coarse)
        _maybe_raise(err[i], fine, cfg)
    return out, err


def tensor_nd_threshold_curve(
    fn_points: Callable[[np.ndarray], np.ndarray],
    transforms: Sequence[Transform],
    L: float,
    dim: int,
    nodes_per_axis: int,
    cfg: QuadratureConfig = DEFAULT_QUAD,
) -> tuple[np.ndarray, np.ndarray]:
    """Tensor Gauss-Legendre over [-L, L]^dim, chunked over the first axis.

    Kinked integrands converge slowly on tensor grids, so accuracy here is
    of order 1e-3: the refinement error is reported honestly (and feeds
    the verdict noise bands) and only gross failures raise.
    """

    def run(m: int) -> np.ndarray:
        x0, w0 = _gl(m)
        x = L * x0
        w = L * w0
        acc = np.zeros(len(transforms))
        rest = np.stack(np.meshgrid(*([x] * (dim - 1)), indexing="ij"),
                        axis=-1).reshape(-1, dim - 1)
        wrest = np.ones(1)
        for _ in range(dim - 1):
            wrest = np.outer(wrest, w).ravel()
        pts = np.empty((rest.shape[0], dim))
        for i in range(m):
            pts[:, 0] = x[i]
            pts[:, 1:] = rest
            vals = fn_points(pts)
            for j, tr in enumerate(transforms):
                acc[j] += w[i] * float(np.sum(tr.apply(vals) * wrest))
        return acc

    coarse = run(nodes_per_axis)
    fine = run(int(nodes_per_axis * 1.5))
    err = np.abs(fine - coarse)
    for e, v in zip(err, fine):
        if cfg.check_refinement and float(e) > 0.02 * max(1.0, abs(float(v))):
            raise TolExceeded(
                f"tensor-grid refinement failed: err={float(e):.3e} "
                f"for value {float(v):.6e}")
    return fine, err


# ---------------------------------------------------------------------------
# sampled grids
# ---------------------------------------------------------------------------

def grid_threshold_curve(
    values: np.ndarray,
    dx: float,
    dp: float,
    transforms: Sequence[Transform],
) -> tuple[np.ndarray, np.ndarray]:
    """Trapezoid integrals of transforms of a uniformly sampled function.

    The error estimate compares against the every-other-point subgrid.
    """
    wts = np.ones(values.shape[0])
    wts[0] = wts[-1] = 0.5
    wp = np.ones(values.shape[1])
    wp[0] = wp[-1] = 0.5
    W2 = np.outer(wts, wp) * dx * dp
    sub = values[::2, ::2]
    wts2 = np.ones(sub.shape[0])
    wts2[0] = wts2[-1] = 0.5
    wp2 = np.ones(sub.shape[1])
    wp2[0] = wp2[-1] = 0.5
    W2sub = np.outer(wts2, wp2) * (2 * dx) * (2 * dp)
    out = np.empty(len(transforms))
    err = np.empty(len(transforms))
    for i, tr in enumerate(transforms):
        full = float(np.sum(tr.apply(values) * W2))
        half = float(np.sum(tr.apply(sub) * W2sub))
        out[i] = full
        err[i] = abs(full - half) / 3.0
    return out, err


# ---------------------------------------------------------------------------
# evaluable-facing dispatch (duck-typed on WignerEvaluable attributes)
# ---------------------------------------------------------------------------

def threshold_curve(
    w_eval,
    transforms: Sequence[Transform],
    cfg: QuadratureConfig = DEFAULT_QUAD,
    radius_cap: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Integrals of pointwise transforms of a Wigner evaluable.

    ``radius_cap`` restricts the integration domain to the centered ball
    (radial states) used by the cutoff-regularized functionals.
    """
    cfg = cfg.wider(w_eval.suggested_cutoff)
    if w_eval.kind == "box":
        allowed = all(t.kind == "identity" for t in transforms)
        if not allowed:
            raise NotIntegrable("the box state is not absolutely integrable")
    if w_eval.kind == "grid":
        if radius_cap is not None:
            raise NotIntegrable("radius caps are not supported on sampled grids")
        g = w_eval.meta["grid"]
        return grid_threshold_curve(g.values, g.dx, g.dp, transforms)
    if getattr(w_eval, "is_radial", False) and w_eval.profile is not None:
        # a finite cap IS the integration domain: clipping it to the state
        # support would drop the state-independent [-t] plateau that must
        # cancel between regulated functionals
        upper = cfg.radial_cutoff if radius_cap is None else float(radius_cap)
        out = np.empty(len(transforms))
        err = np.empty(len(transforms))
        for i, tr in enumerate(transforms):
            res = profile_integral(w_eval.profile, radial_weight, tr, upper, cfg)
            out[i], err[i] = res
        return out, err
    if "separable" in getattr(w_eval, "meta", {}):
        return separable_threshold_curve(w_eval.meta["separable"], transforms,
                                         cfg, cap=radius_cap)
    if w_eval.kind == "gaussian":
        if radius_cap is not None:
            raise NotIntegrable("radius caps apply to radial evaluables only")
        det_gamma = w_eval.meta["det_gamma"]
        n = w_eval.n_modes
        amp = 1.0 / ((2.0 * np.pi) ** n * math.sqrt(det_gamma))
        weight = gaussian_level_weight(det_gamma, n)
        prof = lambda v: amp * np.exp(-v)
        upper = 60.0 + 10.0 * n
        out = np.empty(len(transforms))
        err = np.empty(len(transforms))
        for i, tr in enumerate(transforms):
            res = profile_integral(prof, weight, tr, upper, cfg)
            out[i], err[i] = res
        return out, err
    if w_eval.n_modes == 1:
        if radius_cap is not None:
            raise NotIntegrable("radius caps apply to radial evaluables only")
        fn_xy = lambda X, P: w_eval(np.stack([X, P], axis=-1))
        return tensor2_threshold_curve(fn_xy, transforms, cfg.grid_halfwidth, cfg)
    # generic two-mode fallback; beyond that the tensor grid is hopeless
    if w_eval.n_modes > 2:
        raise NotIntegrable(
            "no quadrature path for non-Gaussian states above two modes")
    if radius_cap is not None:
        raise NotIntegrable("radius caps apply to radial evaluables only")
    return tensor_nd_threshold_curve(
        w_eval, transforms, w_eval.suggested_cutoff, 2 * w_eval.n_modes,
        cfg.nd_nodes_per_axis, cfg)


def integrate(
    w_eval,
    transform: Transform = IDENTITY,
    cfg: QuadratureConfig = DEFAULT_QUAD,
) -> IntegralResult:
    """Integral of a pointwise transform of ``w_eval`` over phase space."""
    vals, errs = threshold_curve(w_eval, [transform], cfg)
    return IntegralResult(float(vals[0]), float(errs[0]))
