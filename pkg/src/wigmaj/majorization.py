"""Majorization criteria for Wigner functions.

Implements the four equivalent conditions for positive functions, the
absolute-value proposal (P1) and the regularized signed proposal (P2) for
states with finite Wigner negativity, the quasi-probability pair
condition, and the verdict assembly shared by all of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_QUAD, DEFAULT_TOL, QuadratureConfig, ToleranceConfig
from .errors import (
    CrossCheckMismatch,
    DomainError,
    NoCollapse,
    NotIntegrable,
)
from .phase_space import WignerEvaluable, extreme_values
from .quadrature import (
    IntegralResult,
    Transform,
    abs_shifted_plus,
    neg_clip,
    shifted_plus,
    threshold_curve,
)
from .verdicts import (
    CurveSeries,
    MajorizationVerdict,
    Proposal,
    assemble_relation,
)

DEFAULT_LAMBDA_SCHEDULE = (8.0, 12.0, 16.0, 24.0)


# ---------------------------------------------------------------------------
# level functionals
# ---------------------------------------------------------------------------

def functional_I(
    w: WignerEvaluable,
    t: float,
    use_abs: bool = True,
    cfg: QuadratureConfig = DEFAULT_QUAD,
) -> IntegralResult:
    """The shifted-plus functional int [f - t]_+ dr with f = |W| or W."""
    if not w.finite_negativity:
        raise NotIntegrable("state rejected: negativity volume is not finite")
    if t < 0.0:
        raise DomainError(
            "t < 0 requires the cutoff-regularized machinery of proposal 2")
    tr = abs_shifted_plus(t) if use_abs else shifted_plus(t)
    vals, errs = threshold_curve(w, [tr], cfg)
    return IntegralResult(float(vals[0]), float(errs[0]))


@dataclass(frozen=True, eq=False)
class LevelFunctionSamples:
    """Superlevel volumes m(t), cutoff-regularized below t = 0."""

    thresholds: np.ndarray
    values: np.ndarray
    cutoff: float | None          # ball radius Lambda; None = finite part

    def __post_init__(self) -> None:
        t = np.asarray(self.thresholds, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if np.any(np.diff(t) <= 0):
            raise ValueError("thresholds must be strictly ascending")
        if self.cutoff is not None and np.any(np.diff(v) > 1e-9):
            raise ValueError("level function must be nonincreasing")
        object.__setattr__(self, "thresholds", t)
        object.__setattr__(self, "values", v)


def _ball_volume(radius: float, n_modes: int) -> float:
    return math.pi ** n_modes * radius ** (2 * n_modes) / math.factorial(n_modes)


def level_function(
    w: WignerEvaluable,
    t_grid,
    cutoff: float | None = None,
    cfg: QuadratureConfig = DEFAULT_QUAD,
) -> LevelFunctionSamples:
    """Volumes Vol{W >= t} on a threshold grid.

    For t < 0 the volume is infinite; with a finite ``cutoff`` the phase
    space is replaced by the centered ball of that radius, otherwise only
    the finite part -Vol{W < t} is returned.
    """
    ts = np.asarray(t_grid, dtype=float)
    out = np.empty_like(ts)
    for i, t in enumerate(ts):
        if t > 0.0:
            tr = Transform("indicator_ge", float(t))
            vals, _ = threshold_curve(w, [tr], cfg, radius_cap=cutoff)
            out[i] = vals[0]
        else:
            if not w.finite_negativity:
                raise NotIntegrable("negative thresholds need finite negativity")
            tr = Transform("indicator_lt", float(t))
            vals, _ = threshold_curve(w, [tr], cfg)
            vol_a = float(vals[0])
            if cutoff is None:
                out[i] = -vol_a
            else:
                out[i] = _ball_volume(cutoff, w.n_modes) - vol_a
    return LevelFunctionSamples(ts, out, cutoff)


@dataclass(frozen=True, eq=False)
class DecreasingRearrangement:
    """Single-variable decreasing rearrangement f_down on a volume grid."""

    u_grid: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        if np.any(np.diff(self.values) > 1e-9):
            raise ValueError("rearrangement must be nonincreasing")


def _superlevel_volume(w: WignerEvaluable, t: float,
                       cfg: QuadratureConfig) -> float:
    vals, _ = threshold_curve(w, [Transform("indicator_ge", float(t))], cfg)
    return float(vals[0])


def decreasing_rearrangement(
    w: WignerEvaluable,
    u_grid,
    cfg: QuadratureConfig = DEFAULT_QUAD,
) -> DecreasingRearrangement:
    """Generalized inverse of the level function by monotone bisection."""
    lo_val, hi_val = extreme_values(w)
    if lo_val < -1e-10:
        raise DomainError("decreasing rearrangement requires W >= 0")
    us = np.asarray(u_grid, dtype=float)
    out = np.empty_like(us)
    for i, u in enumerate(us):
        lo, hi = 0.0, hi_val
        if u <= 0.0:
            out[i] = hi_val
            continue
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if _superlevel_volume(w, mid, cfg) <= u:
                hi = mid
            else:
                lo = mid
        out[i] = hi
    return DecreasingRearrangement(us, out)


# ---------------------------------------------------------------------------
# t-grids and margin curves
# ---------------------------------------------------------------------------

def default_positive_grid(w1: WignerEvaluable, w2: WignerEvaluable,
                          points: int = 64) -> np.ndarray:
    """Geometric grid on (0, max(|W1|, |W2|)] where margins vary fastest."""
    m1 = max(abs(v) for v in extreme_values(w1))
    m2 = max(abs(v) for v in extreme_values(w2))
    top = max(m1, m2)
    return np.geomspace(top * 1e-5, top, points)


def default_negative_grid(w1: WignerEvaluable, w2: WignerEvaluable,
                          points: int = 32) -> np.ndarray:
    lo = min(extreme_values(w1)[0], extreme_values(w2)[0])
    if lo >= 0.0:
        return np.empty(0)
    return np.linspace(lo, lo * 1e-3, points)


def _abs_margin_curve(w1, w2, ts, cfg):
    tr = [abs_shifted_plus(float(t)) for t in ts]
    v1, e1 = threshold_curve(w1, tr, cfg)
    v2, e2 = threshold_curve(w2, tr, cfg)
    return v1 - v2, e1 + e2, v1, v2


def _verdict(margins, noise, proposal, ts, tol, notes=None, grid_desc=""):
    relation, min_margin = assemble_relation(
        margins, noise, tol.margin_noise_factor, tol.margin_abs_floor)
    evidence = CurveSeries(np.asarray(ts, dtype=float), np.asarray(margins),
                           y_name="margin")
    return MajorizationVerdict(relation, proposal, evidence, min_margin,
                               grid_desc, notes or {})


# ---------------------------------------------------------------------------
# condition cross-checks for positive pairs
# ---------------------------------------------------------------------------

def _m_curve(w, ts, cfg):
    """Sampled level function on a positive threshold grid."""
    small = QuadratureConfig(
        radial_nodes=32, radial_cutoff=cfg.radial_cutoff,
        panel_max_width=cfg.panel_max_width,
        grid_halfwidth=cfg.grid_halfwidth,
        grid_points_per_axis=min(cfg.grid_points_per_axis, 160),
        scan_points=1024, tolerance=cfg.tolerance,
        hard_failure_factor=cfg.hard_failure_factor,
        check_refinement=False)
    return np.array([_superlevel_volume(w, float(t), small) for t in ts])


def _condition3_margins(m1, m2, ts, checks):
    """Tail integrals int_t^inf m(s) ds compared at selected thresholds."""
    out = []
    for tc in checks:
        sel = ts >= tc - 1e-15
        out.append(np.trapezoid(m1[sel] - m2[sel], ts[sel]))
    return np.array(out)


def _halved(values, ts):
    """Trapezoid on the every-other-point subgrid (error probe)."""
    keep = np.unique(np.r_[np.arange(0, len(ts), 2), len(ts) - 1])
    return values[keep], ts[keep]


def _condition4_margins(m1, m2, ts, vols):
    """Partial rearrangement integrals compared at matched volumes.

    The sampled level curve (t_k, m_k) is the rearrangement read sideways:
    f_down(m_k) = t_k, so int_0^v f_down du is a trapezoid along the
    swapped axes, plus the flat piece at height max W for u below the
    smallest sampled volume.
    """
    out = []
    for v in vols:
        acc = []
        for m, top in ((m1, ts[-1]), (m2, ts[-1])):
            u = m[::-1]
            f = ts[::-1]
            u0 = min(u[0], v)
            val = u0 * top  # flat top of the rearrangement
            uu = np.clip(u, None, v)
            seg = np.diff(uu)
            mid = 0.5 * (f[1:] + f[:-1])
            val += float(np.sum(seg * mid))
            acc.append(val)
        out.append(acc[0] - acc[1])
    return np.array(out)


def check_positive_majorization(
    w1: WignerEvaluable,
    w2: WignerEvaluable,
    t_grid=None,
    cfg: QuadratureConfig = DEFAULT_QUAD,
    tol: ToleranceConfig = DEFAULT_TOL,
    cross_checks: bool = True,
) -> MajorizationVerdict:
    """Classic continuous majorization for nonnegative normalized pairs.

    Decides by condition 1 (shifted-plus integrals) and, unless disabled,
    verifies that the level-function and rearrangement conditions agree in
    sign at a handful of matched thresholds.
    """
    for w in (w1, w2):
        lo, _ = extreme_values(w)
        if lo < -1e-9:
            raise DomainError("check_positive_majorization needs W >= 0")
        if not w.normalized:
            raise DomainError("both states must be normalized")
    ts = np.asarray(t_grid, dtype=float) if t_grid is not None else (
        default_positive_grid(w1, w2))
    margins, noise, v1, v2 = _abs_margin_curve(w1, w2, ts, cfg)
    notes = {"I_first_at_min_t": float(v1[0]), "I_second_at_min_t": float(v2[0])}
    verdict = _verdict(margins, noise, Proposal.PositiveClassic, ts, tol,
                       notes, f"geometric t-grid, {len(ts)} points")

    if cross_checks:
        top = min(extreme_values(w1)[1], extreme_values(w2)[1])
        checks = np.geomspace(0.02 * top, 0.7 * top, 5)
        fine = np.geomspace(0.015 * top, max(extreme_values(w1)[1],
                                             extreme_values(w2)[1]), 160)
        fine = np.unique(np.concatenate([fine, checks]))
        m1c = _m_curve(w1, fine, cfg)
        m2c = _m_curve(w2, fine, cfg)
        c3 = _condition3_margins(m1c, m2c, fine, checks)
        d_half, t_half = _halved(m1c - m2c, fine)
        c3_half = _condition3_margins(d_half, np.zeros_like(d_half), t_half, checks)
        band3 = tol.margin_noise_factor * (np.abs(c3 - c3_half) + 1e-9)
        idx = np.searchsorted(fine, checks)
        vols = 0.5 * (m1c[idx] + m2c[idx])
        c4 = _condition4_margins(m1c, m2c, fine, vols)
        keep = np.unique(np.r_[np.arange(0, len(fine), 2), len(fine) - 1])
        c4_half = _condition4_margins(m1c[keep], m2c[keep], fine[keep], vols)
        band4 = tol.margin_noise_factor * (np.abs(c4 - c4_half) + 1e-9)
        c1_vals, c1_noise, _, _ = _abs_margin_curve(w1, w2, checks, cfg)
        band1 = tol.margin_noise_factor * c1_noise + 1e-9
        for j in range(len(checks)):
            if abs(c1_vals[j]) <= band1[j]:
                continue
            for name, other, bnd in (("condition3", c3[j], band3[j]),
                                     ("condition4", c4[j], band4[j])):
                if abs(other) > bnd and np.sign(other) != np.sign(c1_vals[j]):
                    raise CrossCheckMismatch(
                        f"{name} margin {other:+.3e} contradicts condition 1 "
                        f"margin {c1_vals[j]:+.3e} at t = {checks[j]:.6g}")
        verdict.notes["cross_checks"] = "conditions 3 and 4 sign-consistent"
    return verdict


# ---------------------------------------------------------------------------
# Proposal 1: weak majorization of |W|
# ---------------------------------------------------------------------------

def proposal1_check(
    w1: WignerEvaluable,
    w2: WignerEvaluable,
    t_grid=None,
    cfg: QuadratureConfig = DEFAULT_QUAD,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> MajorizationVerdict:
    """Weak majorization of the absolute Wigner functions (t >= 0 only)."""
    for w in (w1, w2):
        if not w.finite_negativity:
            raise NotIntegrable("proposal 1 rejects states with infinite "
                                "negativity volume")
    ts = np.asarray(t_grid, dtype=float) if t_grid is not None else (
        default_positive_grid(w1, w2))
    margins, noise, v1, v2 = _abs_margin_curve(w1, w2, ts, cfg)
    notes = {"I0_first": float(v1[0]), "I0_second": float(v2[0])}
    return _verdict(margins, noise, Proposal.P1, ts, tol, notes,
                    f"geometric t-grid, {len(ts)} points")


# ---------------------------------------------------------------------------
# Proposal 2: signed functionals with cutoff regularization
# ---------------------------------------------------------------------------

def _negative_region(w, t, cfg):
    """(Vol{W < t}, int_{W >= t} W, combined error) for t < 0."""
    trs = [Transform("indicator_lt", float(t)), Transform("masked_ge", float(t))]
    vals, errs = threshold_curve(w, trs, cfg)
    return float(vals[0]), float(vals[1]), float(errs[0] + errs[1])


def proposal2_margin(w1, w2, t, cfg=DEFAULT_QUAD):
    """Limit of I_t[W1] - I_t[W2] after the cutoff cancels.

    For t >= 0 this is the plain difference of shifted-plus integrals; for
    t < 0 the state-independent divergence cancels and the finite
    remainder is t (VolA1 - VolA2) + int_{W1>=t} W1 - int_{W2>=t} W2.
    """
    if t >= 0.0:
        v1, e1 = threshold_curve(w1, [shifted_plus(float(t))], cfg)
        v2, e2 = threshold_curve(w2, [shifted_plus(float(t))], cfg)
        return float(v1[0] - v2[0]), float(e1[0] + e2[0])
    va1, mi1, err1 = _negative_region(w1, t, cfg)
    va2, mi2, err2 = _negative_region(w2, t, cfg)
    return float(t * (va1 - va2) + mi1 - mi2), float(abs(t) * (err1 + err2)
                                                     + err1 + err2)


def _capped_margin(w1, w2, t, cap, cfg):
    v1, _ = threshold_curve(w1, [shifted_plus(float(t))], cfg, radius_cap=cap)
    v2, _ = threshold_curve(w2, [shifted_plus(float(t))], cfg, radius_cap=cap)
    return float(v1[0] - v2[0])


def proposal2_check(
    w1: WignerEvaluable,
    w2: WignerEvaluable,
    t_grid=None,
    lambda_schedule=DEFAULT_LAMBDA_SCHEDULE,
    cfg: QuadratureConfig = DEFAULT_QUAD,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> MajorizationVerdict:
    """Signed-Wigner majorization via the regularized functional difference.

    The verdict uses the exact cutoff-free margins; before issuing it the
    cutoff schedule must exhibit collapse (successive curves agreeing
    within ``tol.collapse`` in the sup norm), mirroring how the divergence
    cancellation is diagnosed in practice.
    """
    for w in (w1, w2):
        if not w.finite_negativity:
            raise NotIntegrable("proposal 2 needs finite negativity volume")
        if not w.normalized:
            raise NotIntegrable("proposal 2 needs equal (unit) normalization")
    if t_grid is None:
        neg = default_negative_grid(w1, w2)
        pos = default_positive_grid(w1, w2)
        ts = np.concatenate([neg, pos])
    else:
        ts = np.asarray(t_grid, dtype=float)

    margins = np.empty_like(ts)
    noise = np.empty_like(ts)
    for i, t in enumerate(ts):
        margins[i], noise[i] = proposal2_margin(w1, w2, float(t), cfg)

    schedule = sorted(lambda_schedule)
    curves = {}
    for lam in schedule:
        curves[lam] = np.array(
            [_capped_margin(w1, w2, float(t), float(lam), cfg) for t in ts])
    sups = [float(np.max(np.abs(curves[a] - curves[b])))
            for a, b in zip(schedule[:-1], schedule[1:])]
    if sups and sups[-1] > tol.collapse:
        raise NoCollapse(
            f"cutoff margins failed to collapse: sup diffs {sups}")

    notes = {"lambda_schedule": list(schedule),
             "collapse_sup_diffs": sups,
             "lambda_curves": {str(lam): curves[lam] for lam in schedule}}
    return _verdict(margins, noise, Proposal.P2, ts, tol, notes,
                    f"negative bracket + geometric grid, {len(ts)} points")


# ---------------------------------------------------------------------------
# quasi-probability pair condition
# ---------------------------------------------------------------------------

def quasi_pair_check(
    w1: WignerEvaluable,
    w2: WignerEvaluable,
    u_grid=None,
    cfg: QuadratureConfig = DEFAULT_QUAD,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> MajorizationVerdict:
    """Pair condition on quasi-probability distributions.

    Requires int [W1-u]_+ >= int [W2-u]_+ together with
    int [W1+u]_- <= int [W2+u]_- for every u >= 0, where [y]_- = min(y, 0).
    Equivalent to proposal 2 for states with finitely supported negativity.
    """
    for w in (w1, w2):
        if not w.finite_negativity:
            raise NotIntegrable("quasi pair condition needs finite negativity")
        if not w.normalized:
            raise NotIntegrable("quasi pair condition needs unit normalization")
    if u_grid is None:
        pos = default_positive_grid(w1, w2)
        neg = default_negative_grid(w1, w2)
        us = np.unique(np.concatenate([pos, -neg]))
    else:
        us = np.asarray(u_grid, dtype=float)
        if np.any(us < 0):
            raise DomainError("u grid must be nonnegative")

    plus_margins, plus_noise = [], []
    minus_margins, minus_noise = [], []
    for u in us:
        v1, e1 = threshold_curve(w1, [shifted_plus(float(u))], cfg)
        v2, e2 = threshold_curve(w2, [shifted_plus(float(u))], cfg)
        plus_margins.append(float(v1[0] - v2[0]))
        plus_noise.append(float(e1[0] + e2[0]))
        n1, f1 = threshold_curve(w1, [neg_clip(float(u))], cfg)
        n2, f2 = threshold_curve(w2, [neg_clip(float(u))], cfg)
        # margin >= 0 favors the first state: int[W2+u]_- - int[W1+u]_-
        minus_margins.append(float(n2[0] - n1[0]))
        minus_noise.append(float(f1[0] + f2[0]))
    margins = np.array(plus_margins + minus_margins)
    noise = np.array(plus_noise + minus_noise)
    ts = np.concatenate([us, -us])
    order = np.argsort(ts)
    return _verdict(margins[order], noise[order], Proposal.Quasi, ts[order],
                    tol, {"u_points": len(us)},
                    f"pair condition on {len(us)} u-points")


# ---------------------------------------------------------------------------
# convexity of weak majorization
# ---------------------------------------------------------------------------

def convex_combination(weight: float, wa: WignerEvaluable,
                       wb: WignerEvaluable) -> WignerEvaluable:
    """Pointwise convex combination weight*wa + (1-weight)*wb."""
    if wa.n_modes != wb.n_modes:
        raise DomainError("components must share the mode count")
    if not 0.0 <= weight <= 1.0:
        raise DomainError("mixture weight must lie in [0, 1]")
    radial = (wa.is_radial and wb.is_radial and wa.profile is not None
              and wb.profile is not None)
    profile = None
    if radial:
        profile = lambda r: weight * wa.profile(r) + (1 - weight) * wb.profile(r)
    return WignerEvaluable(
        n_modes=wa.n_modes, kind="mixture",
        fn=lambda pts: weight * wa(pts) + (1 - weight) * wb(pts),
        is_radial=radial,
        finite_negativity=wa.finite_negativity and wb.finite_negativity,
        normalized=wa.normalized and wb.normalized,
        profile=profile,
        suggested_cutoff=max(wa.suggested_cutoff, wb.suggested_cutoff),
        meta={"weight": weight})


def mixing_preserves_weak_majorization_test(
    f: WignerEvaluable,
    g: WignerEvaluable,
    h: WignerEvaluable,
    t_samples=None,
    weights=(0.0, 0.25, 0.5, 0.75, 1.0),
    cfg: QuadratureConfig = DEFAULT_QUAD,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> bool:
    """Check f >> w g + (1-w) h for sampled mixing weights.

    Assumes f >> g and f >> h were established by the caller; returns
    False as soon as a sampled mixture margin dips below the noise band.
    """
    ts = (np.asarray(t_samples, dtype=float) if t_samples is not None
          else default_positive_grid(f, g, points=24))
    for wgt in weights:
        mix = convex_combination(float(wgt), g, h)
        margins, noise, _, _ = _abs_margin_curve(f, mix, ts, cfg)
        band = tol.margin_noise_factor * noise + tol.margin_abs_floor
        if np.any(margins < -band):
            return False
    return True
