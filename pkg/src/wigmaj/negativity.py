"""Wigner logarithmic negativity, restricted Renyi entropies and the
channel inequalities built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_QUAD, DEFAULT_TOL, QuadratureConfig, ToleranceConfig
from .errors import DomainError, InsufficientMargin, NotIntegrable
from .phase_space import WignerEvaluable, fock_wigner
from .quadrature import ABS, Transform, power, threshold_curve
from .verdicts import CurveSeries, Relation


@dataclass(frozen=True)
class RenyiIndex:
    """Real-branch exponent alpha = 2p / (2q - 1) in lowest terms."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p < 1 or self.q < 1:
            raise DomainError("p and q must be positive integers")
        # reduce 2p / (2q - 1); the gcd is odd, so the numerator stays even
        g = math.gcd(2 * self.p, 2 * self.q - 1)
        object.__setattr__(self, "p", (2 * self.p // g) // 2 if g > 1 else self.p)
        object.__setattr__(self, "q", ((2 * self.q - 1) // g + 1) // 2 if g > 1 else self.q)

    @property
    def alpha(self) -> float:
        return 2.0 * self.p / (2.0 * self.q - 1.0)


@dataclass(frozen=True)
class NegativityReport:
    """ln of the absolute integral plus its quadrature error estimate."""

    log_negativity: float
    abs_integral: float
    error_estimate: float

    def __post_init__(self) -> None:
        if self.abs_integral < 1.0 - 1e-6:
            raise DomainError("absolute integral of a state is >= 1")


def log_negativity(w: WignerEvaluable,
                   cfg: QuadratureConfig = DEFAULT_QUAD) -> NegativityReport:
    """N_W = ln int |W|; zero for Wigner-positive states.

    Consistency with the shifted-plus functional at t = 0 is asserted
    internally: int [W]_+ must equal (int|W| + 1) / 2 for normalized
    states.
    """
    if not w.finite_negativity:
        raise NotIntegrable("log-negativity diverges for this state")
    vals, errs = threshold_curve(w, [ABS, Transform("shifted_plus", 0.0)], cfg)
    abs_int, plus_int = float(vals[0]), float(vals[1])
    if w.normalized:
        expected = 0.5 * (abs_int + 1.0)
        if abs(plus_int - expected) > 200.0 * (errs[0] + errs[1]) + 1e-7:
            raise DomainError(
                f"I_0 identity violated: [W]_+ integral {plus_int:.9f} vs "
                f"(e^N + 1)/2 = {expected:.9f}")
    abs_int = max(abs_int, 1.0)
    rel_err = float(errs[0]) / abs_int
    return NegativityReport(math.log(abs_int), abs_int, rel_err)


def wigner_renyi(w: WignerEvaluable, idx: RenyiIndex,
                 cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Renyi entropy (1 - alpha)^-1 ln int W^alpha under the real branch.

    With alpha = 2p/(2q-1) the even numerator makes the real branch of
    W^alpha equal |W|^alpha, so the integrand is |W|^alpha throughout.
    """
    alpha = idx.alpha
    if abs(alpha - 1.0) < 1e-12:
        raise DomainError("alpha = 1 is the log-negativity path")
    if not w.finite_negativity:
        raise NotIntegrable("Renyi integrals diverge for this state")
    vals, _ = threshold_curve(w, [power(alpha)], cfg)
    return float(np.log(vals[0]) / (1.0 - alpha))


def renyi_channel_inequality(
    w_in: WignerEvaluable,
    channel,
    idx: RenyiIndex | None,
    cfg: QuadratureConfig = DEFAULT_QUAD,
    w_out: WignerEvaluable | None = None,
) -> tuple[float, float, float]:
    """(S_in, S_out, slack) with slack = -ln det X + S_out - S_in >= 0.

    The output state is produced by grid convolution unless a closed-form
    evaluable is supplied through ``w_out``.  For the alpha = 1 carrier pass
    ``idx=None``: the statement reduces to monotonicity of the
    log-negativity, N_out <= N_in.
    """
    if w_out is None:
        from .channels import convolve
        w_out = convolve(channel, w_in, cfg=cfg)
    if idx is None:
        n_in = log_negativity(w_in, cfg).log_negativity
        n_out = log_negativity(w_out, cfg).log_negativity
        return n_in, n_out, n_in - n_out
    if idx.alpha < 1.0:
        raise DomainError("the channel inequality needs alpha >= 1")
    s_in = wigner_renyi(w_in, idx, cfg)
    s_out = wigner_renyi(w_out, idx, cfg)
    return s_in, s_out, -math.log(channel.det_x()) + s_out - s_in


def fock_negativity_scan(
    n_max: int,
    cfg: QuadratureConfig = DEFAULT_QUAD,
    fit_window: int = 15,
) -> tuple[CurveSeries, tuple[float, float]]:
    """ln I_0[|W_n|] against ln n with a linear fit over the top points.

    The fit uses the ``fit_window`` data points with the largest n.
    Returns the sampled curve and the (slope, intercept) pair.
    """
    if n_max < 5:
        raise DomainError("need n_max >= 5")
    ns = np.arange(1, n_max + 1)
    log_i0 = np.empty(len(ns), dtype=float)
    for i, n in enumerate(ns):
        rep = log_negativity(fock_wigner(int(n)), cfg)
        log_i0[i] = rep.log_negativity
    curve = CurveSeries(np.log(ns.astype(float)), log_i0,
                        x_name="ln n", y_name="ln I0")
    sel = slice(max(0, len(ns) - fit_window), len(ns))
    a_mat = np.vstack([curve.x[sel], np.ones(len(ns))[sel]]).T
    coef, *_ = np.linalg.lstsq(a_mat, curve.y[sel], rcond=None)
    return curve, (float(coef[0]), float(coef[1]))


@dataclass(frozen=True)
class RuleOutReport:
    """Certified consequences of strict negativity gaps."""

    negativity_gap: float
    combined_error: float
    output_cannot_majorize_input: bool
    no_channel_from_second_to_first: bool
    details: str


def rule_out_propositions(
    w1: WignerEvaluable,
    w2: WignerEvaluable,
    verdicts=(),
    negativities: tuple[NegativityReport, NegativityReport] | None = None,
    channel_maps_1_to_2: bool = False,
    cfg: QuadratureConfig = DEFAULT_QUAD,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> RuleOutReport:
    """Apply the two strict-gap rule-out statements to a pair of states.

    With a channel mapping state 1 to state 2 and strictly larger
    negativity on the input, state 2 cannot majorize state 1 under either
    signed proposal.  With an established majorization 1 > 2 and a strict
    negativity gap, no Gaussian channel can map state 2 back to state 1.
    """
    if negativities is None:
        negativities = (log_negativity(w1, cfg), log_negativity(w2, cfg))
    n1, n2 = negativities
    gap = n1.log_negativity - n2.log_negativity
    err = 3.0 * (n1.error_estimate + n2.error_estimate)
    if abs(gap) <= err:
        raise InsufficientMargin(
            f"negativity gap {gap:.3e} does not exceed 3x combined error {err:.3e}")
    majorizes = any(v.relation is Relation.FirstMajorizes for v in verdicts)
    prop1 = channel_maps_1_to_2 and gap > 0
    prop2 = majorizes and gap > 0
    details = []
    if prop1:
        details.append("output cannot majorize input under proposals 1 and 2")
    if prop2:
        details.append("no Gaussian channel maps the second state to the first")
    return RuleOutReport(gap, err, prop1, prop2,
                         "; ".join(details) or "hypotheses not met")
