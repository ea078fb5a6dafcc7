"""Quadrature engines: dispatch, transforms, error control."""

import math

import numpy as np
import pytest

from wigmaj.config import QuadratureConfig
from wigmaj.errors import NotIntegrable, TolExceeded
from wigmaj.phase_space import cat_wigner, fock_mixture, fock_wigner
from wigmaj.quadrature import (
    ABS,
    IDENTITY,
    abs_shifted_plus,
    bracketed_roots,
    integrate,
    power,
    shifted_plus,
    separable_threshold_curve,
    tensor2_threshold_curve,
    threshold_curve,
)


def test_integrate_identity_examples():
    assert integrate(fock_wigner(3), IDENTITY).value == pytest.approx(
        1.0, abs=1e-10)
    assert integrate(fock_wigner(1), ABS).value == pytest.approx(
        4 * math.exp(-0.5) - 1, abs=1e-12)
    # a threshold above the global maximum kills the integrand
    res = integrate(fock_wigner(2), shifted_plus(10.0))
    assert res.value == 0.0


def test_bracketed_roots_polynomial():
    f = lambda x: (x - 1.0) * (x - 2.5) * (x - 2.500001e3 / 1e3)
    roots = bracketed_roots(f, 4.0, 4001)
    assert any(abs(r - 1.0) < 1e-10 for r in roots)


def test_box_only_identity_allowed():
    from wigmaj.phase_space import box_state_wigner
    with pytest.raises(NotIntegrable):
        threshold_curve(box_state_wigner(), [ABS])


def test_refinement_failure_raises():
    cfg = QuadratureConfig(radial_nodes=2, panel_max_width=10.0,
                           scan_points=64, tolerance=1e-14,
                           hard_failure_factor=1.0)
    with pytest.raises(TolExceeded):
        integrate(fock_wigner(8), ABS, cfg)


def test_separable_matches_radial_for_centered_cat():
    cat0 = cat_wigner([0.0, 0.0], "+")  # radial path
    sep = dict(cat0.meta["separable"])
    for tr in (IDENTITY, ABS, abs_shifted_plus(0.05), power(2.0)):
        radial = integrate(cat0, tr).value
        via_sep, _ = separable_threshold_curve(sep, [tr])
        assert via_sep[0] == pytest.approx(radial, abs=1e-10)


def test_separable_matches_tensor_grid():
    # the tensor grid converges slowly across the |W| kink lines, so this is
    # a coarse consistency check; the separable path is the accurate one
    cat = cat_wigner([2.0, 0.0], "-")
    cfg = QuadratureConfig(grid_points_per_axis=480, check_refinement=False)
    fn_xy = lambda X, P: cat(np.stack([X, P], axis=-1))
    for tr in (ABS, abs_shifted_plus(0.03)):
        grid_val, _ = tensor2_threshold_curve(fn_xy, [tr], 11.0, cfg)
        sep_val = integrate(cat, tr).value
        assert grid_val[0] == pytest.approx(sep_val, abs=3e-3)


def test_gaussian_level_path_matches_radial():
    """The N-mode level parametrization agrees with the plain radial path."""
    from wigmaj.gaussian_algebra import CovarianceMatrix, GaussianStateSpec
    from wigmaj.phase_space import gaussian_wigner
    w = gaussian_wigner(GaussianStateSpec.centered(CovarianceMatrix.isotropic(1.3)))
    assert w.is_radial  # dispatched radially
    prof_val = integrate(w, abs_shifted_plus(0.02)).value
    # force the level path by dropping the radial flag
    from dataclasses import replace
    w_level = replace(w, is_radial=False, profile=None)
    level_val = integrate(w_level, abs_shifted_plus(0.02)).value
    assert level_val == pytest.approx(prof_val, abs=1e-9)


def test_threshold_curve_shares_error_estimates():
    w = fock_mixture(0.8)
    ts = [0.01, 0.05, 0.1]
    vals, errs = threshold_curve(w, [abs_shifted_plus(t) for t in ts])
    assert np.all(np.diff(vals) < 0)
    assert np.all(errs >= 0)
    assert np.all(errs < 1e-8)
