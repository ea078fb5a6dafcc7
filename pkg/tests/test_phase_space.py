"""Wigner families: spot values, normalization, symmetry, recurrences."""

import math

import numpy as np
import pytest

from wigmaj.config import QuadratureConfig
from wigmaj.errors import ParamOutOfRange
from wigmaj.gaussian_algebra import CovarianceMatrix, GaussianStateSpec
from wigmaj.phase_space import (
    GridData,
    box_state_wigner,
    cat_wigner,
    extreme_values,
    fock_mixture,
    fock_wigner,
    gaussian_mixture,
    gaussian_wigner,
    grid_function,
    laguerre,
    symplectic_transform,
)
from wigmaj.quadrature import (
    ABS,
    IDENTITY,
    Transform,
    integrate,
    tensor2_threshold_curve,
)

ORIGIN = np.zeros(2)


def binomial_laguerre(n, x):
    """Independent oracle: L_n(x) = sum (-1)^k C(n,k) x^k / k!."""
    acc = np.zeros_like(np.asarray(x, dtype=float))
    for k in range(n + 1):
        acc = acc + (-1) ** k * math.comb(n, k) * np.asarray(x) ** k / math.factorial(k)
    return acc


def test_laguerre_recurrence_matches_direct():
    rs = np.linspace(0.0, 5.5, 41)
    for n in range(16):
        via_recurrence = fock_wigner(n).profile(rs)
        direct = ((-1) ** n / math.pi) * np.exp(-rs * rs) * binomial_laguerre(
            n, 2 * rs * rs)
        assert np.allclose(via_recurrence, direct, atol=1e-12)


def test_gaussian_spot_values():
    vac = gaussian_wigner(GaussianStateSpec.centered(CovarianceMatrix.vacuum()))
    assert vac(ORIGIN) == pytest.approx(1.0 / math.pi)
    th = gaussian_wigner(GaussianStateSpec.centered(CovarianceMatrix.isotropic(1.0)))
    assert th(ORIGIN) == pytest.approx(1.0 / (2 * math.pi))


def test_gaussian_mean_shift():
    spec = GaussianStateSpec(np.array([1.0, -0.5]), CovarianceMatrix.vacuum())
    w = gaussian_wigner(spec)
    assert w(np.array([1.0, -0.5])) == pytest.approx(1.0 / math.pi)
    assert integrate(w, IDENTITY).value == pytest.approx(1.0, abs=1e-8)


def test_fock_spot_values():
    assert fock_wigner(0)(ORIGIN) == pytest.approx(1.0 / math.pi)
    assert fock_wigner(1)(ORIGIN) == pytest.approx(-1.0 / math.pi)
    with pytest.raises(ParamOutOfRange):
        fock_wigner(-1)


def test_fock_abs_integral_closed_form():
    val = integrate(fock_wigner(1), ABS)
    assert val.value == pytest.approx(4 * math.exp(-0.5) - 1, abs=1e-12)


def test_fock_symmetry():
    rng = np.random.default_rng(0)
    pts = rng.normal(size=(50, 2))
    for n in (1, 2, 5):
        w = fock_wigner(n)
        assert np.allclose(w(pts), w(-pts), atol=1e-14)


def test_mixture_examples():
    w0 = fock_mixture(0.0)
    f0 = fock_wigner(0)
    pts = np.random.default_rng(1).normal(size=(40, 2))
    assert np.allclose(w0(pts), f0(pts), atol=1e-15)
    # u = 1/2 sits at the passive boundary: nonnegative everywhere
    half = fock_mixture(0.5)
    lo, _ = extreme_values(half)
    assert lo >= -1e-15
    # u = 3/5 dips negative at the origin: (1 - 2u)/pi
    w = fock_mixture(0.6)
    assert w(ORIGIN) == pytest.approx(-1.0 / (5.0 * math.pi))
    lo, _ = extreme_values(w)
    assert lo < 0


def test_mixture_pair_12():
    w = fock_mixture(0.4, (1, 2))
    assert integrate(w, IDENTITY).value == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(ParamOutOfRange):
        fock_mixture(0.4, (0, 2))
    with pytest.raises(ParamOutOfRange):
        fock_mixture(1.0001)


def test_cat_matches_vacuum_at_zero_size():
    cat = cat_wigner([0.0, 0.0], "+")
    vac = fock_wigner(0)
    pts = np.random.default_rng(2).normal(size=(40, 2))
    assert np.allclose(cat(pts), vac(pts), atol=1e-15)


def test_cat_odd_spot_value():
    cat = cat_wigner([2.0, 0.0], "-")
    assert cat(ORIGIN) == pytest.approx(-1.0 / math.pi)
    assert integrate(cat, IDENTITY).value == pytest.approx(1.0, abs=1e-8)
    # exact parity symmetry
    pts = np.random.default_rng(3).normal(size=(30, 2), scale=2.0)
    assert np.array_equal(cat(pts), cat(-pts))
    with pytest.raises(ParamOutOfRange):
        cat_wigner([0.0, 0.0], "-")


def test_box_state():
    box = box_state_wigner()
    small_p = box(np.array([[0.0, 1e-6], [0.0, 1e-3]]))
    assert small_p[0] == pytest.approx(1.0 / math.pi, rel=1e-6)
    assert box(np.array([0.7, 1.0])) == 0.0
    assert not box.finite_negativity and not box.normalized


def test_box_abs_integral_diverges_logarithmically():
    box = box_state_wigner()
    fn_xy = lambda X, P: box(np.stack([X, P], axis=-1))
    cfg = QuadratureConfig(grid_points_per_axis=400, check_refinement=False)
    vals = []
    for L in (8.0, 16.0, 32.0, 64.0):
        out, _ = tensor2_threshold_curve(fn_xy, [ABS], L, cfg)
        vals.append(out[0])
    increments = np.diff(vals)
    assert np.all(increments > 0.1)


def test_gaussian_mixture_positive_and_normalized():
    spec1 = GaussianStateSpec.centered(CovarianceMatrix.isotropic(0.5))
    spec2 = GaussianStateSpec.centered(CovarianceMatrix.isotropic(1.5))
    mix = gaussian_mixture([0.3, 0.7], [spec1, spec2])
    assert integrate(mix, IDENTITY).value == pytest.approx(1.0, abs=1e-8)
    lo, _ = extreme_values(mix)
    assert lo >= 0.0


def test_grid_function_interpolation():
    x = np.linspace(-1.0, 1.0, 21)
    vals = np.add.outer(x, 2 * x)  # linear, reproduced exactly by bilinear
    g = grid_function(GridData(x, x, vals), normalized=False)
    q = np.array([[0.33, -0.41], [0.05, 0.99]])
    assert np.allclose(g(q), q[:, 0] + 2 * q[:, 1], atol=1e-12)
    assert g(np.array([5.0, 0.0])) == 0.0  # outside window


def test_symplectic_transform_evaluates_composition():
    w = fock_wigner(1)
    s = np.array([[1.2, 0.0], [0.0, 1.0 / 1.2]])
    tw = symplectic_transform(w, s)
    pts = np.random.default_rng(4).normal(size=(20, 2))
    assert np.allclose(tw(pts), w(pts @ s.T), atol=1e-15)
    assert tw.normalized  # det S = 1 preserves the integral


def test_radial_fast_path_matches_grid_quadrature():
    """Radial 1-D quadrature equals the 2-D tensor grid on sampled integrals."""
    cfg = QuadratureConfig(grid_points_per_axis=300, check_refinement=False)
    cases = [
        (fock_wigner(0), IDENTITY),
        (fock_wigner(1), ABS),
        (fock_wigner(2), ABS),
        (fock_mixture(0.6), Transform("abs_shifted_plus", 0.05)),
        (fock_mixture(0.9), Transform("power", 2.0)),
    ]
    for w, tr in cases:
        radial = integrate(w, tr).value
        fn_xy = lambda X, P: w(np.stack([X, P], axis=-1))
        grid, _ = tensor2_threshold_curve(fn_xy, [tr], 10.0, cfg)
        assert grid[0] == pytest.approx(radial, abs=5e-4)


def test_normalization_across_families():
    states = [
        fock_wigner(0), fock_wigner(3), fock_mixture(0.75),
        fock_mixture(0.3, (1, 2)), cat_wigner([2.0, 0.0], "-"),
        cat_wigner([1.0, 1.0], "+"),
        gaussian_wigner(GaussianStateSpec.centered(
            CovarianceMatrix.from_spectrum([1.7, 0.8]))),
    ]
    for w in states:
        assert integrate(w, IDENTITY).value == pytest.approx(1.0, abs=1e-8)
