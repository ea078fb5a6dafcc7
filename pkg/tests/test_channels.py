"""Gaussian channels: kernels, convolution oracles, composition, witnesses."""

import math

import numpy as np
import pytest
from numpy.polynomial.legendre import leggauss

from wigmaj.channels import (
    GaussianChannel,
    RGUSampler,
    RandomGaussianUnitarySpec,
    amplification_channel,
    analytic_channel,
    analytic_input,
    analytic_output,
    apply_random_gaussian_unitary,
    apply_to_gaussian,
    choi_covariance,
    classical_mixing_channel,
    compose,
    convolve,
    gaussian_unitary_channel,
    identity_channel,
    is_wigner_majorizing,
    kernel_eval,
    loss_channel,
    tautological_witness,
    thermal_noise_channel,
)
from wigmaj.errors import NotFound, NotSPD, ParamOutOfRange, SingularY
from wigmaj.gaussian_algebra import (
    CovarianceMatrix,
    GaussianStateSpec,
    random_covariance,
    symplectic_form,
)
from wigmaj.majorization import proposal1_check
from wigmaj.phase_space import cat_wigner, fock_mixture, fock_wigner, gaussian_wigner
from wigmaj.quadrature import integrate, power
from wigmaj.verdicts import Relation


def gl_2d_integral(f, L=10.0, n=220):
    x0, w0 = leggauss(n)
    x = L * x0
    w = L * w0
    X, Y = np.meshgrid(x, x, indexing="ij")
    vals = f(X, Y)
    return float(np.einsum("i,j,ij->", w, w, vals))


# ---------------------------------------------------------------------------
# constructors and covariance action
# ---------------------------------------------------------------------------

def test_thermal_noise_limits():
    ch0 = thermal_noise_channel(0.0, 1.0)
    assert np.allclose(ch0.X, np.eye(2)) and np.allclose(ch0.Y, 0.0)
    ch1 = thermal_noise_channel(1.0, 0.8)
    assert np.allclose(ch1.X, 0.0) and np.allclose(ch1.Y, 0.8 * np.eye(2))
    assert thermal_noise_channel(0.5, 0.75).det_x() == pytest.approx(0.5)
    with pytest.raises(ParamOutOfRange):
        thermal_noise_channel(1.2, 1.0)
    with pytest.raises(ParamOutOfRange):
        thermal_noise_channel(0.5, 0.3)


def test_amplification_examples():
    assert np.allclose(amplification_channel(1.0).X, np.eye(2))
    amp = amplification_channel(2.0)
    assert amp.det_x() == pytest.approx(2.0)
    assert is_wigner_majorizing(amp)
    j = symplectic_form(1)
    for eta in (1.0, 1.5, 4.0):
        ch = amplification_channel(eta)
        herm = ch.Y + 0.5j * (j - ch.X @ j @ ch.X.T)
        assert np.min(np.linalg.eigvalsh(herm)) >= -1e-10
    with pytest.raises(ParamOutOfRange):
        amplification_channel(0.9)


def test_classical_mixing_properties():
    ch = classical_mixing_channel(0.7 * np.eye(2))
    assert np.allclose(ch.X, np.eye(2))
    assert is_wigner_majorizing(ch)
    with pytest.raises(NotSPD):
        classical_mixing_channel(np.diag([1.0, -0.2]))
    rng = np.random.default_rng(12)
    for _ in range(10):
        gamma = random_covariance(1, rng)
        out = apply_to_gaussian(ch, GaussianStateSpec.centered(gamma))
        assert out.cov.det() >= gamma.det() - 1e-12


def test_apply_to_gaussian_examples():
    spec = GaussianStateSpec.centered(CovarianceMatrix.isotropic(1.0))
    out = apply_to_gaussian(identity_channel(), spec)
    assert np.allclose(out.cov.entries, spec.cov.entries)
    s, c = 0.4, 1.3
    out = apply_to_gaussian(thermal_noise_channel(s, c), spec)
    assert out.cov.entries[0, 0] == pytest.approx((1 - s) * 1.0 + s * c)
    vac = GaussianStateSpec.centered(CovarianceMatrix.vacuum())
    fixed = apply_to_gaussian(loss_channel(0.7), vac)
    assert np.allclose(fixed.cov.entries, vac.cov.entries, atol=1e-14)


def test_invalid_channel_rejected():
    # pure attenuation without added noise violates complete positivity
    with pytest.raises(ParamOutOfRange):
        GaussianChannel(0.5 * np.eye(2), np.zeros((2, 2)))


# ---------------------------------------------------------------------------
# kernel identities
# ---------------------------------------------------------------------------

def test_kernel_peak_value():
    ch = thermal_noise_channel(0.5, 0.8)
    expected = 1.0 / (2 * math.pi * math.sqrt(np.linalg.det(ch.Y)))
    assert kernel_eval(ch, np.zeros(2), np.zeros(2)) == pytest.approx(expected)


def test_kernel_singular_y():
    with pytest.raises(SingularY):
        kernel_eval(identity_channel(), np.zeros(2), np.zeros(2))


def test_kernel_marginals_random_channels():
    """int k dr = 1 and int k dz = 1/det X for random valid channels."""
    rng = np.random.default_rng(21)
    channels = [
        thermal_noise_channel(0.5, 0.8),
        thermal_noise_channel(0.25, 1.5),
        amplification_channel(1.7),
        classical_mixing_channel(np.array([[0.8, 0.2], [0.2, 0.5]])),
        GaussianChannel(np.diag([1.1, 0.95]), 0.9 * np.eye(2)),
    ]
    for ch in channels:
        for _ in range(3):
            z = rng.normal(scale=0.8, size=2)
            r = rng.normal(scale=0.8, size=2)
            int_dr = gl_2d_integral(
                lambda X, P: np.vectorize(
                    lambda a, b: kernel_eval(ch, np.array([a, b]), z))(X, P),
                L=max(8.0, float(np.linalg.norm(ch.X @ z)) + 8.0), n=120)
            assert int_dr == pytest.approx(1.0, abs=1e-6)
            scale = float(np.linalg.norm(np.linalg.inv(ch.X) @ r))
            int_dz = gl_2d_integral(
                lambda X, P: np.vectorize(
                    lambda a, b: kernel_eval(ch, r, np.array([a, b])))(X, P),
                L=max(8.0, scale + 8.0), n=120)
            assert int_dz == pytest.approx(1.0 / ch.det_x(), abs=1e-6)


# ---------------------------------------------------------------------------
# convolution against closed forms
# ---------------------------------------------------------------------------

def test_convolve_near_identity():
    grid = np.linspace(-6.0, 6.0, 81)
    w_in = fock_mixture(0.6)
    out = convolve(thermal_noise_channel(1e-9, 0.8), w_in, grid, grid)
    ref = w_in.on_grid(grid, grid)
    assert np.max(np.abs(out.meta["grid"].values - ref)) < 1e-6


def test_convolve_matches_thermal_closed_form():
    grid = np.linspace(-6.0, 6.0, 81)
    params = dict(u=0.6, s=0.4, c=0.75)
    w_in = analytic_input("thermal_on_mix01", **params)
    ch = analytic_channel("thermal_on_mix01", **params)
    out = convolve(ch, w_in, grid, grid)
    ref = analytic_output("thermal_on_mix01", **params)
    sup = np.max(np.abs(out.meta["grid"].values - ref.on_grid(grid, grid)))
    assert sup < 1e-6


def test_convolve_matches_classical_mixing_on_cat():
    grid = np.linspace(-6.0, 6.0, 81)
    params = dict(alpha=[2.0, 0.0], parity="+", c=0.45)
    w_in = analytic_input("classmix_on_cat", **params)
    ch = analytic_channel("classmix_on_cat", **params)
    out = convolve(ch, w_in, grid, grid)
    ref = analytic_output("classmix_on_cat", **params)
    sup = np.max(np.abs(out.meta["grid"].values - ref.on_grid(grid, grid)))
    assert sup < 1e-6


def test_convolve_degenerate_paths():
    grid = np.linspace(-6.0, 6.0, 61)
    # X = 0: output is the Gaussian with covariance Y
    ch = thermal_noise_channel(1.0, 0.9)
    out = convolve(ch, fock_wigner(1), grid, grid)
    ref = gaussian_wigner(GaussianStateSpec.centered(CovarianceMatrix(ch.Y)))
    assert np.max(np.abs(out.meta["grid"].values - ref.on_grid(grid, grid))) < 1e-12
    # Y = 0: unitary path
    s = np.diag([1.25, 0.8])
    out = convolve(gaussian_unitary_channel(s), fock_wigner(1), grid, grid)
    sinv = np.linalg.inv(s)
    pts = np.stack(np.meshgrid(grid, grid, indexing="ij"), axis=-1)
    ref_vals = fock_wigner(1)(pts @ sinv.T)
    assert np.max(np.abs(out.meta["grid"].values - ref_vals)) < 1e-12


def test_convolution_covariance_consistency():
    """Moments of the convolved grid match the covariance action."""
    ch = thermal_noise_channel(0.45, 1.2)
    spec = GaussianStateSpec(np.array([0.6, -0.4]),
                             CovarianceMatrix(np.array([[1.1, 0.25],
                                                        [0.25, 0.8]])))
    w_in = gaussian_wigner(spec)
    grid = np.linspace(-10.0, 10.0, 201)
    out = convolve(ch, w_in, grid, grid)
    vals = out.meta["grid"].values
    dx = out.meta["grid"].dx
    X, P = np.meshgrid(grid, grid, indexing="ij")
    mass = np.sum(vals) * dx * dx
    mean = np.array([np.sum(X * vals), np.sum(P * vals)]) * dx * dx / mass
    cov = np.empty((2, 2))
    for i, a in enumerate((X, P)):
        for j, b in enumerate((X, P)):
            cov[i, j] = np.sum((a - mean[i]) * (b - mean[j]) * vals) * dx * dx
    cov /= mass
    expected = apply_to_gaussian(ch, spec)
    assert mass == pytest.approx(1.0, abs=1e-6)
    assert np.allclose(mean, expected.mean, atol=1e-6)
    assert np.allclose(cov, expected.cov.entries, atol=1e-6)


def test_analytic_family_consistency_limits():
    # s = 0 leaves the input invariant
    w = analytic_output("thermal_on_mix01", u=0.35, s=0.0, c=0.9)
    ref = fock_mixture(0.35)
    pts = np.random.default_rng(5).normal(size=(50, 2))
    assert np.allclose(w(pts), ref(pts), atol=1e-14)
    # s = 1 maps onto the thermal state with eigenvalue c
    w = analytic_output("thermal_on_mix01", u=0.35, s=1.0, c=0.9)
    th = gaussian_wigner(GaussianStateSpec.centered(CovarianceMatrix.isotropic(0.9)))
    assert np.allclose(w(pts), th(pts), atol=1e-14)
    # u = 0 gives the Gaussian with gamma = (1 + s(2c - 1))/2
    s, c = 0.45, 1.1
    w = analytic_output("thermal_on_mix01", u=0.0, s=s, c=c)
    gam = (1 + s * (2 * c - 1)) / 2
    th = gaussian_wigner(GaussianStateSpec.centered(CovarianceMatrix.isotropic(gam)))
    assert np.allclose(w(pts), th(pts), atol=1e-14)
    with pytest.raises(ParamOutOfRange):
        analytic_output("thermal_on_mix01", u=0.5, s=0.5, c=0.3)


def test_analytic_mix12_limits():
    pts = np.random.default_rng(6).normal(size=(40, 2))
    w = analytic_output("thermal_on_mix12", u=0.3, s=0.0, c=0.8)
    ref = fock_mixture(0.3, (1, 2))
    assert np.allclose(w(pts), ref(pts), atol=1e-13)
    w = analytic_output("classmix_on_mix12", u=0.3, c=1e-12)
    assert np.allclose(w(pts), ref(pts), atol=1e-10)


# ---------------------------------------------------------------------------
# composition and preorder structure
# ---------------------------------------------------------------------------

def test_compose_identity_neutral():
    ch = thermal_noise_channel(0.3, 0.9)
    for comp in (compose(identity_channel(), ch), compose(ch, identity_channel())):
        assert np.allclose(comp.X, ch.X) and np.allclose(comp.Y, ch.Y)


def test_compose_matches_sequential_action():
    rng = np.random.default_rng(8)
    ch1 = thermal_noise_channel(0.35, 0.8)
    ch2 = thermal_noise_channel(0.2, 1.4)
    comp = compose(ch2, ch1)
    for _ in range(20):
        spec = GaussianStateSpec.centered(random_covariance(1, rng))
        seq = apply_to_gaussian(ch2, apply_to_gaussian(ch1, spec))
        par = apply_to_gaussian(comp, spec)
        assert np.allclose(seq.cov.entries, par.cov.entries, atol=1e-12)


def test_compose_associative_and_cp():
    ch1 = thermal_noise_channel(0.3, 0.8)
    ch2 = amplification_channel(1.5)
    ch3 = classical_mixing_channel(0.4 * np.eye(2))
    left = compose(compose(ch3, ch2), ch1)
    right = compose(ch3, compose(ch2, ch1))
    assert np.allclose(left.X, right.X, atol=1e-12)
    assert np.allclose(left.Y, right.Y, atol=1e-12)  # also validated CP on build


def test_majorizing_predicate():
    assert is_wigner_majorizing(amplification_channel(2.0))
    assert not is_wigner_majorizing(thermal_noise_channel(0.5, 0.75))
    rot = np.array([[0.0, 1.0], [-1.0, 0.0]])
    assert is_wigner_majorizing(gaussian_unitary_channel(rot))


# ---------------------------------------------------------------------------
# tautological witnesses
# ---------------------------------------------------------------------------

def test_witness_to_vacuum():
    ch = tautological_witness(fock_wigner(1),
                              GaussianStateSpec.centered(CovarianceMatrix.vacuum()))
    assert np.allclose(ch.X, 0.0)
    assert np.allclose(ch.Y, 0.5 * np.eye(2))


def test_witness_thermal_to_thermal_is_classical_mixing():
    a = GaussianStateSpec.centered(CovarianceMatrix.isotropic(1.0))
    b = GaussianStateSpec.centered(CovarianceMatrix.isotropic(2.0))
    ch = tautological_witness(a, b)
    assert np.allclose(ch.X, np.eye(2))
    assert np.allclose(ch.Y, 1.0 * np.eye(2))


def test_witness_not_found_for_fock_pair():
    with pytest.raises(NotFound):
        tautological_witness(fock_wigner(1), fock_wigner(2))


def test_witness_symplectic_pair():
    from wigmaj.phase_space import symplectic_transform
    w = fock_wigner(1)
    s = np.diag([1.3, 1 / 1.3])
    tw = symplectic_transform(w, s)
    ch = tautological_witness(w, tw)
    assert np.allclose(ch.Y, 0.0)
    assert np.allclose(ch.X, np.linalg.inv(s))


# ---------------------------------------------------------------------------
# random Gaussian unitary channels
# ---------------------------------------------------------------------------

def test_rgu_point_mass_identity():
    sampler = RGUSampler(fixed=(np.eye(2), np.zeros(2)))
    spec = RandomGaussianUnitarySpec(sampler, 64)
    grid = np.linspace(-6.0, 6.0, 61)
    out = apply_random_gaussian_unitary(spec, fock_wigner(1), grid, grid)
    ref = fock_wigner(1).on_grid(grid, grid)
    assert np.max(np.abs(out.meta["grid"].values - ref)) < 1e-14


def test_rgu_samples_are_symplectic():
    sampler = RGUSampler(seed=3, rotations=True, zeta_max=0.6,
                         displacement_cov=0.5)
    mats, _ = sampler.sample(200)
    j = symplectic_form(1)
    for s in mats:
        assert np.max(np.abs(s.T @ j @ s - j)) < 1e-10


def test_rgu_displacement_converges_to_classical_mixing():
    """Monte Carlo displacement averaging approaches the Gaussian convolution
    at the 1/sqrt(M) rate."""
    c = 0.5
    ref = analytic_output("classmix_on_mix01", u=1.0, c=c)
    grid = np.linspace(-5.0, 5.0, 41)
    ref_vals = ref.on_grid(grid, grid)
    errs = []
    for m in (400, 1600, 6400):
        sampler = RGUSampler(seed=9, rotations=False, zeta_max=0.0,
                             displacement_cov=c)
        out = apply_random_gaussian_unitary(
            RandomGaussianUnitarySpec(sampler, m), fock_wigner(1), grid, grid)
        errs.append(np.sqrt(np.mean((out.meta["grid"].values - ref_vals) ** 2)))
    assert errs[2] < errs[0]
    assert errs[2] < 2.5 * errs[0] / 4.0  # 1/sqrt(M) would give a factor 4


def test_rgu_output_majorized_by_input():
    sampler = RGUSampler(seed=13, rotations=True, zeta_max=0.4,
                         displacement_cov=0.4)
    spec = RandomGaussianUnitarySpec(sampler, 3000)
    grid = np.linspace(-7.0, 7.0, 101)
    out = apply_random_gaussian_unitary(spec, fock_wigner(1), grid, grid)
    verdict = proposal1_check(fock_wigner(1), out)
    assert verdict.relation is Relation.FirstMajorizes


# ---------------------------------------------------------------------------
# Choi covariance, Result 5, Result 10
# ---------------------------------------------------------------------------

def test_choi_covariance_blocks():
    ch = thermal_noise_channel(0.4, 0.9)
    g0 = choi_covariance(ch, 0.0)
    assert np.allclose(g0[:2, :2], ch.X @ ch.X.T + ch.Y)
    assert np.allclose(g0[:2, 2:], 0.0)
    assert np.allclose(g0[2:, 2:], np.eye(2))
    g2 = choi_covariance(ch, 2.0)
    g4 = choi_covariance(ch, 4.0)
    ratio = g4[0, 2] / g2[0, 2]
    assert ratio == pytest.approx(math.exp(4.0), rel=1e-3)
    assert np.allclose(g4, g4.T)


def test_result5_no_fixed_direction():
    from wigmaj.majorization import check_positive_majorization
    w_in = gaussian_wigner(GaussianStateSpec.centered(CovarianceMatrix.isotropic(1.0)))
    hot = apply_to_gaussian(thermal_noise_channel(0.5, 2.0),
                            GaussianStateSpec.centered(CovarianceMatrix.isotropic(1.0)))
    cold = apply_to_gaussian(loss_channel(0.5),
                             GaussianStateSpec.centered(CovarianceMatrix.isotropic(1.0)))
    v_hot = check_positive_majorization(w_in, gaussian_wigner(hot))
    v_cold = check_positive_majorization(w_in, gaussian_wigner(cold))
    assert v_hot.relation is Relation.FirstMajorizes
    assert v_cold.relation is Relation.SecondMajorizes


def test_result10_quasi_renyi_inequality():
    """(det X)^(a-1) int |W_out|^a <= int |W_in|^a for a >= 1."""
    cases = []
    params = dict(u=0.6, s=0.35, c=0.75)
    cases.append((analytic_input("thermal_on_mix01", **params),
                  analytic_output("thermal_on_mix01", **params),
                  analytic_channel("thermal_on_mix01", **params)))
    grid = np.linspace(-8.0, 8.0, 161)
    amp = amplification_channel(2.0)
    cases.append((fock_wigner(1), convolve(amp, fock_wigner(1), grid, grid), amp))
    for w_in, w_out, ch in cases:
        detx = ch.det_x()
        for alpha in (1.0, 4.0 / 3.0, 8.0 / 5.0, 2.0):
            lhs = detx ** (alpha - 1.0) * integrate(w_out, power(alpha)).value
            rhs = integrate(w_in, power(alpha)).value
            assert lhs <= rhs + 1e-6


def test_results_7_11_majorizing_channels():
    """det X >= 1 channels majorize positive and negative inputs alike."""
    inputs = [
        gaussian_wigner(GaussianStateSpec.centered(CovarianceMatrix.isotropic(0.8))),
        fock_wigner(1),
        fock_mixture(0.7),
        cat_wigner([2.0, 0.0], "-"),
    ]
    grid = np.linspace(-9.0, 9.0, 151)
    for ch in (amplification_channel(1.6),
               classical_mixing_channel(0.5 * np.eye(2))):
        assert is_wigner_majorizing(ch)
        for w_in in inputs:
            if "spec" in w_in.meta:
                w_out = gaussian_wigner(apply_to_gaussian(ch, w_in.meta["spec"]))
            else:
                w_out = convolve(ch, w_in, grid, grid)
            verdict = proposal1_check(w_in, w_out)
            assert verdict.relation in (Relation.FirstMajorizes,
                                        Relation.Equivalent)
