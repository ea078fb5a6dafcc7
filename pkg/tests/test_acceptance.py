"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
status lines.  Tolerances are pinned here and match the library defaults.
"""

import math
import time

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
    classical_mixing_channel,
    convolve,
    kernel_eval,
    thermal_noise_channel,
)
from wigmaj.figures import (
    FIG1_PAIRS,
    corpus_run,
    figure_fig2l,
    figure_fig2r,
    figure_fig3l,
    figure_fig3r,
    figure_fig4,
)
from wigmaj.gaussian_algebra import (
    CovarianceMatrix,
    GaussianStateSpec,
    SymplecticSpectrum,
    det_gamma_verdict,
    dm_majorization_verdict,
    dm_spectrum_prefix,
    random_covariance,
    single_particle_energies,
)
from wigmaj.majorization import check_positive_majorization
from wigmaj.negativity import fock_negativity_scan
from wigmaj.phase_space import (
    cat_wigner,
    fock_mixture,
    fock_wigner,
    gaussian_wigner,
    grid_function,
    GridData,
)
from wigmaj.quadrature import ABS, IDENTITY, abs_shifted_plus, integrate, threshold_curve
from wigmaj.verdicts import Relation


def _report(name: str, ok: bool, detail: str = "") -> None:
    print(f"{'PASS' if ok else 'FAIL'}: {name}" + (f" ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


def test_result1_oracle_equivalence():
    """Condition-1 quadrature verdicts equal the determinant criterion."""
    rng = np.random.default_rng(20240501)
    start = time.time()
    mismatches = 0
    checked = 0
    for n in (1, 2, 3):
        for _ in range(50):
            c1 = random_covariance(n, rng)
            c2 = random_covariance(n, rng)
            while abs(c1.det() - c2.det()) < 1e-3 * max(c1.det(), c2.det()):
                c2 = random_covariance(n, rng)
            v_det = det_gamma_verdict(c1, c2)
            v_num = check_positive_majorization(
                gaussian_wigner(GaussianStateSpec.centered(c1)),
                gaussian_wigner(GaussianStateSpec.centered(c2)))
            checked += 1
            mismatches += v_det.relation is not v_num.relation
    elapsed = time.time() - start
    _report("Result 1 oracle equivalence",
            mismatches == 0 and elapsed < 120.0,
            f"{checked} pairs, {mismatches} mismatches, {elapsed:.1f}s")


def test_kernel_identities():
    """Marginal integrals equal 1 and 1/det X within 1e-6."""
    channels = [
        thermal_noise_channel(0.5, 0.8),
        thermal_noise_channel(0.3, 1.4),
        amplification_channel(1.6),
        classical_mixing_channel(np.array([[0.9, 0.25], [0.25, 0.6]])),
        GaussianChannel(np.diag([1.15, 0.9]), 0.85 * np.eye(2)),
    ]
    x0, w0 = leggauss(160)
    rng = np.random.default_rng(7)
    worst = 0.0
    for ch in channels:
        for _ in range(3):
            z = rng.normal(scale=0.7, size=2)
            r = rng.normal(scale=0.7, size=2)
            L = 14.0
            x = L * x0
            w = L * w0
            X, P = np.meshgrid(x, x, indexing="ij")
            pts = np.stack([X, P], axis=-1).reshape(-1, 2)
            k_r = np.array([kernel_eval(ch, p, z) for p in pts]).reshape(X.shape)
            int_dr = float(np.einsum("i,j,ij->", w, w, k_r))
            k_z = np.array([kernel_eval(ch, r, p) for p in pts]).reshape(X.shape)
            int_dz = float(np.einsum("i,j,ij->", w, w, k_z))
            worst = max(worst, abs(int_dr - 1.0),
                        abs(int_dz - 1.0 / ch.det_x()))
    _report("Kernel marginal identities", worst < 1e-6,
            f"worst deviation {worst:.2e}")


def test_appendix_closed_form_agreement():
    """All six analytic families match convolve, sup-norm < 1e-6."""
    grid = np.linspace(-6.0, 6.0, 101)
    pts = np.stack(np.meshgrid(grid, grid, indexing="ij"), axis=-1)
    cases = [
        ("thermal_on_mix01", dict(u=0.6, s=0.4, c=0.75)),
        ("thermal_on_mix12", dict(u=0.35, s=0.55, c=0.9)),
        ("thermal_on_cat", dict(alpha=[2.0, 0.0], parity="-", s=0.3, c=0.8)),
        ("classmix_on_mix01", dict(u=0.6, c=0.5)),
        ("classmix_on_mix12", dict(u=0.7, c=0.35)),
        ("classmix_on_cat", dict(alpha=[2.0, 0.0], parity="+", c=0.45)),
    ]
    start = time.time()
    worst = 0.0
    for family, params in cases:
        w_num = convolve(analytic_channel(family, **params),
                         analytic_input(family, **params), grid, grid)
        ref = analytic_output(family, **params)
        sup = float(np.max(np.abs(w_num.meta["grid"].values - ref(pts))))
        worst = max(worst, sup)
    elapsed = time.time() - start
    _report("Closed-form channel outputs vs convolution",
            worst < 1e-6 and elapsed < 300.0,
            f"worst sup-norm {worst:.2e}, {elapsed:.0f}s")


def test_fig2_reproduction(tmp_path):
    """Left panel: all Fock pairs cross; right panel: the mixture chain."""
    m_left = figure_fig2l(tmp_path)
    m_right = figure_fig2r(tmp_path)
    _report("Fock curves pairwise cross (10 pairs)",
            m_left["checks"]["all_pairs_cross"])
    _report("Mixture chain ordered with positive margins",
            m_right["checks"]["chain_first_majorizes"]
            and m_right["checks"]["chain_margins_positive"],
            f"min margin {min(m_right['checks']['chain_min_margins']):.3e}")


def test_fig2_inset_fit():
    """Negativity scaling fit: slope 0.44 +- 0.03, intercept 0.12 +- 0.05."""
    _, (slope, intercept) = fock_negativity_scan(27, fit_window=15)
    ok = abs(slope - 0.44) <= 0.03 and abs(intercept - 0.12) <= 0.05
    _report("Negativity scaling fit", ok,
            f"slope {slope:.4f}, intercept {intercept:.4f}")


def test_fig3_reproduction(tmp_path):
    """Cutoff collapse below 1e-3; left pair unordered, right pair ordered."""
    m_left = figure_fig3l(tmp_path)
    m_right = figure_fig3r(tmp_path)
    collapse = max(max(m_left["checks"]["collapse_sup_diffs"]),
                   max(m_right["checks"]["collapse_sup_diffs"]))
    ok = (collapse < 1e-3
          and m_left["checks"]["relation_w1_vs_w2"] == "Incomparable"
          and m_right["checks"]["relation_w1_vs_w2"] == "SecondMajorizes")
    _report("Regularized signed margins (collapse + verdicts)", ok,
            f"sup collapse diff {collapse:.2e}")


def test_fig4_result10(tmp_path):
    """Raw Renyi differences change sign; corrected slack stays >= -1e-6."""
    manifest = figure_fig4(tmp_path, "R")
    ok = (manifest["checks"]["raw_both_signs_present"]
          and manifest["checks"]["slack_min"] >= -1e-6)
    _report("Renyi non-monotonicity with nonnegative slack", ok,
            f"slack min {manifest['checks']['slack_min']:.3e}")


def test_result12_uhlmann_analogue():
    """Random Gaussian unitary outputs are majorized by their inputs with
    margins exceeding three Monte Carlo standard errors."""
    samplers = [
        RGUSampler(seed=101, rotations=False, zeta_max=0.0, displacement_cov=0.6),
        RGUSampler(seed=202, rotations=True, zeta_max=0.0, displacement_cov=0.4),
        RGUSampler(seed=303, rotations=True, zeta_max=0.5, displacement_cov=0.25),
    ]
    inputs = {
        "fock1": fock_wigner(1),
        "cat": cat_wigner([2.0, 0.0], "-"),
        "mix4_5": fock_mixture(0.8),
    }
    grid = np.linspace(-7.5, 7.5, 101)
    all_ok = True
    details = []
    for sampler in samplers:
        for name, w_in in inputs.items():
            spec = RandomGaussianUnitarySpec(sampler, 10_000)
            out = apply_random_gaussian_unitary(spec, w_in, grid, grid)
            from wigmaj.majorization import proposal1_check
            verdict = proposal1_check(w_in, out)
            ts = verdict.evidence.x
            in_curve, _ = threshold_curve(w_in, [abs_shifted_plus(float(t))
                                                 for t in ts])
            batch_curves = []
            for bvals in out.meta["batch_values"]:
                bw = grid_function(GridData(grid, grid, bvals), normalized=False)
                bc, _ = threshold_curve(bw, [abs_shifted_plus(float(t))
                                             for t in ts])
                batch_curves.append(bc)
            batch_curves = np.array(batch_curves)
            se = np.std(batch_curves, axis=0, ddof=1) / math.sqrt(
                len(batch_curves))
            margins = verdict.evidence.y
            eligible = in_curve > 1e-9
            robust = np.all(margins[eligible] > 3.0 * se[eligible])
            ok = verdict.relation is Relation.FirstMajorizes and bool(robust)
            all_ok &= ok
            noisy = eligible & (se > 1e-15)
            ratio = float(np.min(margins[noisy] / (3.0 * se[noisy])))
            details.append(f"{name}/seed{sampler.seed}:"
                           f"{'ok' if ok else 'FAIL'}(margin/3se={ratio:.1f})")
    _report("Uhlmann analogue for random Gaussian unitaries", all_ok,
            "; ".join(details))


def test_result4_dm_vs_wigner():
    """Single-mode agreement on 100 pairs plus the two-mode pair gallery."""
    rng = np.random.default_rng(4242)
    agree = 0
    total = 0
    while total < 100:
        s1, s2 = rng.uniform(0.55, 3.0, size=2)
        if abs(s1 - s2) < 1e-2:
            continue
        pa = dm_spectrum_prefix(
            single_particle_energies(SymplecticSpectrum(np.array([s1]))), 64)
        pb = dm_spectrum_prefix(
            single_particle_energies(SymplecticSpectrum(np.array([s2]))), 64)
        dm = dm_majorization_verdict(pa, pb)
        det = det_gamma_verdict(CovarianceMatrix.isotropic(s1),
                                CovarianceMatrix.isotropic(s2))
        total += 1
        agree += dm.relation is det.relation
    incomparable = 0
    wigner_first = 0
    for a_s, v_s, a_t, v_t in FIG1_PAIRS:
        spec_s = SymplecticSpectrum(np.sort([a_s * v_s, a_s / v_s])[::-1])
        spec_t = SymplecticSpectrum(np.sort([a_t * v_t, a_t / v_t])[::-1])
        pa = dm_spectrum_prefix(single_particle_energies(spec_s), 64)
        pb = dm_spectrum_prefix(single_particle_energies(spec_t), 64)
        dm = dm_majorization_verdict(pa, pb)
        incomparable += dm.relation is Relation.Incomparable
        det = det_gamma_verdict(CovarianceMatrix.from_spectrum(spec_s.sigmas),
                                CovarianceMatrix.from_spectrum(spec_t.sigmas))
        wigner_first += det.relation is Relation.FirstMajorizes
    ok = agree == total and incomparable >= 4 and wigner_first == 5
    _report("DM-vs-Wigner agreement and two-mode gallery", ok,
            f"{agree}/{total} single-mode agree, "
            f"{incomparable}/5 two-mode DM-incomparable")


def test_result9_corpus(tmp_path):
    """No FirstMajorizes verdict anywhere violates negativity ordering."""
    report = corpus_run(tmp_path / "corpus", rgu_samples=2000, seed=1234)
    first = [r for r in report["records"] if r["relation"] == "FirstMajorizes"]
    _report("Negativity monotone across the corpus",
            report["result9_violations"] == 0 and len(first) >= 8,
            f"{len(first)} ordered records, "
            f"{report['result9_violations']} violations")


def test_normalization_suite():
    """Every implemented family integrates to one within 1e-8."""
    states = {
        "vacuum": fock_wigner(0),
        "fock1": fock_wigner(1),
        "fock4": fock_wigner(4),
        "mix01_u0.3": fock_mixture(0.3),
        "mix01_u1": fock_mixture(1.0),
        "mix12_u0.4": fock_mixture(0.4, (1, 2)),
        "cat_minus": cat_wigner([2.0, 0.0], "-"),
        "cat_plus": cat_wigner([1.0, 1.0], "+"),
        "gauss_N2": gaussian_wigner(GaussianStateSpec.centered(
            CovarianceMatrix.from_spectrum([1.9, 0.65]))),
        "gauss_N3": gaussian_wigner(GaussianStateSpec.centered(
            CovarianceMatrix.from_spectrum([2.2, 1.1, 0.6]))),
        "thermal_out": analytic_output("thermal_on_mix01", u=0.7, s=0.4, c=0.9),
        "thermal_mix12_out": analytic_output("thermal_on_mix12",
                                             u=0.4, s=0.3, c=0.8),
        "thermal_cat_out": analytic_output("thermal_on_cat", alpha=[2.0, 0.0],
                                           parity="-", s=0.3, c=0.8),
        "classmix_out": analytic_output("classmix_on_mix01", u=0.7, c=0.6),
        "classmix_mix12_out": analytic_output("classmix_on_mix12", u=0.4, c=0.4),
        "classmix_cat_out": analytic_output("classmix_on_cat", alpha=[2.0, 0.0],
                                            parity="+", c=0.5),
    }
    worst = 0.0
    for name, w in states.items():
        val = integrate(w, IDENTITY).value
        worst = max(worst, abs(val - 1.0))
    abs_ok = abs(integrate(fock_wigner(1), ABS).value
                 - (4 * math.exp(-0.5) - 1.0)) < 1e-8
    _report("Normalization suite", worst < 1e-8 and abs_ok,
            f"worst |norm - 1| = {worst:.2e}")
