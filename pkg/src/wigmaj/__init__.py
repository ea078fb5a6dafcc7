"""Continuous majorization of Wigner functions in quantum phase space."""

from .config import DEFAULT_QUAD, DEFAULT_TOL, QuadratureConfig, ToleranceConfig
from .gaussian_algebra import (
    CovarianceMatrix,
    DMSpectrumPrefix,
    GaussianStateSpec,
    SymplecticSpectrum,
    det_gamma_verdict,
    dm_majorization_verdict,
    dm_spectrum_prefix,
    harmonic_chain_spectrum,
    purity,
    renyi2,
    single_particle_energies,
    symplectic_form,
    symplectic_spectrum,
)
from .phase_space import (
    GridData,
    WignerEvaluable,
    box_state_wigner,
    cat_wigner,
    fock_mixture,
    fock_wigner,
    gaussian_mixture,
    gaussian_wigner,
    grid_function,
    laguerre,
    symplectic_transform,
)
from .quadrature import ABS, IDENTITY, IntegralResult, Transform, integrate
from .majorization import (
    DecreasingRearrangement,
    LevelFunctionSamples,
    check_positive_majorization,
    decreasing_rearrangement,
    functional_I,
    level_function,
    mixing_preserves_weak_majorization_test,
    proposal1_check,
    proposal2_check,
    quasi_pair_check,
)
from .channels import (
    GaussianChannel,
    RGUSampler,
    RandomGaussianUnitarySpec,
    amplification_channel,
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
from .negativity import (
    NegativityReport,
    RenyiIndex,
    fock_negativity_scan,
    log_negativity,
    renyi_channel_inequality,
    rule_out_propositions,
    wigner_renyi,
)
from .verdicts import CurveSeries, MajorizationVerdict, Proposal, Relation

__version__ = "0.1.0"
