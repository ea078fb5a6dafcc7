"""Central tolerance and quadrature configuration.

All numeric cutoffs used by verdict logic live in :class:`ToleranceConfig`
so tests and the CLI can pin them in one place.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class ToleranceConfig:
    """Numeric tolerances shared by the whole library."""

    symmetry_abs: float = 1e-12        # covariance symmetry check
    uncertainty_slack: float = 1e-10   # symplectic eigenvalues >= 1/2 - slack
    det_tie_rel: float = 1e-10         # relative tie window on determinants
    spectrum_product_rel: float = 1e-9  # prod(sigma^2) vs det gamma
    quadrature: float = 1e-8           # target accuracy of integrals
    normalization: float = 1e-8        # |integral W - 1| allowed
    margin_noise_factor: float = 5.0   # margin "zero" below factor * err
    margin_abs_floor: float = 1e-12    # absolute floor under the noise band
    dm_tie: float = 1e-12              # partial-sum tie window
    collapse: float = 1e-3             # cutoff-schedule agreement requirement
    cp_slack: float = 1e-10            # channel complete-positivity floor


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True)
class QuadratureConfig:
    """Knobs for the quadrature engines.

    radial_nodes
        Gauss-Legendre nodes per panel for 1-D profile integrals.
    radial_cutoff
        Upper radius for radial integrals; enlarged automatically when a
        state suggests a wider support.
    panel_max_width
        Panels longer than this are subdivided (controls error on
        oscillatory integrands).
    grid_halfwidth, grid_points_per_axis
        Tensor-product grid for non-radial evaluables.
    scan_points
        Sampling density used to bracket sign changes before root polish.
    tolerance
        Accuracy demanded from the node-doubling test before
        :class:`~wigmaj.errors.TolExceeded` is raised.
    """

    radial_nodes: int = 48
    radial_cutoff: float = 12.0
    panel_max_width: float = 0.5
    grid_halfwidth: float = 12.0
    grid_points_per_axis: int = 220
    nd_nodes_per_axis: int = 32
    scan_points: int = 4096
    tolerance: float = 1e-8
    hard_failure_factor: float = 1e5   # raise only beyond factor * tolerance
    check_refinement: bool = True
    hermite_nodes: int = 64            # Gauss-Hermite nodes for convolutions

    def wider(self, cutoff: float) -> "QuadratureConfig":
        """Copy with the cutoffs enlarged to at least ``cutoff``."""
        return replace(
            self,
            radial_cutoff=max(self.radial_cutoff, cutoff),
            grid_halfwidth=max(self.grid_halfwidth, cutoff),
        )


DEFAULT_QUAD = QuadratureConfig()
