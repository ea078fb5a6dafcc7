"""Verdict and curve containers shared by every majorization criterion."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class Relation(Enum):
    FirstMajorizes = "FirstMajorizes"
    SecondMajorizes = "SecondMajorizes"
    Equivalent = "Equivalent"
    Incomparable = "Incomparable"


class Proposal(Enum):
    PositiveClassic = "PositiveClassic"
    P1 = "P1"
    P2 = "P2"
    Quasi = "Quasi"
    DetGamma = "DetGamma"
    DM = "DM"
    Tautological = "Tautological"


@dataclass(frozen=True, eq=False)
class CurveSeries:
    """Sampled (x, y) arrays used for figures and acceptance tests."""

    x: np.ndarray
    y: np.ndarray
    x_name: str = "t"
    y_name: str = "value"

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        if self.x.shape != self.y.shape:
            raise ValueError("x and y must have matching shapes")


@dataclass(frozen=True, eq=False)
class MajorizationVerdict:
    """Outcome of a pairwise comparison plus its numeric evidence."""

    relation: Relation
    proposal: Proposal
    evidence: CurveSeries
    min_margin: float
    t_grid: str
    notes: dict = field(default_factory=dict)

    @property
    def ordered(self) -> bool:
        return self.relation is not Relation.Incomparable

    def to_json_dict(self) -> dict:
        return {
            "relation": self.relation.value,
            "proposal": self.proposal.value,
            "min_margin": self.min_margin,
            "t_grid": self.t_grid,
            "notes": {k: _plain(v) for k, v in self.notes.items()},
        }


def _plain(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    return v


def assemble_relation(
    margins: np.ndarray,
    noise: np.ndarray,
    noise_factor: float,
    abs_floor: float,
) -> tuple[Relation, float]:
    """Relation from signed margins with per-point noise bands.

    A margin counts as zero while it stays inside ``noise_factor * noise``
    (plus an absolute floor), so a single noisy point cannot flip a
    verdict.  A sign change with both excursions outside the band means
    the curves genuinely cross.
    """
    margins = np.asarray(margins, dtype=float)
    band = noise_factor * np.asarray(noise, dtype=float) + abs_floor
    above = margins > band
    below = margins < -band
    if above.any() and below.any():
        relation = Relation.Incomparable
    elif above.any():
        relation = Relation.FirstMajorizes
    elif below.any():
        relation = Relation.SecondMajorizes
    else:
        relation = Relation.Equivalent
    return relation, float(np.min(margins))
