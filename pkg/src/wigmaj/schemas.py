"""Versioned JSON schemas for states and channels, plus CSV helpers."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import (
    GaussianChannel,
    amplification_channel,
    classical_mixing_channel,
    thermal_noise_channel,
)
from .errors import SchemaError
from .gaussian_algebra import (
    CovarianceMatrix,
    GaussianStateSpec,
    harmonic_chain_spectrum,
)
from .phase_space import (
    WignerEvaluable,
    box_state_wigner,
    cat_wigner,
    fock_mixture,
    fock_wigner,
    gaussian_mixture,
    gaussian_wigner,
)

SCHEMA_VERSION = 1


def _require(doc: dict, key: str, context: str):
    if key not in doc:
        raise SchemaError(f"{context}: missing required field {key!r}")
    return doc[key]


def load_state(path_or_doc) -> WignerEvaluable:
    """Build an evaluable from a state JSON document or file path."""
    doc = _as_doc(path_or_doc, "state")
    kind = _require(doc, "type", "state")
    try:
        if kind == "gaussian":
            return gaussian_wigner(_gaussian_spec(doc))
        if kind == "harmonic_chain":
            spectrum = harmonic_chain_spectrum(
                int(_require(doc, "N", kind)),
                float(_require(doc, "omega", kind)),
                float(_require(doc, "beta", kind)))
            cov = CovarianceMatrix.from_spectrum(spectrum.sigmas)
            return gaussian_wigner(GaussianStateSpec.centered(cov))
        if kind == "fock":
            return fock_wigner(int(_require(doc, "n", kind)))
        if kind == "fock_mixture":
            pair = tuple(doc.get("pair", (0, 1)))
            return fock_mixture(float(_require(doc, "u", kind)), pair)
        if kind == "cat":
            return cat_wigner(np.asarray(_require(doc, "alpha", kind), float),
                              str(_require(doc, "parity", kind)))
        if kind == "gaussian_mixture":
            specs = [_gaussian_spec(c) for c in _require(doc, "components", kind)]
            return gaussian_mixture(np.asarray(_require(doc, "weights", kind),
                                               float), specs)
        if kind == "box":
            return box_state_wigner()
    except SchemaError:
        raise
    except Exception as exc:
        raise SchemaError(f"invalid {kind} state: {exc}") from exc
    raise SchemaError(f"unknown state type {kind!r}")


def _gaussian_spec(doc: dict) -> GaussianStateSpec:
    cov = CovarianceMatrix(np.asarray(_require(doc, "cov", "gaussian"), float))
    mean = np.asarray(doc.get("mean", np.zeros(2 * cov.n_modes)), float)
    return GaussianStateSpec(mean, cov)


def dump_gaussian_state(spec: GaussianStateSpec) -> dict:
    return {"schema_version": SCHEMA_VERSION, "type": "gaussian",
            "mean": spec.mean.tolist(), "cov": spec.cov.entries.tolist()}


def load_channel(path_or_doc) -> GaussianChannel:
    doc = _as_doc(path_or_doc, "channel")
    kind = _require(doc, "type", "channel")
    try:
        if kind == "thermal_noise":
            return thermal_noise_channel(float(_require(doc, "s", kind)),
                                         float(_require(doc, "c", kind)))
        if kind == "amplification":
            return amplification_channel(float(_require(doc, "eta", kind)))
        if kind == "classical_mixing":
            return classical_mixing_channel(
                np.asarray(_require(doc, "Y", kind), float))
        if kind == "raw":
            return GaussianChannel(np.asarray(_require(doc, "X", kind), float),
                                   np.asarray(_require(doc, "Y", kind), float))
    except SchemaError:
        raise
    except Exception as exc:
        raise SchemaError(f"invalid {kind} channel: {exc}") from exc
    raise SchemaError(f"unknown channel type {kind!r}")


def dump_channel(ch: GaussianChannel) -> dict:
    return {"schema_version": SCHEMA_VERSION, "type": "raw",
            "X": ch.X.tolist(), "Y": ch.Y.tolist()}


def _as_doc(path_or_doc, context: str) -> dict:
    if isinstance(path_or_doc, dict):
        doc = path_or_doc
    else:
        try:
            doc = json.loads(Path(path_or_doc).read_text())
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{context} file is not valid JSON: {exc}") from exc
        except OSError as exc:
            raise SchemaError(f"cannot read {context} file: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError(f"{context} document must be a JSON object")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {version}")
    return doc


def write_csv(path, header: list[str], columns: list[np.ndarray]) -> None:
    """Deterministic CSV emission: UTF-8, comma, 17 significant digits."""
    rows = len(columns[0])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(rows):
            fh.write(",".join(format(float(c[i]), ".17g") for c in columns)
                     + "\n")


def read_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return header, data
