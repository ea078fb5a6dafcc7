"""Command-line front end.

Exit codes: 0 for ordered or successful outcomes, 2 when a comparison is
Incomparable (so scripts can branch), 1 on invalid input or failed
regularization.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import figures
from .config import DEFAULT_QUAD, DEFAULT_TOL, QuadratureConfig
from .errors import WigmajError
from .gaussian_algebra import (
    det_gamma_verdict,
    dm_majorization_verdict,
    dm_spectrum_prefix,
    single_particle_energies,
)
from .channels import analytic_output, apply_to_gaussian, convolve
from .majorization import (
    check_positive_majorization,
    proposal1_check,
    proposal2_check,
    quasi_pair_check,
)
from .negativity import RenyiIndex, log_negativity, wigner_renyi
from .schemas import (
    SCHEMA_VERSION,
    dump_gaussian_state,
    load_channel,
    load_state,
    write_csv,
)
from .verdicts import Relation

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCOMPARABLE = 2


def _quad_profile() -> QuadratureConfig:
    profile = os.environ.get("WIGMAJ_PROFILE", "default")
    if profile == "fast":
        return QuadratureConfig(radial_nodes=24, scan_points=1024,
                                grid_points_per_axis=120, hermite_nodes=40)
    return DEFAULT_QUAD


def cmd_state_eval(args) -> int:
    w = load_state(args.state)
    if w.n_modes != 1:
        print("state eval emits single-mode grids only", file=sys.stderr)
        return EXIT_ERROR
    lin = np.linspace(-args.halfwidth, args.halfwidth, args.points)
    vals = w.on_grid(lin, lin)
    X, P = np.meshgrid(lin, lin, indexing="ij")
    write_csv(args.out, ["x", "p", "w"],
              [X.ravel(), P.ravel(), vals.ravel()])
    print(f"wrote {args.out}")
    return EXIT_OK


def _dm_verdict(wa, wb):
    sig_a, sig_b = wa.meta.get("sigmas"), wb.meta.get("sigmas")
    if sig_a is None or sig_b is None:
        raise WigmajError("dm proposal needs Gaussian (or harmonic-chain) states")
    from .gaussian_algebra import SymplecticSpectrum
    pa = dm_spectrum_prefix(single_particle_energies(SymplecticSpectrum(sig_a)), 64)
    pb = dm_spectrum_prefix(single_particle_energies(SymplecticSpectrum(sig_b)), 64)
    return dm_majorization_verdict(pa, pb)


def cmd_majorize(args) -> int:
    cfg = _quad_profile()
    wa = load_state(args.first)
    wb = load_state(args.second)
    if args.proposal == "detgamma":
        for w in (wa, wb):
            if "spec" not in w.meta:
                raise WigmajError("detgamma applies to Gaussian states")
        verdict = det_gamma_verdict(wa.meta["spec"].cov, wb.meta["spec"].cov)
    elif args.proposal == "dm":
        verdict = _dm_verdict(wa, wb)
    elif args.proposal == "positive":
        verdict = check_positive_majorization(wa, wb, cfg=cfg)
    elif args.proposal == "p1":
        verdict = proposal1_check(wa, wb, cfg=cfg)
    elif args.proposal == "p2":
        verdict = proposal2_check(wa, wb, cfg=cfg)
    else:
        verdict = quasi_pair_check(wa, wb, cfg=cfg)
    doc = verdict.to_json_dict()
    doc["schema_version"] = SCHEMA_VERSION
    doc["notes"].pop("lambda_curves", None)
    doc["tolerances"] = dataclasses.asdict(DEFAULT_TOL)
    payload = json.dumps(doc, indent=2, sort_keys=True)
    if args.json:
        Path(args.json).write_text(payload + "\n", encoding="utf-8")
    print(payload)
    if args.margins_csv:
        ev = verdict.evidence
        from .quadrature import abs_shifted_plus, threshold_curve
        try:
            i1, _ = threshold_curve(wa, [abs_shifted_plus(max(t, 0.0))
                                         for t in ev.x], cfg)
            i2, _ = threshold_curve(wb, [abs_shifted_plus(max(t, 0.0))
                                         for t in ev.x], cfg)
            # below t = 0 the individual functionals diverge; only the
            # margin (their regularized difference) is meaningful
            i1 = np.where(ev.x < 0, np.nan, i1)
            i2 = np.where(ev.x < 0, np.nan, i2)
        except WigmajError:
            i1 = np.full_like(ev.x, np.nan)
            i2 = np.full_like(ev.x, np.nan)
        write_csv(args.margins_csv, ["t", "I_t_first", "I_t_second", "margin"],
                  [ev.x, i1, i2, ev.y])
    return (EXIT_INCOMPARABLE if verdict.relation is Relation.Incomparable
            else EXIT_OK)


def cmd_channel_apply(args) -> int:
    ch = load_channel(args.channel)
    w = load_state(args.state)
    cfg = _quad_profile()
    out = Path(args.out)
    if args.method == "covariance":
        if "spec" not in w.meta:
            raise WigmajError("covariance method needs a Gaussian state")
        spec = apply_to_gaussian(ch, w.meta["spec"])
        out.write_text(json.dumps(dump_gaussian_state(spec), indent=2,
                                  sort_keys=True) + "\n", encoding="utf-8")
        print(f"wrote {out}")
        return EXIT_OK
    if args.method == "analytic":
        w_out = _match_analytic(ch, w)
    else:
        lin = np.linspace(-args.halfwidth, args.halfwidth, args.points)
        w_out = convolve(ch, w, lin, lin, cfg)
    lin = np.linspace(-args.halfwidth, args.halfwidth, args.points)
    vals = w_out.on_grid(lin, lin)
    X, P = np.meshgrid(lin, lin, indexing="ij")
    write_csv(out, ["x", "p", "w"], [X.ravel(), P.ravel(), vals.ravel()])
    meta = {"schema_version": SCHEMA_VERSION, "method": args.method,
            "grid": {"halfwidth": args.halfwidth, "points": args.points},
            "channel": {"X": ch.X.tolist(), "Y": ch.Y.tolist()}}
    out.with_suffix(".meta.json").write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {out}")
    return EXIT_OK


def _match_analytic(ch, w):
    x00 = float(ch.X[0, 0])
    iso_x = np.allclose(ch.X, x00 * np.eye(2), atol=1e-12)
    y00 = float(ch.Y[0, 0])
    iso_y = np.allclose(ch.Y, y00 * np.eye(2), atol=1e-12)
    if not (iso_x and iso_y):
        raise WigmajError("analytic outputs cover isotropic channels only")
    if abs(x00 - 1.0) < 1e-12 and y00 > 0:
        kind = "classmix"
        params = {"c": y00}
    else:
        s = 1.0 - x00 * x00
        if s <= 1e-12:
            raise WigmajError("analytic thermal family needs s > 0")
        c = y00 / s
        kind = "thermal"
        params = {"s": s, "c": c}
    if w.kind == "fock_mixture" and w.meta.get("pair") == (0, 1):
        return analytic_output(f"{kind}_on_mix01", u=w.meta["u"], **params)
    if w.kind == "fock_mixture" and w.meta.get("pair") == (1, 2):
        return analytic_output(f"{kind}_on_mix12", u=w.meta["u"], **params)
    if w.kind == "cat":
        return analytic_output(f"{kind}_on_cat", alpha=w.meta["alpha"],
                               parity=w.meta["parity"], **params)
    raise WigmajError(
        "no analytic family for this channel/state combination")


def cmd_negativity(args) -> int:
    w = load_state(args.state)
    rep = log_negativity(w, _quad_profile())
    print(json.dumps({"schema_version": SCHEMA_VERSION,
                      "log_negativity": rep.log_negativity,
                      "abs_integral": rep.abs_integral,
                      "error_estimate": rep.error_estimate},
                     indent=2, sort_keys=True))
    return EXIT_OK


def cmd_renyi(args) -> int:
    w = load_state(args.state)
    idx = RenyiIndex(args.p, args.q)
    val = wigner_renyi(w, idx, _quad_profile())
    print(json.dumps({"schema_version": SCHEMA_VERSION, "alpha": idx.alpha,
                      "renyi": val}, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_figure(args) -> int:
    manifest = figures.run_figure(args.figure_id, args.out,
                                  inset_n_max=args.inset_n_max,
                                  fit_window=args.fit_window)
    if args.figure_id == "all":
        ok = all(m["checks"].get("passed", False) for m in manifest.values())
    else:
        ok = manifest["checks"].get("passed", False)
    print(f"figure data written to {args.out}; checks "
          f"{'passed' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_ERROR


def cmd_corpus(args) -> int:
    report = figures.corpus_run(args.out, rgu_samples=args.samples,
                                seed=args.seed)
    print(f"corpus: {len(report['records'])} records, "
          f"{report['result9_violations']} negativity violations")
    return EXIT_OK if report["passed"] else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wigmaj",
        description="Continuous majorization of Wigner functions")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("state", help="state utilities")
    ssub = sp.add_subparsers(dest="subcommand", required=True)
    se = ssub.add_parser("eval", help="sample a state on a grid")
    se.add_argument("state")
    se.add_argument("--halfwidth", type=float, default=6.0)
    se.add_argument("--points", type=int, default=101)
    se.add_argument("--out", required=True)
    se.set_defaults(func=cmd_state_eval)

    mj = sub.add_parser("majorize", help="compare two states")
    mj.add_argument("first")
    mj.add_argument("second")
    mj.add_argument("--proposal", required=True,
                    choices=["positive", "p1", "p2", "quasi", "detgamma", "dm"])
    mj.add_argument("--json", help="write the verdict JSON here")
    mj.add_argument("--margins-csv", help="write the margin curve here")
    mj.set_defaults(func=cmd_majorize)

    chp = sub.add_parser("channel", help="channel utilities")
    csub = chp.add_subparsers(dest="subcommand", required=True)
    ca = csub.add_parser("apply", help="apply a Gaussian channel")
    ca.add_argument("--channel", required=True)
    ca.add_argument("--state", required=True)
    ca.add_argument("--method", required=True,
                    choices=["covariance", "convolve", "analytic"])
    ca.add_argument("--halfwidth", type=float, default=6.0)
    ca.add_argument("--points", type=int, default=101)
    ca.add_argument("--out", required=True)
    ca.set_defaults(func=cmd_channel_apply)

    ng = sub.add_parser("negativity", help="Wigner logarithmic negativity")
    ng.add_argument("state")
    ng.set_defaults(func=cmd_negativity)

    ry = sub.add_parser("renyi", help="Wigner Renyi entropy")
    ry.add_argument("state")
    ry.add_argument("--p", type=int, required=True)
    ry.add_argument("--q", type=int, required=True)
    ry.set_defaults(func=cmd_renyi)

    fg = sub.add_parser("figure", help="emit figure CSV bundles")
    fg.add_argument("figure_id",
                    choices=sorted(figures.FIGURES) + ["all"])
    fg.add_argument("--out", required=True)
    fg.add_argument("--inset-n-max", type=int, default=figures.FIG2_INSET_NMAX,
                    help="largest Fock index in the negativity-scaling inset")
    fg.add_argument("--fit-window", type=int, default=figures.FIG2_FIT_WINDOW,
                    help="number of largest-n points used by the inset fit")
    fg.set_defaults(func=cmd_figure)

    cp = sub.add_parser("corpus", help="regression corpus")
    cpsub = cp.add_subparsers(dest="subcommand", required=True)
    cr = cpsub.add_parser("run")
    cr.add_argument("--out", required=True)
    cr.add_argument("--samples", type=int, default=2000)
    cr.add_argument("--seed", type=int, default=1234)
    cr.set_defaults(func=cmd_corpus)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except WigmajError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
