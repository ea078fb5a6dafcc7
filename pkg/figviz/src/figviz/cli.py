"""figviz <figure_id> --bundle <dir> --out <file.png|pdf>"""

from __future__ import annotations

import argparse
import sys

from .render import COMBINED, PANELS, BundleError, RenderRefused, render


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="figviz",
                                 description="Render archived figure bundles")
    ap.add_argument("figure_id", choices=sorted(PANELS) + sorted(COMBINED))
    ap.add_argument("--bundle", required=True, help="directory with CSVs and manifests")
    ap.add_argument("--out", required=True, help="output image path (.png/.pdf)")
    ap.add_argument("--style", help="JSON style profile overriding defaults")
    args = ap.parse_args(argv)
    try:
        summary = render(args.figure_id, args.bundle, args.out, args.style)
    except (BundleError, RenderRefused) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {summary['output']} "
          f"({summary['n_axes']} axes, "
          f"{sum(a['lines'] for a in summary['axes'])} series)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
