"""Write cross-section polygons of the built-in state spaces as CSV files.

Intended for external plotting; each file holds rx,rz vertex rows in
counter-clockwise order.
"""
import argparse
from pathlib import Path

from gptlab.polytope import facets_from_effects, slice_polygon
from gptlab.serialize import csv_text
from gptlab.spaces import hex_effect_operators, square_effect_operators


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="out", help="directory for the CSV files")
    parser.add_argument("--ry", type=float, default=0.0, help="slice height")
    args = parser.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    operators = {"hex": hex_effect_operators, "square": square_effect_operators}
    for name, build in operators.items():
        ops, labels = build()
        poly = slice_polygon(facets_from_effects(ops, labels), args.ry)
        rows = [[float(p[0]), float(p[1])] for p in poly]
        target = outdir / f"{name}-slice-ry{args.ry:g}.csv"
        target.write_text(csv_text(["rx", "rz"], rows), encoding="utf-8")
        print(f"wrote {target} ({len(rows)} vertices)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
