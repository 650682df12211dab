#!/usr/bin/env python3
"""Regenerate every region plot at the benchmark payoffs (3, 0, 5, 1).

Writes one CSV and one SVG per figure into the output directory (default
out/).  Grid resolution is configurable; 512x512 matches the scans the
acceptance suite checks.
"""
import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from qrpd.cli import FIGURE_PAIRS, write_svg
from qrpd.game import GamePayoffs
from qrpd.nash import scan_region


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="out")
    parser.add_argument("--steps", type=int, default=512)
    args = parser.parse_args()

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    game = GamePayoffs(3, 0, 5, 1)
    for figure, pair in sorted(FIGURE_PAIRS.items()):
        grid = scan_region(pair, game, w_steps=args.steps,
                           eps_steps=args.steps)
        csv_path = out_dir / f"figure_{figure}_{pair}.csv"
        svg_path = out_dir / f"figure_{figure}_{pair}.svg"
        with open(csv_path, "w", encoding="utf-8") as fh:
            grid.write_csv(fh)
        with open(svg_path, "w", encoding="utf-8") as fh:
            write_svg(grid, fh)
        counts = {name: int((grid.codes == code).sum())
                  for code, name in enumerate(("NEITHER", "FIRST", "SECOND",
                                               "BOTH"))}
        print(f"figure {figure:3s} ({pair}): {csv_path} {svg_path} {counts}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
