"""Gap alphabet, Lambda^3 gap and covering radius of Fibonacci model sets across window sizes."""

import argparse
import csv
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from meyerkit.cert import covering_radius, min_gap, vector_view
from meyerkit.cps import Window, fibonacci_scheme, generate_patch, make_box
from meyerkit.exact import parse_rational


@dataclass
class Config:
    half_widths: list[Fraction] = field(
        default_factory=lambda: [Fraction(n, 8) for n in range(2, 17)]
    )
    lo: Fraction = Fraction(0)
    hi: Fraction = Fraction(100)
    margin: Fraction = Fraction(5)
    grid_step: Fraction = Fraction(1, 10)


def run(cfg: Config):
    s = fibonacci_scheme()
    embed = lambda z: (float(s.point(z).physical[0]),)
    for r in cfg.half_widths:
        patch = generate_patch(s, Window.box(r), make_box((cfg.lo, cfg.hi)))
        inner = [p for p in patch.points if cfg.lo + cfg.margin <= p.physical[0] <= cfg.hi - cfg.margin]
        xs = [p.physical[0] for p in inner]
        gaps = sorted(set(b - a for a, b in zip(xs, xs[1:])))
        cube = min_gap([p.index for p in patch.points], 3, vector_view(2), embed=embed)
        cr = covering_radius(
            [p.physical_float() for p in patch.points],
            [(cfg.lo + cfg.margin, cfg.hi - cfg.margin)],
            cfg.grid_step,
        )
        yield {
            "half_width": str(r),
            "points": len(patch),
            "distinct_gaps": len(gaps),
            "gaps": " ".join(f"{float(g):.6f}" for g in gaps),
            "cube_gap": f"{cube.gap:.6f}",
            "covering_radius": f"{cr.radius:.4f}",
        }


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--half-widths", help="comma list of rationals")
    p.add_argument("--hi", default="100")
    args = p.parse_args()
    cfg = Config(hi=parse_rational(args.hi))
    if args.half_widths:
        cfg.half_widths = [parse_rational(t) for t in args.half_widths.split(",")]
    rows = list(run(cfg))
    w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


if __name__ == "__main__":
    main()
