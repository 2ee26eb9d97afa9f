"""Empirical defects of Brooks quasi-morphisms and quasi-kernel cover sizes against the lemma bound."""

import argparse
import csv
import sys
from dataclasses import dataclass, field

from meyerkit.freegroup import BrooksQM, defect_max, quasi_kernel_bound, quasi_kernel_cover


@dataclass
class Config:
    words: list[str] = field(default_factory=lambda: ["ab", "aB", "aba", "abAB", "aab"])
    radius: int = 4
    cover_radius: int = 4
    levels: list[int] = field(default_factory=lambda: [1, 2, 4, 8])  # R - C offsets


def run(cfg: Config):
    for text in cfg.words:
        f = BrooksQM.of(text)
        d = defect_max(f, cfg.radius)
        for offset in cfg.levels:
            R = f.defect_bound + offset
            cert = quasi_kernel_cover(f, R, f.defect_bound, cfg.cover_radius)
            yield {
                "word": text,
                "analytic_defect": f.defect_bound,
                "empirical_defect": d.max_defect,
                "R": R,
                "F_size": len(cert.F),
                "lemma_bound": f"{float(quasi_kernel_bound(R, f.defect_bound)):.3f}",
                "verified": cert.verified,
            }


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--words", help="comma list of pattern words")
    p.add_argument("--radius", type=int, default=4)
    args = p.parse_args()
    cfg = Config(radius=args.radius, cover_radius=args.radius)
    if args.words:
        cfg.words = args.words.split(",")
    rows = list(run(cfg))
    w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


if __name__ == "__main__":
    main()
