"""Exponent n, log2 c and log2 of the cover bound over a grid of (K, m)."""

import argparse
import csv
import sys
from dataclasses import dataclass

from meyerkit.cert import massicot_wagner_bound


@dataclass
class Config:
    K_max: int = 8
    m_max: int = 4


def run(cfg: Config):
    for K in range(1, cfg.K_max + 1):
        for m in range(1, cfg.m_max + 1):
            b = massicot_wagner_bound(K, m)
            yield {
                "K": K,
                "m": m,
                "n": b.n,
                "c": str(b.c),
                "log2_c": f"{b.c.log2():.6g}",
                "log2_cover_bound": f"{b.cover_bound.log2():.6g}",
            }


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--K-max", type=int, default=8)
    p.add_argument("--m-max", type=int, default=4)
    args = p.parse_args()
    rows = list(run(Config(args.K_max, args.m_max)))
    w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


if __name__ == "__main__":
    main()
