"""Picard rank of random K3 periods against the degree of their field, next to
the counting bound max(0, 22 - 2d), plus (-2)-root counts for a period whose
Picard lattice is exactly E8(-1).

    python scripts/picard_ranks.py --samples 3
"""

import argparse
import random
from dataclasses import dataclass

from hktorelli.lattice import direct_sum, e8_negative, hyperbolic_sum, make_catalog
from hktorelli.period import make_period, picard_lattice, random_generic_period, random_period
from hktorelli.scalar import QQ, radical_field
from hktorelli.weyl import roots_of_picard


@dataclass
class Config:
    samples: int = 3
    seed: int = 0
    max_degree: int = 11


def picard_table(cfg: Config) -> list[dict]:
    k3 = make_catalog("k3")
    rows = []
    for d in range(1, cfg.max_degree + 1):
        field = radical_field(d) if d > 1 else QQ
        ranks = []
        for i in range(cfg.samples):
            p = random_period(k3, field, random.Random(cfg.seed + 100 * d + i))
            ranks.append(picard_lattice(p).rank)
        rows.append({"degree": d, "bound": max(0, 22 - 2 * d), "ranks": ranks})
    return rows


def e8_roots(seed: int) -> dict:
    lat = direct_sum(hyperbolic_sum(3), e8_negative())
    p, _ = random_generic_period(hyperbolic_sum(3), radical_field(7), seed)
    pad = [0] * 8
    q = make_period(lat, list(p.a.coords) + pad, list(p.b.coords) + pad)
    return {
        "picard_rank": picard_lattice(q).rank,
        "roots_all": len(roots_of_picard(q, None)),
        "roots_box1": len(roots_of_picard(q, 1, method="box")),
    }


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, value in vars(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=type(value), default=value)
    cfg = Config(**vars(p.parse_args()))
    print("K3 Picard rank by field degree")
    for row in picard_table(cfg):
        print(f"  d={row['degree']:2d}  bound={row['bound']:2d}  ranks={row['ranks']}")
    print("3U + E8(-1), generic in 3U:", e8_roots(cfg.seed))


if __name__ == "__main__":
    main()
