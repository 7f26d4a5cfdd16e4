"""Route and length statistics for connect_global on random rational pairs.

    python scripts/chain_statistics.py --lattice 3u --pairs 50
"""

import argparse
import random
import statistics
import time
from collections import Counter
from dataclasses import dataclass

from hktorelli.connectivity import connect_global
from hktorelli.errors import DependentSpan, NotPositive
from hktorelli.lattice import make_catalog
from hktorelli.period import make_period
from hktorelli.verify import verify_chain


@dataclass
class Config:
    lattice: str = "3u"
    pairs: int = 50
    box: int = 3
    seed: int = 0
    conjugate_every: int = 10


def rational_period(lattice, rng, box):
    while True:
        a = [rng.randint(-box, box) for _ in range(lattice.rank)]
        b = [rng.randint(-box, box) for _ in range(lattice.rank)]
        try:
            return make_period(lattice, a, b)
        except (NotPositive, DependentSpan):
            continue


def run(cfg: Config) -> dict:
    lat = make_catalog(cfg.lattice)
    routes, lengths, failures = Counter(), [], 0
    start = time.perf_counter()
    for i in range(cfg.pairs):
        rng = random.Random(cfg.seed + i)
        x = rational_period(lat, rng, cfg.box)
        conj = cfg.conjugate_every and i % cfg.conjugate_every == 0
        y = x.conjugate() if conj else rational_period(lat, rng, cfg.box)
        cert = connect_global(x, y, seed=cfg.seed + i)
        routes[cert.notes.get("route", "empty")] += 1
        lengths.append(cert.length)
        failures += not verify_chain(cert).ok
    return {
        "lattice": lat.name,
        "pairs": cfg.pairs,
        "routes": dict(routes),
        "length_mean": round(statistics.mean(lengths), 2),
        "length_median": statistics.median(lengths),
        "length_max": max(lengths),
        "verify_failures": failures,
        "seconds": round(time.perf_counter() - start, 1),
    }


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, value in vars(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=type(value), default=value)
    cfg = Config(**vars(p.parse_args()))
    for k, v in run(cfg).items():
        print(f"{k}: {v}")


if __name__ == "__main__":
    main()
