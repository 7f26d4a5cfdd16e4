"""How often genericize succeeds, and after how many attempts, as the input
three-space moves away from the positive frame of 3U.

    python scripts/genericize_rate.py --field sqrt:2 --trials 100
"""

import argparse
import random
import statistics
from dataclasses import dataclass
from fractions import Fraction

from hktorelli.errors import BudgetExhausted, DependentSpan, NotPositive
from hktorelli.lattice import make_catalog
from hktorelli.scalar import FVector, field_by_name
from hktorelli.twistor import genericize, line_through


@dataclass
class Config:
    field: str = "sqrt:2"
    trials: int = 100
    budget: int = 50
    seed: int = 0


SPREADS = (Fraction(1, 8), Fraction(1, 2), Fraction(1))


def run(cfg: Config) -> list[dict]:
    lat = make_catalog("3u")
    field = field_by_name(cfg.field)
    frame = [FVector(v) for v in lat.positive_frame()]
    rows = []
    for spread in SPREADS:
        ok, attempts, skipped = 0, [], 0
        for i in range(cfg.trials):
            rng = random.Random(cfg.seed + i)
            ws = [f + FVector([rng.randint(-1, 1) for _ in range(lat.rank)]).scale(spread) for f in frame]
            try:
                line = line_through(lat, *ws)
            except (NotPositive, DependentSpan):
                skipped += 1
                continue
            try:
                g = genericize(line, field, cfg.seed + i, budget=cfg.budget)
            except BudgetExhausted:
                continue
            ok += 1
            attempts.append(g.attempts)
        tried = cfg.trials - skipped
        rows.append({
            "spread": str(spread),
            "positive_inputs": tried,
            "success_rate": round(ok / tried, 3) if tried else None,
            "mean_attempts": round(statistics.mean(attempts), 2) if attempts else None,
        })
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, value in vars(Config()).items():
        p.add_argument(f"--{name}", type=type(value), default=value)
    cfg = Config(**vars(p.parse_args()))
    for row in run(cfg):
        print("  ".join(f"{k}={v}" for k, v in row.items()))


if __name__ == "__main__":
    main()
