"""Reconstruction error of linear-inversion tomography against the number of
shots, for the complete MUB ensemble in a chosen prime dimension.

The Frobenius error should fall roughly like 1/sqrt(shots).

    python3 scripts/tomography_shots.py --dim 3 --trials 20
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from complementarity.linalg import RngSpec, ginibre_state
from complementarity.measurements import WeightedEnsemble, mub_measurements
from complementarity.views import reconstruct_state


@dataclass(frozen=True)
class ShotsConfig:
    dim: int = 2
    trials: int = 20
    shots: tuple = (100, 1_000, 10_000, 100_000)
    seed: int = 0


def sampled(e: WeightedEnsemble, rho, shots: int, gen) -> list[np.ndarray]:
    out = []
    for p in e.probabilities(rho):
        p = np.clip(p, 0.0, None)
        out.append(gen.multinomial(shots, p / p.sum()) / shots)
    return out


def run(cfg: ShotsConfig) -> list[tuple[int, float, float]]:
    gen = RngSpec(cfg.seed, "tomography-shots").generator()
    e = WeightedEnsemble.uniform(mub_measurements(cfg.dim))
    rows = []
    for n in cfg.shots:
        raw, projected = [], []
        for _ in range(cfg.trials):
            rho = ginibre_state(cfg.dim, rng=gen)
            rec = reconstruct_state(e, sampled(e, rho, n, gen), tol=1e-6)
            raw.append(np.linalg.norm(rec.raw - rho))
            projected.append(np.linalg.norm(rec.projected - rho))
        rows.append((n, float(np.mean(raw)), float(np.mean(projected))))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dim", type=int, default=ShotsConfig.dim)
    parser.add_argument("--trials", type=int, default=ShotsConfig.trials)
    parser.add_argument("--seed", type=int, default=ShotsConfig.seed)
    args = parser.parse_args()
    rows = run(ShotsConfig(dim=args.dim, trials=args.trials, seed=args.seed))
    print(f"{'shots':>8} {'raw error':>12} {'psd error':>12} {'err*sqrt(N)':>12}")
    for n, raw, proj in rows:
        print(f"{n:>8} {raw:12.4e} {proj:12.4e} {raw * np.sqrt(n):12.4f}")


if __name__ == "__main__":
    main()
